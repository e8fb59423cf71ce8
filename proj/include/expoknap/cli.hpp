#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "expoknap/words.hpp"

namespace expoknap::cli {

/// Syntax or semantic error at a 1-based line/column.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& msg);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }
  const std::string& message() const { return msg_; }

 private:
  std::size_t line_, column_;
  std::string msg_;
};

struct FreeDecl {
  std::string name;
  std::vector<std::string> generators;
};

struct SubgroupDecl {
  std::string name, group;
  std::vector<Word> generators;  // over the group's alphabet
};

/// One `hnn H = extend G by t commuting A` line. Repeating the name adds a
/// further stable letter to the same group.
struct HnnDecl {
  std::string name, base, stable, subgroup;
};

struct ExprDecl {
  std::string name, group;
  KnapsackExpr expr;
};

struct Query {
  enum class Kind { Solve, System, Relative, Enumerate, Parikh };
  Kind kind = Kind::Solve;
  std::vector<std::string> names;  // expressions; Relative adds the subgroup last
  std::optional<std::uint64_t> box;
  std::string path;  // Parikh only
  std::size_t line = 0;
};

struct ProblemFile {
  std::vector<FreeDecl> frees;
  std::vector<SubgroupDecl> subgroups;
  std::vector<HnnDecl> hnns;
  std::vector<ExprDecl> exprs;
  std::vector<Query> queries;
  /// Declarations in source order, as (kind, index) for the formatter.
  std::vector<std::pair<char, std::size_t>> order;

  const FreeDecl* find_free(std::string_view name) const;
  const SubgroupDecl* find_subgroup(std::string_view name) const;
  const ExprDecl* find_expr(std::string_view name) const;
  bool is_hnn(std::string_view name) const;
  /// Generators of a group: a free group's own, or the base generators
  /// followed by the stable letters of an HNN-extension.
  Alphabet alphabet_of(std::string_view group) const;
};

ProblemFile parse(std::string_view text);
/// Canonical text; parse(format(p)) formats to the same string.
std::string format(const ProblemFile& p);

struct Options {
  std::uint64_t box = 6;
  std::size_t kappa = 0;
  std::size_t ball = 0;  // 0 = auto
  std::uint64_t effort = 0;
  bool oracle = false;
  bool timing = false;
  std::string base_dir = ".";  // parikh paths are relative to this
};

/// Answers every query. Throws EffortExceeded when a budget is hit and
/// std::runtime_error for unreadable automaton files.
nlohmann::json run(const ProblemFile& p, const Options& opts);
/// Same content as the JSON report, one fact per line.
std::string render_text(const nlohmann::json& report);

}  // namespace expoknap::cli
