#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace expoknap {

using Vec = std::vector<std::uint64_t>;

/// Raised when a computation exceeds its configured effort budget. Never
/// swallowed: callers either report it or propagate it.
class EffortExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// L(b, P) = b + P·ℕ^k.
struct LinearSet {
  Vec base;
  std::vector<Vec> periods;

  friend bool operator==(const LinearSet&, const LinearSet&) = default;
};

/// Finite union of linear sets over named coordinates.
struct SemilinearRep {
  std::vector<std::string> vars;
  std::vector<LinearSet> components;

  std::size_t dim() const { return vars.size(); }
  /// Throws std::invalid_argument on a dimension mismatch.
  void validate() const;

  nlohmann::json to_json() const;
  static SemilinearRep from_json(const nlohmann::json& j);

  friend bool operator==(const SemilinearRep&, const SemilinearRep&) = default;
};

/// Deterministic complete automaton recognising the LSB-first binary
/// encodings of a subset of ℕ^d.
///
/// Storage is serialized: one tuple letter of {0,1}^d is read as d
/// consecutive bits, variable 0 first. Every state carries the layer (the
/// variable whose bit it reads next); only layer-0 states are round
/// boundaries and only they may accept. Acceptance is saturated, i.e.
/// invariant under appending all-zero rounds in both directions, so a
/// minimal automaton is canonical for its set.
class PresAutomaton {
 public:
  /// The zero-dimensional set {()}.
  PresAutomaton() = default;

  static PresAutomaton universal(std::size_t dims);
  static PresAutomaton empty(std::size_t dims);
  /// Σ coeffs[i]·x_i ≤ bound.
  static PresAutomaton linear_le(const std::vector<std::int64_t>& coeffs, std::int64_t bound);
  /// Σ coeffs[i]·x_i = bound.
  static PresAutomaton linear_eq(const std::vector<std::int64_t>& coeffs, std::int64_t bound);
  /// Exact automaton of L(b, P).
  static PresAutomaton linear_set(const LinearSet& ls, std::size_t dims);

  std::size_t dims() const { return dims_; }
  std::size_t state_count() const { return next_.size(); }

  bool accepts(std::span<const std::uint64_t> v) const;
  bool is_empty() const;
  bool is_finite() const;

  enum class BoolOp { And, Or, Diff, Xor };
  static PresAutomaton combine(const PresAutomaton& a, const PresAutomaton& b, BoolOp op);
  PresAutomaton complement() const;
  /// ∃ x_var. Removes the coordinate.
  PresAutomaton project(std::size_t var) const;
  /// Cylindrification: a fresh unconstrained coordinate at position pos.
  PresAutomaton insert_var(std::size_t pos) const;
  /// Exchanges coordinates pos and pos+1.
  PresAutomaton swap_adjacent(std::size_t pos) const;
  /// New coordinate i is old coordinate order[i].
  PresAutomaton permute(const std::vector<std::size_t>& order) const;

  static bool equivalent(const PresAutomaton& a, const PresAutomaton& b);

  /// Members with every coordinate ≤ box, sorted lexicographically.
  std::vector<Vec> enumerate(std::uint64_t box) const;
  /// All members of a finite set. Throws std::logic_error if infinite.
  std::vector<Vec> finite_members() const;

  /// Round-level transition table (tuple letters as bit strings, variable 0
  /// first). Only defined for dims ≤ 16.
  nlohmann::json to_json() const;
  static PresAutomaton from_json(const nlohmann::json& j);

 private:
  friend class AutomatonBuilder;

  std::size_t dims_ = 0;
  std::vector<std::array<std::uint32_t, 2>> next_{{0, 0}};
  std::vector<std::uint32_t> layer_{0};
  std::vector<char> accept_{1};
  std::uint32_t init_ = 0;

  void minimize();
  void saturate();
  std::vector<char> coreachable() const;
  std::uint32_t run_round(std::uint32_t q, std::uint64_t tuple_bits) const;
};

/// A subset of ℕ^U for an ordered list of variable names U, held as a
/// canonical automaton and optionally a semilinear representation that
/// denotes the same set.
class SolutionSet {
 public:
  SolutionSet() = default;
  SolutionSet(std::vector<std::string> vars, PresAutomaton dfa,
              std::optional<SemilinearRep> rep = std::nullopt);

  static SolutionSet universe(std::vector<std::string> vars);
  static SolutionSet empty(std::vector<std::string> vars);
  static SolutionSet point(std::vector<std::string> vars, const Vec& v);
  static SolutionSet from_linear(const SemilinearRep& rep);

  const std::vector<std::string>& vars() const { return vars_; }
  std::size_t dim() const { return vars_.size(); }
  const PresAutomaton& automaton() const { return dfa_; }
  const std::optional<SemilinearRep>& carried_rep() const { return rep_; }

  bool contains(std::span<const std::uint64_t> v) const { return dfa_.accepts(v); }
  bool contains(const std::map<std::string, std::uint64_t>& valuation) const;
  bool is_empty() const { return dfa_.is_empty(); }
  std::vector<Vec> enumerate(std::uint64_t box) const { return dfa_.enumerate(box); }

  /// Index of a variable, or -1.
  int index_of(const std::string& var) const;

 private:
  std::vector<std::string> vars_;
  PresAutomaton dfa_;
  std::optional<SemilinearRep> rep_;
};

// Boolean structure. Binary operations require equal variable sets (order
// may differ; the result follows the left operand's order).
SolutionSet unite(const SolutionSet& a, const SolutionSet& b);
SolutionSet intersect(const SolutionSet& a, const SolutionSet& b);
SolutionSet complement(const SolutionSet& s);
SolutionSet exists(const SolutionSet& s, const std::string& var);
SolutionSet forall(const SolutionSet& s, const std::string& var);
bool equivalent(const SolutionSet& a, const SolutionSet& b);
bool is_subset(const SolutionSet& a, const SolutionSet& b);

/// Conjunction over the union of the variable sets (cylindrifies both sides).
SolutionSet meet(const SolutionSet& a, const SolutionSet& b);

/// f ⊕ g over disjoint variable sets U ∪ V.
SolutionSet oplus(const SolutionSet& a, const SolutionSet& b);
/// L↾V for V ⊆ U, in the order given by `keep`.
SolutionSet restrict_to(const SolutionSet& s, const std::vector<std::string>& keep);
/// {m·v + d | v ∈ S}.
SolutionSet scale_shift(const SolutionSet& s, std::uint64_t m, const Vec& d);
/// S ∩ {v | v(x) = v(y)}.
SolutionSet diagonalize(const SolutionSet& s, const std::string& x, const std::string& y);
/// Renames variables; the map need not be total.
SolutionSet rename(const SolutionSet& s, const std::map<std::string, std::string>& names);
/// Same set with variables in the given order (a permutation of vars()).
SolutionSet reorder(const SolutionSet& s, const std::vector<std::string>& order);
/// Adds unconstrained variables (those of `vars` not already present).
SolutionSet cylindrify(const SolutionSet& s, const std::vector<std::string>& vars);

struct ExtractOptions {
  std::uint64_t probe_box = 12;
  std::size_t max_candidate_periods = 24;
  std::size_t max_dims = 4;
};

/// A verified semilinear representation, or nullopt (UNAVAILABLE).
std::optional<SemilinearRep> extract_semilinear(const SolutionSet& s, const ExtractOptions& opts = {});

/// Presburger formulas over (ℕ, +).
class Formula {
 public:
  struct Term {
    std::map<std::string, std::uint64_t> coeffs;
    std::uint64_t constant = 0;

    static Term var(const std::string& name, std::uint64_t c = 1) { return Term{{{name, c}}, 0}; }
    static Term num(std::uint64_t c) { return Term{{}, c}; }
    Term operator+(const Term& o) const;
  };

  enum class Kind { True, False, Le, Eq, Not, And, Or, Exists, Forall, Member };

  static Formula truth(bool value);
  static Formula le(Term lhs, Term rhs);
  static Formula lt(Term lhs, Term rhs);
  static Formula eq(Term lhs, Term rhs);
  /// (args[0], ..., args[d-1]) ∈ S; repeated names constrain equality.
  static Formula member(SolutionSet s, std::vector<std::string> args);
  static Formula exists(const std::string& var, Formula body);
  static Formula forall(const std::string& var, Formula body);
  static Formula exists(const std::vector<std::string>& vars, Formula body);

  Formula operator&&(const Formula& o) const;
  Formula operator||(const Formula& o) const;
  Formula operator!() const;
  Formula implies(const Formula& o) const { return !*this || o; }

  Kind kind() const;
  /// Free variables in order of first occurrence.
  std::vector<std::string> free_vars() const;

  /// Direct evaluation; quantifiers range over [0, quantifier_bound].
  bool evaluate(const std::map<std::string, std::uint64_t>& env, std::uint64_t quantifier_bound) const;

  struct Node;
  const Node& node() const { return *node_; }

 private:
  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;


};

/// Compiles a formula. The result ranges over `order` when given (which
/// must contain every free variable), else over free_vars().
SolutionSet formula_to_set(const Formula& f, const std::vector<std::string>& order = {});

}  // namespace expoknap
