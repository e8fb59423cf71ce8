#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "expoknap/automata.hpp"
#include "expoknap/words.hpp"

namespace expoknap {

/// Folded, cored, based graph of a finitely generated subgroup of a free
/// group. Vertex 0 is the base; edges are stored in both directions.
class StallingsGraph {
 public:
  static constexpr std::uint32_t kNone = UINT32_MAX;

  StallingsGraph() = default;
  /// letter_count is |Σ|; every letter code of every generator must be below it.
  static StallingsGraph build(const std::vector<Word>& gens, std::size_t letter_count);
  /// The graph of the whole free group on the given generators.
  static StallingsGraph whole(const std::vector<std::uint32_t>& generators, std::size_t letter_count);

  std::size_t letter_count() const { return letters_; }
  std::uint32_t vertex_count() const { return static_cast<std::uint32_t>(next_.size()); }
  std::uint32_t target(std::uint32_t v, Letter a) const { return next_[v][a.code]; }
  std::size_t edge_count() const;

  /// Endpoint of the path from `from` labelled by w, if it exists.
  std::optional<std::uint32_t> trace(std::uint32_t from, const Word& w) const;
  bool contains(const Word& w) const;
  bool is_trivial() const { return edge_count() == 0; }

  /// Freely reduced words of subgroup elements, i.e. reduced base loops.
  Nfa subgroup_language() const;

 private:
  std::size_t letters_ = 0;
  std::vector<std::vector<std::uint32_t>> next_{std::vector<std::uint32_t>{}};
};

enum class CentralizerKind { Whole, Cyclic, Trivial };

struct Centralizer {
  CentralizerKind kind;
  Word root;  // generator of the cyclic centralizer
  StallingsGraph graph;
};

/// C(S) in the free group over the generators occurring in `generators`.
Centralizer centralizer(const std::vector<Word>& S, const std::vector<std::uint32_t>& generators,
                        std::size_t letter_count);

/// Freely reduced words of length ≤ radius over the given generators.
std::vector<Word> reduced_ball(std::size_t radius, const std::vector<std::uint32_t>& generators);

}  // namespace expoknap
