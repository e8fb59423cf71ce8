#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "expoknap/words.hpp"

// Brute-force reference implementations. Nothing here calls into the
// reduction code of the solver modules; only words.hpp is shared.
namespace expoknap::oracle {

using Point = std::vector<std::uint64_t>;

/// Folded graph of ⟨gens⟩, built by naive repeated folding.
class NaiveSubgroup {
 public:
  NaiveSubgroup() = default;
  NaiveSubgroup(const std::vector<Word>& gens, std::size_t letter_count);
  bool contains(const Word& w) const;
  std::size_t vertex_count() const { return adj_.size(); }

 private:
  std::vector<std::map<std::uint32_t, std::uint32_t>> adj_;
};

/// An HNN-extension given by generators of each associated subgroup.
struct Presentation {
  Alphabet alphabet;
  std::map<std::uint32_t, std::vector<Word>> subgroup_generators;  // stable generator → gens
};

class Oracle {
 public:
  explicit Oracle(Presentation p);
  const Presentation& presentation() const { return p_; }
  bool in_subgroup(std::uint32_t stable_generator, const Word& w) const;
  bool is_stable(Letter a) const { return p_.alphabet.is_stable(a); }

 private:
  Presentation p_;
  std::map<std::uint32_t, NaiveSubgroup> sub_;
};

/// Free reductions and pin removals in random order until none applies.
/// Any maximal sequence ends in ε exactly for the identity.
bool wp_rewrite(const Oracle& o, const Word& w, std::uint64_t seed);

/// Searches every order of pin removals (free reduction after each).
/// nullopt when more than `effort` words would be visited.
std::optional<bool> wp_bfs(const Oracle& o, const Word& w, std::uint64_t effort = 200000);

/// σ ∈ [0, box]^n with σ(e) = 1 in the HNN-extension, in e.variables() order,
/// lexicographically sorted.
std::vector<Point> brute_solutions(const Oracle& o, const KnapsackExpr& e, std::uint64_t box);
/// Same points, computed with OpenMP.
std::vector<Point> brute_solutions_parallel(const Oracle& o, const KnapsackExpr& e, std::uint64_t box);

/// σ ∈ [0, box]^n with σ(e) ∈ ⟨gens⟩ in the free group.
std::vector<Point> brute_relative(const KnapsackExpr& e, const std::vector<Word>& gens, std::size_t letter_count,
                                  std::uint64_t box);

/// Reduced elements of ⟨gens⟩ reachable through products whose reduced
/// lengths all stay ≤ maxlen; sorted.
std::vector<Word> brute_subgroup_ball(const std::vector<Word>& gens, std::size_t maxlen);

/// Threads used by the parallel kernels: EXPOKNAP_THREADS if set, else the
/// OpenMP default.
int thread_count();

}  // namespace expoknap::oracle
