#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "expoknap/automata.hpp"
#include "expoknap/freegroup.hpp"
#include "expoknap/presburger.hpp"
#include "expoknap/words.hpp"

namespace expoknap {

struct RelKnapConfig {
  std::size_t kappa = 0;  // cutting-word radius
  std::size_t ball = 0;   // transducer ball bound; 0 picks |v1|+|v2|+2
  std::uint64_t effort = 0;  // sub-polygon evaluations + transducer states; 0 = unlimited
  /// Generators of the free group the cutting words range over; empty means
  /// every generator of the side alphabets.
  std::vector<std::uint32_t> generators;
};

struct RelKnapStats {
  std::uint64_t polygons = 0;
  std::uint64_t memo_hits = 0;
  std::uint64_t transducer_states = 0;
};

/// One side of a polygon: a word of L_{p,q} followed by the constant v.
/// The language must be geodesic, i.e. freely reduced; construction checks
/// that no path reads a letter followed by its inverse.
struct SideSpec {
  std::shared_ptr<const Nfa> language;
  std::uint32_t p = 0, q = 0;
  Word v;
  /// Per-edge weight vectors for polygon_image; unused by polygon_set.
  std::shared_ptr<const std::vector<Vec>> edge_weights;

  SideSpec() = default;
  SideSpec(std::shared_ptr<const Nfa> lang, std::uint32_t p, std::uint32_t q, Word v,
           std::shared_ptr<const std::vector<Vec>> weights = nullptr);
  /// The side whose language is the single word w.
  static SideSpec constant(const Word& w, Word v, std::size_t letter_count);
};

/// Geodesic pairs (u1, u2) ∈ L1 × L2 with v1 u1 = u2 v2 in the free group.
/// States carry g = red(b⁻¹ v1 a) for consumed prefixes a, b with |g| ≤ B.
Transducer ball_transducer(const Word& v1, const Nfa& L1, const Word& v2, const Nfa& L2, std::size_t B);

/// Parikh pairs of ball_transducer's relation. Variables x0.., y0.. unless named.
SolutionSet pair_parikh(const Word& v1, const Nfa& L1, const Word& v2, const Nfa& L2, std::size_t B = 0,
                        std::vector<std::string> names = {});

/// Image of the polygon solutions (w1, ..., wn) under Σ_i weight(path of w_i),
/// using each side's edge weights (all of dimension dims).
semilinear::Components polygon_image(const std::vector<SideSpec>& sides, std::size_t dims,
                                     const RelKnapConfig& cfg, RelKnapStats* stats = nullptr);

/// Parikh tuples of the polygon solutions over ℕ^{n·k}; variable
/// "s<i>_<letter>" counts a letter of side i.
SolutionSet polygon_set(const std::vector<SideSpec>& sides, const RelKnapConfig& cfg,
                        RelKnapStats* stats = nullptr);

struct NormalizedExpr {
  KnapsackExpr expr;                 // cyclically reduced nonempty bases
  std::vector<std::uint64_t> scale;  // per power of expr; always 1 here
  std::vector<std::uint64_t> shift;  // always 0 here
  std::vector<std::string> free_vars;  // variables of trivial powers
};

/// Pulls conjugators of the bases into the constants and drops trivial
/// powers. Requires pairwise distinct variables.
NormalizedExpr normalize(const KnapsackExpr& e);

/// {σ | σ(e) ∈ A} over e.variables().
SolutionSet rel_sol(const KnapsackExpr& e, const StallingsGraph& A, const RelKnapConfig& cfg = {},
                    RelKnapStats* stats = nullptr);

/// {v | (ℓ1 v1, ..., ℓn vn) ∈ S}.
SolutionSet divide_coords(const SolutionSet& s, const std::vector<std::uint64_t>& ell);

}  // namespace expoknap
