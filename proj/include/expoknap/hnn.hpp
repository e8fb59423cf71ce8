#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "expoknap/freegroup.hpp"
#include "expoknap/presburger.hpp"
#include "expoknap/relknap.hpp"
#include "expoknap/words.hpp"

namespace expoknap {

/// ⟨F, t1, ..., tr | ti⁻¹ a ti = a (a ∈ Ai)⟩ over a free base group F.
/// The alphabet flags the stable letters; each has its subgroup Ai.
class HnnGroup {
 public:
  HnnGroup() = default;
  /// Throws std::invalid_argument unless every stable generator has a
  /// subgroup and every subgroup uses base letters only.
  HnnGroup(Alphabet alphabet, std::map<std::uint32_t, StallingsGraph> associated);

  const Alphabet& alphabet() const { return alphabet_; }
  std::size_t letter_count() const { return alphabet_.letter_count(); }
  bool is_stable(Letter a) const { return alphabet_.is_stable(a); }
  const StallingsGraph& subgroup(std::uint32_t stable_generator) const;
  const std::map<std::uint32_t, StallingsGraph>& subgroups() const { return associated_; }
  std::vector<std::uint32_t> base_generators() const;

  /// π_Σ and π_t.
  Word project_base(const Word& w) const;
  Word project_stable(const Word& w) const;
  bool is_base_word(const Word& w) const;

 private:
  Alphabet alphabet_;
  std::map<std::uint32_t, StallingsGraph> associated_;
};

/// Pin-free, freely reduced, H-equal to w.
Word britton_reduce(const HnnGroup& H, const Word& w);
bool is_britton_reduced(const HnnGroup& H, const Word& w);
/// Britton-reduced form of uv for Britton-reduced u, v, by the matched-syllable
/// count. Throws std::invalid_argument if u or v has a pin.
Word mult_reduce(const HnnGroup& H, const Word& u, const Word& v);
bool in_base(const HnnGroup& H, const Word& w);
bool equals_one(const HnnGroup& H, const Word& w);

/// u^m =_H s v^m p for all m, with v well-behaved (v and v² pin-free).
struct WellBehaved {
  Word s, v, p;
};
WellBehaved well_behaved_decompose(const HnnGroup& H, const Word& u);

struct HnnConfig {
  RelKnapConfig relknap;
  bool prune = true;
  std::uint64_t effort = 0;  // guesses; 0 = unlimited
};

struct HnnStats {
  std::uint64_t guesses = 0;   // complete guesses reaching the end
  std::uint64_t bands = 0;     // band constraints solved (cache misses)
  std::uint64_t rel_calls = 0;  // relative knapsack calls (cache misses)
  std::size_t max_pieces = 0;
};

/// pre · base^var · suf, with pre a suffix and suf a prefix of base; a fixed
/// word when base is empty (then the word is pre · suf).
struct PieceSpec {
  Word pre, base, suf;
  std::string var;
};

/// Valuations of left.var, right.var and the variables of e (a knapsack
/// expression over the base) with left · e · right ∈_H F, where left and
/// right are t-bearing and Britton-reduced for every exponent.
SolutionSet g_constraint_set(const HnnGroup& H, const PieceSpec& left, const KnapsackExpr& e, const PieceSpec& right,
                             const HnnConfig& cfg = {}, HnnStats* stats = nullptr);

/// u'' u^x u' e v' v^y v'' ∈_H F over (x, y, vars of e).
SolutionSet lemma2dim_set(const HnnGroup& H, const Word& u, const Word& u1, const Word& u2, const Word& v,
                          const Word& v1, const Word& v2, const KnapsackExpr& e, const HnnConfig& cfg = {},
                          const std::string& x = "x", const std::string& y = "y");

/// The one-sided and fixed forms: either side may be a fixed word.
SolutionSet remark1dim_set(const HnnGroup& H, const PieceSpec& left, const KnapsackExpr& e, const PieceSpec& right,
                           const HnnConfig& cfg = {});

/// {σ | σ(e) ∈_H F}. Variables of e must be distinct.
SolutionSet base_membership_set(const HnnGroup& H, const KnapsackExpr& e, const HnnConfig& cfg = {},
                                HnnStats* stats = nullptr);

/// {σ | σ(e) =_H 1} over e.variables(); repeated variables are allowed.
SolutionSet sol(const HnnGroup& H, const KnapsackExpr& e, const HnnConfig& cfg = {}, HnnStats* stats = nullptr);

/// Intersection of the solution sets over the union of their variables.
SolutionSet exponent_sol(const HnnGroup& H, const std::vector<KnapsackExpr>& system, const HnnConfig& cfg = {},
                         HnnStats* stats = nullptr);

/// {σ | σ(e) ∈ C(S)} in the free group, as ⋂_{a∈S} sol(e a e⁻¹ a⁻¹).
SolutionSet centralizer_membership(const KnapsackExpr& e, const std::vector<Word>& S, std::size_t letter_count,
                                   const RelKnapConfig& cfg = {});

}  // namespace expoknap
