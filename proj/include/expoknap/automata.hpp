#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "expoknap/presburger.hpp"

namespace expoknap {

/// Nondeterministic automaton without ε-transitions. Letters are integers
/// below letter_count; for group alphabets they are Letter codes.
struct Nfa {
  struct Edge {
    std::uint32_t from;
    std::uint32_t letter;
    std::uint32_t to;
    friend bool operator==(const Edge&, const Edge&) = default;
    friend auto operator<=>(const Edge&, const Edge&) = default;
  };

  std::size_t letter_count = 0;
  std::uint32_t state_count = 0;
  std::vector<std::uint32_t> initial;
  std::vector<std::uint32_t> final_states;
  std::vector<Edge> edges;

  Nfa() = default;
  explicit Nfa(std::size_t letters) : letter_count(letters) {}

  std::uint32_t add_state() { return state_count++; }
  void add_edge(std::uint32_t from, std::uint32_t letter, std::uint32_t to);

  bool accepts(const std::vector<std::uint32_t>& word) const;
  bool is_empty() const;

  /// {"letters":k,"states":n,"initial":[..],"final":[..],"transitions":[[p,a,q],..]}.
  /// With "alphabet":[names] present, letters may also be given by name.
  nlohmann::json to_json() const;
  static Nfa from_json(const nlohmann::json& j);
};

/// Removes states that are not both accessible and co-accessible.
Nfa trim(const Nfa& a);

/// Path labels from p to q, trimmed.
Nfa language_between(const Nfa& a, std::uint32_t p, std::uint32_t q);

/// Disjoint union.
Nfa nfa_union(const Nfa& a, const Nfa& b);

/// Parikh image; coordinate i counts letter i.
SemilinearRep parikh(const Nfa& a, std::vector<std::string> coordinate_names = {});

/// Image of L(A) under the morphism sending letter a to weights[a].
SemilinearRep parikh_weighted(const Nfa& a, const std::vector<Vec>& weights, std::vector<std::string> names);

/// Asynchronous two-tape transducer: every edge reads one letter on one tape.
struct Transducer {
  struct Edge {
    std::uint32_t from;
    int tape;  // 1 or 2
    std::uint32_t letter;
    std::uint32_t to;
  };

  std::size_t letter_count = 0;
  std::uint32_t state_count = 0;
  std::vector<std::uint32_t> initial;
  std::vector<std::uint32_t> final_states;
  std::vector<Edge> edges;

  std::uint32_t add_state() { return state_count++; }
  void add_edge(std::uint32_t from, int tape, std::uint32_t letter, std::uint32_t to);
};

/// Letter a on tape 1 stays a, on tape 2 becomes k + a. Same states.
Nfa transducer_to_pair_nfa(const Transducer& t);

/// Semilinear-set arithmetic used by the Parikh construction; exposed for
/// testing. Components are simplified but not canonical.
namespace semilinear {
using Components = std::vector<LinearSet>;
Components unite(Components a, const Components& b);
Components sum(const Components& a, const Components& b);
Components star(const Components& a);
Components simplify(Components a);
/// v ∈ ℕ·gens, by bounded search; false when the search budget runs out.
bool in_monoid(const Vec& v, const std::vector<Vec>& gens);
}  // namespace semilinear

}  // namespace expoknap
