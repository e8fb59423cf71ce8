#include <doctest.h>

#include <random>
#include <set>

#include "expoknap/automata.hpp"

using namespace expoknap;

namespace {

Nfa random_nfa(std::mt19937_64& rng, std::uint32_t states, std::size_t letters) {
  Nfa a(letters);
  for (std::uint32_t i = 0; i < states; ++i) a.add_state();
  a.initial.push_back(0);
  for (std::uint32_t q = 0; q < states; ++q)
    if (rng() % 3 == 0) a.final_states.push_back(q);
  std::size_t m = rng() % (2 * states + 2);
  for (std::size_t i = 0; i < m; ++i)
    a.add_edge(static_cast<std::uint32_t>(rng() % states), static_cast<std::uint32_t>(rng() % letters),
               static_cast<std::uint32_t>(rng() % states));
  return a;
}

// Accepted words up to a length, by BFS over (state, word).
std::set<std::vector<std::uint32_t>> words_upto(const Nfa& a, std::size_t len) {
  std::set<std::vector<std::uint32_t>> out;
  std::vector<std::pair<std::uint32_t, std::vector<std::uint32_t>>> layer;
  for (auto q : a.initial) layer.push_back({q, {}});
  for (std::size_t l = 0; l <= len; ++l) {
    std::vector<std::pair<std::uint32_t, std::vector<std::uint32_t>>> next;
    std::set<std::pair<std::uint32_t, std::vector<std::uint32_t>>> seen;
    for (auto& [q, w] : layer) {
      if (std::find(a.final_states.begin(), a.final_states.end(), q) != a.final_states.end()) out.insert(w);
      if (l == len) continue;
      for (const auto& e : a.edges)
        if (e.from == q) {
          auto w2 = w;
          w2.push_back(e.letter);
          if (seen.insert({e.to, w2}).second) next.push_back({e.to, w2});
        }
    }
    layer = std::move(next);
  }
  return out;
}

}  // namespace

TEST_CASE("trim keeps the language") {
  std::mt19937_64 rng(1);
  for (int it = 0; it < 60; ++it) {
    auto a = random_nfa(rng, 1 + rng() % 5, 2);
    auto t = trim(a);
    CHECK(words_upto(a, 6) == words_upto(t, 6));
    CHECK(t.state_count <= a.state_count);
  }
  Nfa e(1);
  e.add_state();
  e.initial = {0};
  CHECK(trim(e).state_count == 0);
}

TEST_CASE("languages between states") {
  Nfa a(2);
  for (int i = 0; i < 3; ++i) a.add_state();
  a.add_edge(0, 0, 1);
  a.add_edge(1, 1, 2);
  auto l = language_between(a, 0, 0);
  CHECK(l.accepts({}));
  CHECK(!l.accepts({0}));
  auto l01 = language_between(a, 0, 1);
  CHECK(l01.accepts({0}));
  CHECK(!l01.accepts({}));
  CHECK_THROWS(language_between(a, 0, 7));
}

TEST_CASE("parikh images of small automata") {
  Nfa ab(2);  // (ab)*
  ab.add_state();
  ab.add_state();
  ab.initial = {0};
  ab.final_states = {0};
  ab.add_edge(0, 0, 1);
  ab.add_edge(1, 1, 0);
  auto s = SolutionSet::from_linear(parikh(ab, {"a", "b"}));
  CHECK(equivalent(s, SolutionSet::from_linear({{"a", "b"}, {{{0, 0}, {{1, 1}}}}})));

  Nfa abb(2);  // a(bb)*
  for (int i = 0; i < 3; ++i) abb.add_state();
  abb.initial = {0};
  abb.final_states = {1};
  abb.add_edge(0, 0, 1);
  abb.add_edge(1, 1, 2);
  abb.add_edge(2, 1, 1);
  auto s2 = SolutionSet::from_linear(parikh(abb, {"a", "b"}));
  CHECK(equivalent(s2, SolutionSet::from_linear({{"a", "b"}, {{{1, 0}, {{0, 2}}}}})));
}

TEST_CASE("parikh agrees with word enumeration") {
  std::mt19937_64 rng(99);
  for (int it = 0; it < 40; ++it) {
    auto a = random_nfa(rng, 1 + rng() % 4, 1 + rng() % 3);
    auto rep = parikh(a);
    auto s = SolutionSet::from_linear(rep);
    std::set<Vec> brute;
    for (const auto& w : words_upto(a, 8)) {
      Vec v(a.letter_count, 0);
      for (auto x : w) ++v[x];
      brute.insert(v);
    }
    for (const auto& v : brute) CHECK(s.contains(v));
    for (const auto& v : s.enumerate(8)) {
      std::uint64_t total = 0;
      for (auto x : v) total += x;
      if (total <= 8) CHECK(brute.count(v) == 1);
    }
  }
}

TEST_CASE("transducer pairs") {
  Transducer t;  // identity on a*
  t.letter_count = 1;
  t.add_state();
  t.add_state();
  t.initial = {0};
  t.final_states = {0};
  t.add_edge(0, 1, 0, 1);
  t.add_edge(1, 2, 0, 0);
  auto n = transducer_to_pair_nfa(t);
  CHECK(n.state_count == t.state_count);
  auto s = SolutionSet::from_linear(parikh(n, {"a", "a'"}));
  for (std::uint64_t x = 0; x < 8; ++x)
    for (std::uint64_t y = 0; y < 8; ++y) CHECK(s.contains(Vec{x, y}) == (x == y));
  Transducer empty;
  empty.letter_count = 1;
  CHECK(transducer_to_pair_nfa(empty).is_empty());
}

TEST_CASE("semilinear helpers") {
  CHECK(semilinear::in_monoid({6, 3}, {{2, 1}}));
  CHECK(!semilinear::in_monoid({5, 3}, {{2, 1}}));
  auto st = semilinear::star({{{2}, {}}, {{3}, {}}});
  auto s = SolutionSet::from_linear({{"x"}, st});
  for (std::uint64_t v = 0; v < 20; ++v) CHECK(s.contains(Vec{v}) == (v != 1));
}

TEST_CASE("json automata") {
  auto j = nlohmann::json::parse(R"({"alphabet":["a","b"],"states":2,"initial":[0],"final":[1],
                                     "transitions":[[0,"a",1],[1,"b",1]]})");
  auto a = Nfa::from_json(j);
  CHECK(a.accepts({0, 1, 1}));
  CHECK(!a.accepts({1}));
  CHECK(Nfa::from_json(a.to_json()).edges == a.edges);
}
