#include <doctest.h>

#include <random>
#include <set>

#include "expoknap/freegroup.hpp"

using namespace expoknap;

namespace {

const std::vector<std::uint32_t> kAB{0, 1};

// Subgroup elements reachable as products of generators, up to a length.
std::set<Word> products(const std::vector<Word>& gens, std::size_t max_factors, std::size_t max_len) {
  std::set<Word> seen{Word{}};
  std::vector<Word> frontier{Word{}};
  std::vector<Word> all_gens = gens;
  for (const auto& g : gens) all_gens.push_back(invert(g));
  for (std::size_t f = 0; f < max_factors; ++f) {
    std::vector<Word> next;
    for (const auto& w : frontier)
      for (const auto& g : all_gens) {
        auto r = free_reduce(concat(w, g));
        if (r.size() <= max_len && seen.insert(r).second) next.push_back(r);
      }
    frontier = std::move(next);
  }
  return seen;
}

std::vector<std::uint32_t> codes(const Word& w) {
  std::vector<std::uint32_t> c;
  for (auto a : w) c.push_back(a.code);
  return c;
}

}  // namespace

TEST_CASE("stallings graphs") {
  Alphabet al({"a", "b"});
  auto trivial = StallingsGraph::build({}, 4);
  CHECK(trivial.vertex_count() == 1);
  CHECK(trivial.is_trivial());
  auto cyc = StallingsGraph::build({al.parse("a")}, 4);
  CHECK(cyc.vertex_count() == 1);
  CHECK(cyc.edge_count() == 1);

  auto g = StallingsGraph::build({al.parse("a a"), al.parse("b b b")}, 4);
  CHECK(g.contains(al.parse("a a a a b b b")));
  CHECK(!g.contains(al.parse("a b")));
  CHECK(g.contains({}));
  auto members = products({al.parse("a a"), al.parse("b b b")}, 8, 10);
  for (const auto& w : reduced_ball(6, kAB)) CHECK(g.contains(w) == (members.count(w) == 1));
}

TEST_CASE("folding is insensitive to generator presentation") {
  Alphabet al({"a", "b"});
  auto g1 = StallingsGraph::build({al.parse("a b a^-1"), al.parse("b b"), al.parse("a a")}, 4);
  auto g2 = StallingsGraph::build({al.parse("a^-1 a^-1"), al.parse("a b^-1 a^-1"), al.parse("b^-1 b^-1")}, 4);
  CHECK(g1.vertex_count() == g2.vertex_count());
  for (const auto& w : reduced_ball(6, kAB)) CHECK(g1.contains(w) == g2.contains(w));
}

TEST_CASE("subgroup language is the reduced member language") {
  Alphabet al({"a", "b"});
  auto g = StallingsGraph::build({al.parse("a a"), al.parse("b b b"), al.parse("a b a^-1 b")}, 4);
  auto nfa = g.subgroup_language();
  for (const auto& w : reduced_ball(7, kAB)) CHECK(nfa.accepts(codes(w)) == g.contains(w));
  CHECK(!nfa.accepts(codes(al.parse("a a b b^-1"))));
  auto t = StallingsGraph::build({}, 4).subgroup_language();
  CHECK(t.accepts({}));
  CHECK(!t.accepts({0}));
}

TEST_CASE("subgroups are closed under products") {
  Alphabet al({"a", "b"});
  auto g = StallingsGraph::build({al.parse("a b a"), al.parse("b a^-1 b")}, 4);
  std::mt19937_64 rng(4);
  std::vector<Word> members;
  for (const auto& w : reduced_ball(7, kAB))
    if (g.contains(w)) members.push_back(w);
  REQUIRE(members.size() > 2);
  for (int i = 0; i < 200; ++i) {
    const auto& x = members[rng() % members.size()];
    const auto& y = members[rng() % members.size()];
    CHECK(g.contains(concat(x, y)));
  }
}

TEST_CASE("centralizers") {
  Alphabet al({"a", "b"});
  CHECK(centralizer({{}}, kAB, 4).kind == CentralizerKind::Whole);
  auto c = centralizer({al.parse("a a")}, kAB, 4);
  REQUIRE(c.kind == CentralizerKind::Cyclic);
  CHECK(c.root == al.parse("a"));
  CHECK(centralizer({al.parse("a"), al.parse("b")}, kAB, 4).kind == CentralizerKind::Trivial);
  auto conj = centralizer({al.parse("b a a a b^-1"), al.parse("b a^-1 b^-1")}, kAB, 4);
  REQUIRE(conj.kind == CentralizerKind::Cyclic);
  CHECK(conj.root == al.parse("b a b^-1"));
  // Brute force: words commuting with a² are exactly powers of a.
  for (const auto& w : reduced_ball(6, kAB)) {
    bool commutes = free_reduce(concat({w, al.parse("a a")})) == free_reduce(concat({al.parse("a a"), w}));
    CHECK(commutes == c.graph.contains(w));
  }
}
