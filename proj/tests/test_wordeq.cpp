#include <doctest.h>

#include <random>

#include "expoknap/wordeq.hpp"

using namespace expoknap;

namespace {

Word build(const Word& a, const Word& q, std::uint64_t n, const Word& b) {
  Word w = a;
  for (std::uint64_t i = 0; i < n; ++i) w.insert(w.end(), q.begin(), q.end());
  w.insert(w.end(), b.begin(), b.end());
  return w;
}

Word random_word(std::mt19937_64& rng, std::size_t max_len) {
  Word w(rng() % (max_len + 1));
  for (auto& l : w) l = Letter::make(static_cast<std::uint32_t>(rng() % 2), false);
  return w;
}

}  // namespace

TEST_CASE("identical sides give the diagonal") {
  Alphabet al({"t"});
  auto t = al.parse("t");
  auto s = two_power_eq({}, t, {}, {}, t, {});
  CHECK(equivalent(s, SolutionSet::from_linear({{"x", "y"}, {{{0, 0}, {{1, 1}}}}})));
  REQUIRE(s.carried_rep());
}

TEST_CASE("length-coprime powers") {
  Alphabet al({"t"});
  auto s = two_power_eq({}, al.parse("t t"), {}, {}, al.parse("t t t"), {});
  for (std::uint64_t x = 0; x <= 30; ++x)
    for (std::uint64_t y = 0; y <= 30; ++y) CHECK(s.contains(Vec{x, y}) == (2 * x == 3 * y));
}

TEST_CASE("degenerate empty power base") {
  Alphabet al({"t"});
  auto t = al.parse("t");
  auto s = two_power_eq(t, {}, {}, {}, t, {});
  for (std::uint64_t x = 0; x <= 10; ++x)
    for (std::uint64_t y = 0; y <= 10; ++y) CHECK(s.contains(Vec{x, y}) == (y == 1));
}

TEST_CASE("random instances against brute force") {
  std::mt19937_64 rng(2024);
  for (int it = 0; it < 120; ++it) {
    auto p = random_word(rng, 4), q = random_word(rng, 4), r = random_word(rng, 4);
    auto s = random_word(rng, 4), u = random_word(rng, 4), v = random_word(rng, 4);
    auto set = two_power_eq(p, q, r, s, u, v);
    for (std::uint64_t x = 0; x <= 20; ++x)
      for (std::uint64_t y = 0; y <= 20; ++y)
        CHECK(set.contains(Vec{x, y}) == (build(p, q, x, r) == build(s, u, y, v)));
    if (!q.empty() || !u.empty())
      for (const auto& c : set.carried_rep()->components) CHECK(c.periods.size() <= 1);
  }
}
