#include <doctest.h>

#include <random>
#include <set>

#include "expoknap/relknap.hpp"

using namespace expoknap;

namespace {

const std::vector<std::uint32_t> kAB{0, 1};
const Alphabet kAl({"a", "b"});

Word W(const char* s) { return kAl.parse(s); }

std::shared_ptr<Nfa> star(const Word& u) {
  auto n = std::make_shared<Nfa>(4);
  n->state_count = static_cast<std::uint32_t>(u.size());
  for (std::uint32_t i = 0; i < u.size(); ++i) n->add_edge(i, u[i].code, static_cast<std::uint32_t>((i + 1) % u.size()));
  n->initial = {0};
  n->final_states = {0};
  return n;
}

// Words of L_{from, to} up to a length, by path enumeration.
std::set<Word> words_between(const Nfa& a, const std::vector<std::uint32_t>& from,
                             const std::vector<std::uint32_t>& to, std::size_t max_len) {
  std::set<Word> out;
  std::set<std::uint32_t> fin(to.begin(), to.end());
  std::vector<std::pair<std::uint32_t, Word>> frontier;
  for (auto s : from) frontier.push_back({s, {}});
  for (std::size_t len = 0; len <= max_len; ++len) {
    std::vector<std::pair<std::uint32_t, Word>> next;
    for (auto& [s, w] : frontier) {
      if (fin.count(s)) out.insert(w);
      if (len == max_len) continue;
      for (const auto& e : a.edges)
        if (e.from == s) {
          Word x = w;
          x.push_back(Letter{e.letter});
          next.push_back({e.to, std::move(x)});
        }
    }
    frontier = std::move(next);
  }
  return out;
}

std::set<Word> words(const Nfa& a, std::size_t max_len) { return words_between(a, a.initial, a.final_states, max_len); }

bool trivial(const Word& w) { return free_reduce(w).empty(); }

// Pairs accepted by a transducer with both components bounded.
std::set<std::pair<Word, Word>> relation(const Transducer& t, std::size_t max_len) {
  std::set<std::pair<Word, Word>> out;
  std::set<std::uint32_t> fin(t.final_states.begin(), t.final_states.end());
  struct Item {
    std::uint32_t s;
    Word a, b;
  };
  std::vector<Item> stack;
  for (auto s : t.initial) stack.push_back({s, {}, {}});
  while (!stack.empty()) {
    auto it = std::move(stack.back());
    stack.pop_back();
    if (fin.count(it.s)) out.insert({it.a, it.b});
    for (const auto& e : t.edges) {
      if (e.from != it.s) continue;
      Item n = it;
      n.s = e.to;
      auto& side = e.tape == 1 ? n.a : n.b;
      if (side.size() == max_len) continue;
      side.push_back(Letter{e.letter});
      stack.push_back(std::move(n));
    }
  }
  return out;
}

Word random_word(std::mt19937& rng, std::size_t max_len) {
  std::uniform_int_distribution<std::size_t> len(0, max_len);
  std::uniform_int_distribution<std::uint32_t> letter(0, 3);
  Word w;
  for (std::size_t i = len(rng); i > 0; --i) w.push_back(Letter{letter(rng)});
  return free_reduce(w);
}

Word random_nonempty(std::mt19937& rng, std::size_t max_len) {
  for (;;) {
    Word w = random_word(rng, max_len);
    if (!w.empty()) return w;
  }
}

Vec parikh_of(const Word& w) { return parikh_vector(w, 4); }

}  // namespace

TEST_CASE("ball transducer small relations") {
  auto astar = star(W("a"));
  auto t = ball_transducer({}, *astar, {}, *astar, 2);
  for (const auto& [u1, u2] : relation(t, 5)) CHECK(u1 == u2);
  CHECK(relation(t, 5).size() == 6);

  auto tb = ball_transducer(W("b"), *astar, W("b"), *astar, 4);
  auto rel = relation(tb, 8);
  CHECK(rel == std::set<std::pair<Word, Word>>{{{}, {}}});
}

TEST_CASE("ball transducer matches brute force on subgroup languages") {
  std::mt19937 rng(11);
  for (int round = 0; round < 50; ++round) {
    auto g1 = StallingsGraph::build({random_nonempty(rng, 3)}, 4);
    auto g2 = StallingsGraph::build({random_nonempty(rng, 3), random_word(rng, 2)}, 4);
    Nfa L1 = g1.subgroup_language(), L2 = g2.subgroup_language();
    Word v1 = random_word(rng, 2), v2 = random_word(rng, 2);
    auto t = ball_transducer(v1, L1, v2, L2, v1.size() + v2.size() + 2);
    auto got = relation(t, 6);
    std::set<std::pair<Word, Word>> want;
    for (const auto& u1 : words(L1, 6))
      for (const auto& u2 : words(L2, 6))
        if (trivial(concat({v1, u1, invert(v2), invert(u2)}))) want.insert({u1, u2});
    CHECK(got == want);
  }
}

TEST_CASE("pair parikh") {
  auto astar = star(W("a"));
  auto s = pair_parikh({}, *astar, {}, *astar);
  CHECK(s.dim() == 8);
  for (std::uint64_t n = 0; n < 6; ++n)
    for (std::uint64_t m = 0; m < 6; ++m) CHECK(s.contains(Vec{n, 0, 0, 0, m, 0, 0, 0}) == (n == m));
  auto bstar = star(W("b"));
  auto none = pair_parikh(W("a"), *bstar, {}, *bstar);
  CHECK(none.is_empty());

  std::mt19937 rng(5);
  for (int round = 0; round < 50; ++round) {
    auto g1 = StallingsGraph::build({random_nonempty(rng, 2)}, 4);
    auto g2 = StallingsGraph::build({random_nonempty(rng, 2)}, 4);
    Nfa L1 = g1.subgroup_language(), L2 = g2.subgroup_language();
    Word v1 = random_word(rng, 2), v2 = random_word(rng, 2);
    auto pp = pair_parikh(v1, L1, v2, L2);
    std::set<Vec> want;
    for (const auto& u1 : words(L1, 6))
      for (const auto& u2 : words(L2, 6))
        if (trivial(concat({v1, u1, invert(v2), invert(u2)}))) {
          Vec x = parikh_of(u1), y = parikh_of(u2);
          x.insert(x.end(), y.begin(), y.end());
          want.insert(x);
        }
    // Every short witness is present; members with short witnesses are found.
    for (const auto& x : want) CHECK(pp.contains(x));
  }
}

TEST_CASE("polygon base cases") {
  auto eps = std::make_shared<Nfa>(4);
  eps->state_count = 1;
  eps->initial = eps->final_states = {0};
  auto one = polygon_set({SideSpec(eps, 0, 0, {})}, {});
  CHECK(one.dim() == 4);
  CHECK(equivalent(one, SolutionSet::point(one.vars(), Vec(4, 0))));
  CHECK(polygon_set({SideSpec(eps, 0, 0, W("a"))}, {}).is_empty());

  auto astar = star(W("a"));
  auto ainv = star(W("a^-1"));
  auto two = polygon_set({SideSpec(astar, 0, 0, {}), SideSpec(ainv, 0, 0, {})}, {});
  for (std::uint64_t n = 0; n <= 8; ++n)
    for (std::uint64_t m = 0; m <= 8; ++m) {
      Vec v(8, 0);
      v[0] = n;
      v[5] = m;
      CHECK(two.contains(v) == (n == m));
    }
}

TEST_CASE("polygon triangles agree with brute force") {
  // w1 w2 w3 v = 1 with w_i ∈ u_i*.
  std::mt19937 rng(3);
  for (int round = 0; round < 12; ++round) {
    Word u[3];
    for (auto& x : u) x = cyclic_decompose(random_nonempty(rng, 2)).core;
    Word v = random_word(rng, 3);
    std::vector<SideSpec> sides{SideSpec(star(u[0]), 0, 0, {}), SideSpec(star(u[1]), 0, 0, {}),
                                SideSpec(star(u[2]), 0, 0, v)};
    auto s = polygon_set(sides, {});
    for (std::uint64_t i = 0; i <= 4; ++i)
      for (std::uint64_t j = 0; j <= 4; ++j)
        for (std::uint64_t k = 0; k <= 4; ++k) {
          bool want = trivial(concat({power(u[0], i), power(u[1], j), power(u[2], k), v}));
          Vec x;
          for (auto [w, n] : {std::pair{u[0], i}, {u[1], j}, {u[2], k}}) {
            auto p = parikh_of(power(w, n));
            x.insert(x.end(), p.begin(), p.end());
          }
          CHECK(s.contains(x) == want);
        }
  }
}

TEST_CASE("normalize") {
  KnapsackExpr e;
  e.powers = {{W("a b a^-1"), "x"}};
  e.constants = {{}, W("b")};
  auto n = normalize(e);
  CHECK(n.expr.constants[0] == W("a"));
  CHECK(n.expr.powers[0].base == W("b"));
  CHECK(n.expr.constants[1] == W("a^-1 b"));
  CHECK(n.scale == std::vector<std::uint64_t>{1});
  CHECK(n.shift == std::vector<std::uint64_t>{0});

  KnapsackExpr t;
  t.powers = {{W("a a^-1"), "x"}, {W("b"), "y"}};
  t.constants = {W("a"), W("b"), {}};
  auto nt = normalize(t);
  CHECK(nt.free_vars == std::vector<std::string>{"x"});
  CHECK(nt.expr.powers.size() == 1);
  CHECK(nt.expr.constants[0] == W("a b"));

  KnapsackExpr rep;
  rep.powers = {{W("a"), "x"}, {W("b"), "x"}};
  rep.constants = {{}, {}, {}};
  CHECK_THROWS_AS(normalize(rep), std::invalid_argument);
}

TEST_CASE("relative knapsack in a subgroup") {
  KnapsackExpr e;
  e.powers = {{W("a"), "x"}, {W("b"), "y"}};
  e.constants = {{}, {}, {}};
  auto A = StallingsGraph::build({W("a a"), W("b b b")}, 4);
  auto s = rel_sol(e, A);
  CHECK(s.vars() == std::vector<std::string>{"x", "y"});
  for (std::uint64_t x = 0; x <= 12; ++x)
    for (std::uint64_t y = 0; y <= 12; ++y) CHECK(s.contains(Vec{x, y}) == (x % 2 == 0 && y % 3 == 0));

  KnapsackExpr ax;
  ax.powers = {{W("a"), "x"}};
  ax.constants = {{}, {}};
  auto only_zero = rel_sol(ax, StallingsGraph::build({}, 4));
  CHECK(equivalent(only_zero, SolutionSet::point({"x"}, {0})));

  auto all = rel_sol(e, StallingsGraph::whole(kAB, 4));
  CHECK(equivalent(all, SolutionSet::universe({"x", "y"})));

  KnapsackExpr constant;
  constant.constants = {W("a a")};
  CHECK(!rel_sol(constant, A).is_empty());
  constant.constants = {W("a")};
  CHECK(rel_sol(constant, A).is_empty());
}

TEST_CASE("relative knapsack against brute force") {
  std::mt19937 rng(21);
  for (int round = 0; round < 30; ++round) {
    const std::size_t k = 1 + round % 3;
    KnapsackExpr e;
    for (std::size_t i = 0; i <= k; ++i) e.constants.push_back(random_word(rng, 2));
    e.constants.erase(e.constants.begin());
    for (std::size_t i = 0; i < k; ++i) e.powers.push_back({random_word(rng, 2), "x" + std::to_string(i)});
    std::vector<Word> gens;
    for (int g = rng() % 3; g > 0; --g) gens.push_back(random_nonempty(rng, 3));
    auto A = StallingsGraph::build(gens, 4);
    auto s = rel_sol(e, A);
    const std::uint64_t box = k == 3 ? 3 : 5;
    std::size_t agree = 0, total = 0;
    for (const auto& pt : SolutionSet::universe(s.vars()).enumerate(box)) {
      std::map<std::string, std::uint64_t> sigma;
      for (std::size_t i = 0; i < k; ++i) sigma[s.vars()[i]] = pt[i];
      bool want = A.contains(e.evaluate(sigma));
      ++total;
      agree += s.contains(pt) == want;
    }
    CHECK(agree == total);
  }
}

TEST_CASE("cutting-word radius is monotone and stable") {
  std::mt19937 rng(8);
  for (int round = 0; round < 6; ++round) {
    KnapsackExpr e;
    e.constants = {random_word(rng, 2), random_word(rng, 2), random_word(rng, 1)};
    e.powers = {{random_nonempty(rng, 2), "x"}, {random_nonempty(rng, 2), "y"}};
    auto A = StallingsGraph::build({random_nonempty(rng, 2)}, 4);
    RelKnapConfig c0, c1;
    c1.kappa = 1;
    auto s0 = rel_sol(e, A, c0), s1 = rel_sol(e, A, c1);
    CHECK(is_subset(s0, s1));
    CHECK(equivalent(s0, s1));
  }
}

TEST_CASE("effort limit is reported") {
  KnapsackExpr e;
  e.powers = {{W("a"), "x"}, {W("b"), "y"}, {W("a b"), "z"}};
  e.constants = {{}, {}, {}, {}};
  RelKnapConfig c;
  c.effort = 3;
  CHECK_THROWS_AS(rel_sol(e, StallingsGraph::build({}, 4), c), EffortExceeded);
}

TEST_CASE("divide coordinates") {
  auto evens = formula_to_set(Formula::exists("h", Formula::eq(Formula::Term::var("x"), Formula::Term::var("h", 2))),
                              {"x"});
  CHECK(equivalent(divide_coords(evens, {2}), SolutionSet::universe({"x"})));
  CHECK(equivalent(divide_coords(evens, {1}), evens));
  auto s = formula_to_set(Formula::le(Formula::Term::var("x") + Formula::Term::var("y", 3), Formula::Term::num(20)),
                          {"x", "y"});
  auto d = divide_coords(s, {2, 3});
  for (std::uint64_t x = 0; x <= 20; ++x)
    for (std::uint64_t y = 0; y <= 20; ++y) CHECK(d.contains(Vec{x, y}) == (2 * x + 9 * y <= 20));
  CHECK_THROWS_AS(divide_coords(s, {0, 1}), std::invalid_argument);
}
