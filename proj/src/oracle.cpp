#include "expoknap/oracle.hpp"

#include <omp.h>

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>

namespace expoknap::oracle {

// ---------------------------------------------------------------- subgroups

NaiveSubgroup::NaiveSubgroup(const std::vector<Word>& gens, std::size_t letter_count) {
  // Petals as an edge list, then merge vertices until the graph is deterministic.
  std::vector<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>> edges;
  std::uint32_t n = 1;
  for (const auto& g0 : gens) {
    Word g = free_reduce(g0);
    for (Letter a : g)
      if (a.code >= letter_count) throw std::invalid_argument("NaiveSubgroup: letter outside alphabet");
    std::uint32_t cur = 0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      std::uint32_t next = i + 1 == g.size() ? 0 : n++;
      edges.emplace_back(cur, g[i].code, next);
      edges.emplace_back(next, g[i].code ^ 1u, cur);
      cur = next;
    }
  }
  std::vector<std::uint32_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0u);
  auto find = [&](std::uint32_t v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  for (bool changed = true; changed;) {
    changed = false;
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> seen;
    for (auto [u, a, v] : edges) {
      u = find(u);
      v = find(v);
      auto [it, fresh] = seen.emplace(std::make_pair(u, a), v);
      if (!fresh && find(it->second) != v) {
        parent[std::max(find(it->second), v)] = std::min(find(it->second), v);
        changed = true;
      }
    }
  }
  std::map<std::uint32_t, std::uint32_t> index;
  for (std::uint32_t v = 0; v < n; ++v) index.emplace(find(v), static_cast<std::uint32_t>(index.size()));
  adj_.resize(index.size());
  for (auto [u, a, v] : edges) adj_[index[find(u)]][a] = index[find(v)];
}

bool NaiveSubgroup::contains(const Word& w) const {
  std::uint32_t v = 0;
  for (Letter a : free_reduce(w)) {
    auto it = adj_[v].find(a.code);
    if (it == adj_[v].end()) return false;
    v = it->second;
  }
  return v == 0;
}

Oracle::Oracle(Presentation p) : p_(std::move(p)) {
  for (std::uint32_t g = 0; g < p_.alphabet.generator_count(); ++g)
    if (p_.alphabet.is_stable(g) && !p_.subgroup_generators.count(g))
      throw std::invalid_argument("oracle: stable letter without subgroup");
  for (const auto& [t, gens] : p_.subgroup_generators) {
    for (const auto& w : gens)
      for (Letter a : w)
        if (p_.alphabet.is_stable(a)) throw std::invalid_argument("oracle: subgroup generator uses a stable letter");
    sub_.emplace(t, NaiveSubgroup(gens, p_.alphabet.letter_count()));
  }
}

bool Oracle::in_subgroup(std::uint32_t t, const Word& w) const { return sub_.at(t).contains(w); }

// ---------------------------------------------------------------- word problem

namespace {

// Positions (i, j) of every pin w[i] g w[j].
std::vector<std::pair<std::size_t, std::size_t>> pins(const Oracle& o, const Word& w) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  std::size_t last = SIZE_MAX;
  for (std::size_t j = 0; j < w.size(); ++j) {
    if (!o.is_stable(w[j])) continue;
    if (last != SIZE_MAX && w[j] == w[last].inverse() &&
        o.in_subgroup(w[last].generator(), Word(w.begin() + static_cast<std::ptrdiff_t>(last + 1),
                                                w.begin() + static_cast<std::ptrdiff_t>(j))))
      out.emplace_back(last, j);
    last = j;
  }
  return out;
}

Word remove_pin(Word w, std::pair<std::size_t, std::size_t> p) {
  w.erase(w.begin() + static_cast<std::ptrdiff_t>(p.second));
  w.erase(w.begin() + static_cast<std::ptrdiff_t>(p.first));
  return free_reduce(w);
}

}  // namespace

bool wp_rewrite(const Oracle& o, const Word& w0, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Word w = free_reduce(w0);
  for (;;) {
    auto ps = pins(o, w);
    if (ps.empty()) return w.empty();
    w = remove_pin(std::move(w), ps[rng() % ps.size()]);
  }
}

std::optional<bool> wp_bfs(const Oracle& o, const Word& w0, std::uint64_t effort) {
  std::set<Word> seen{free_reduce(w0)};
  std::deque<Word> queue{*seen.begin()};
  while (!queue.empty()) {
    Word w = std::move(queue.front());
    queue.pop_front();
    if (w.empty()) return true;
    for (auto p : pins(o, w)) {
      Word next = remove_pin(w, p);
      if (seen.insert(next).second) {
        if (seen.size() > effort) return std::nullopt;
        queue.push_back(std::move(next));
      }
    }
  }
  return false;
}

// ---------------------------------------------------------------- enumeration

namespace {

std::uint64_t box_size(std::size_t n, std::uint64_t box) {
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < n; ++i) total *= box + 1;
  return total;
}

Point decode(std::uint64_t index, std::size_t n, std::uint64_t box) {
  Point p(n);
  for (std::size_t i = n; i-- > 0;) {
    p[i] = index % (box + 1);
    index /= box + 1;
  }
  return p;
}

std::map<std::string, std::uint64_t> valuation(const std::vector<std::string>& vars, const Point& p) {
  std::map<std::string, std::uint64_t> s;
  for (std::size_t i = 0; i < vars.size(); ++i) s[vars[i]] = p[i];
  return s;
}

}  // namespace

std::vector<Point> brute_solutions(const Oracle& o, const KnapsackExpr& e, std::uint64_t box) {
  e.validate();
  const auto vars = e.variables();
  std::vector<Point> out;
  const std::uint64_t total = box_size(vars.size(), box);
  for (std::uint64_t i = 0; i < total; ++i) {
    Point p = decode(i, vars.size(), box);
    if (wp_rewrite(o, e.evaluate(valuation(vars, p)), i)) out.push_back(std::move(p));
  }
  return out;
}

std::vector<Point> brute_solutions_parallel(const Oracle& o, const KnapsackExpr& e, std::uint64_t box) {
  e.validate();
  const auto vars = e.variables();
  const auto total = static_cast<std::int64_t>(box_size(vars.size(), box));
  std::vector<char> hit(static_cast<std::size_t>(total), 0);
#pragma omp parallel for schedule(dynamic, 16) num_threads(thread_count())
  for (std::int64_t i = 0; i < total; ++i) {
    const auto u = static_cast<std::uint64_t>(i);
    hit[u] = wp_rewrite(o, e.evaluate(valuation(vars, decode(u, vars.size(), box))), u) ? 1 : 0;
  }
  std::vector<Point> out;
  for (std::int64_t i = 0; i < total; ++i)
    if (hit[static_cast<std::size_t>(i)]) out.push_back(decode(static_cast<std::uint64_t>(i), vars.size(), box));
  return out;
}

std::vector<Point> brute_relative(const KnapsackExpr& e, const std::vector<Word>& gens, std::size_t letter_count,
                                  std::uint64_t box) {
  e.validate();
  NaiveSubgroup A(gens, letter_count);
  const auto vars = e.variables();
  std::vector<Point> out;
  const std::uint64_t total = box_size(vars.size(), box);
  for (std::uint64_t i = 0; i < total; ++i) {
    Point p = decode(i, vars.size(), box);
    if (A.contains(free_reduce(e.evaluate(valuation(vars, p))))) out.push_back(std::move(p));
  }
  return out;
}

std::vector<Word> brute_subgroup_ball(const std::vector<Word>& gens, std::size_t maxlen) {
  std::vector<Word> step;
  for (const auto& g : gens) {
    Word r = free_reduce(g);
    if (r.empty()) continue;
    step.push_back(r);
    step.push_back(invert(r));
  }
  std::set<Word> seen{Word{}};
  std::deque<Word> queue{Word{}};
  while (!queue.empty()) {
    Word w = std::move(queue.front());
    queue.pop_front();
    for (const auto& s : step) {
      Word next = free_reduce(concat(w, s));
      if (next.size() <= maxlen && seen.insert(next).second) queue.push_back(std::move(next));
    }
  }
  return {seen.begin(), seen.end()};
}

int thread_count() {
  if (const char* env = std::getenv("EXPOKNAP_THREADS")) {
    int n = std::atoi(env);
    if (n > 0) return n;
  }
  return omp_get_max_threads();
}

}  // namespace expoknap::oracle
