#include "expoknap/freegroup.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>

namespace expoknap {

namespace {

struct UnionFind {
  std::vector<std::uint32_t> parent;
  std::uint32_t add() {
    parent.push_back(static_cast<std::uint32_t>(parent.size()));
    return parent.back();
  }
  std::uint32_t find(std::uint32_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  // Keeps the smaller root so the base stays 0.
  bool unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (b < a) std::swap(a, b);
    parent[b] = a;
    return true;
  }
};

struct RawEdge {
  std::uint32_t from;
  std::uint32_t letter;
  std::uint32_t to;
};

}  // namespace

StallingsGraph StallingsGraph::build(const std::vector<Word>& gens, std::size_t letter_count) {
  UnionFind uf;
  uf.add();
  std::vector<RawEdge> edges;
  for (const auto& g : gens) {
    Word w = free_reduce(g);
    for (auto a : w)
      if (a.code >= letter_count) throw std::invalid_argument("stallings: letter outside alphabet");
    std::uint32_t cur = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      std::uint32_t to = i + 1 == w.size() ? 0 : uf.add();
      edges.push_back({cur, w[i].code, to});
      cur = to;
    }
  }
  // Fold until no vertex has two equally labelled outgoing edges.
  bool changed = true;
  while (changed) {
    changed = false;
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> out;
    for (const auto& e : edges) {
      for (int dir = 0; dir < 2; ++dir) {
        std::uint32_t u = uf.find(dir ? e.to : e.from), v = uf.find(dir ? e.from : e.to);
        std::uint32_t a = dir ? (e.letter ^ 1u) : e.letter;
        auto [it, fresh] = out.emplace(std::make_pair(u, a), v);
        if (!fresh && uf.find(it->second) != v) {
          uf.unite(it->second, v);
          changed = true;
        }
      }
    }
  }
  // Deduplicate edges on the quotient.
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> adj;
  for (const auto& e : edges) {
    auto u = uf.find(e.from), v = uf.find(e.to);
    adj[{u, e.letter}] = v;
    adj[{v, e.letter ^ 1u}] = u;
  }
  // Core: drop non-base vertices of degree ≤ 1 repeatedly.
  std::map<std::uint32_t, std::size_t> degree;
  for (const auto& [key, v] : adj) ++degree[key.first];
  bool pruned = true;
  while (pruned) {
    pruned = false;
    for (auto it = adj.begin(); it != adj.end(); ++it) {
      auto u = it->first.first;
      if (u != 0 && degree[u] <= 1) {
        auto v = it->second;
        auto a = it->first.second;
        adj.erase(it);
        adj.erase({v, a ^ 1u});
        --degree[u];
        --degree[v];
        pruned = true;
        break;
      }
    }
  }
  // Renumber in BFS order from the base, letters in code order.
  std::map<std::uint32_t, std::uint32_t> id{{uf.find(0), 0}};
  std::vector<std::uint32_t> order{uf.find(0)};
  StallingsGraph g;
  g.letters_ = letter_count;
  g.next_.clear();
  for (std::size_t i = 0; i < order.size(); ++i) {
    g.next_.emplace_back(letter_count, kNone);
    for (std::uint32_t a = 0; a < letter_count; ++a) {
      auto it = adj.find({order[i], a});
      if (it == adj.end()) continue;
      auto [jt, fresh] = id.emplace(it->second, static_cast<std::uint32_t>(order.size()));
      if (fresh) order.push_back(it->second);
      g.next_[i][a] = jt->second;
    }
  }
  return g;
}

StallingsGraph StallingsGraph::whole(const std::vector<std::uint32_t>& generators, std::size_t letter_count) {
  std::vector<Word> gens;
  for (auto g : generators) gens.push_back({Letter::make(g, false)});
  return build(gens, letter_count);
}

std::size_t StallingsGraph::edge_count() const {
  std::size_t n = 0;
  for (const auto& row : next_)
    for (auto t : row) n += t != kNone;
  return n / 2;
}

std::optional<std::uint32_t> StallingsGraph::trace(std::uint32_t from, const Word& w) const {
  std::uint32_t v = from;
  for (auto a : w) {
    if (a.code >= letters_) return std::nullopt;
    v = next_[v][a.code];
    if (v == kNone) return std::nullopt;
  }
  return v;
}

bool StallingsGraph::contains(const Word& w) const {
  auto end = trace(0, free_reduce(w));
  return end && *end == 0;
}

Nfa StallingsGraph::subgroup_language() const {
  // State 0 is the start; state 1 + v·|Σ| + a means "at v, last read a".
  const auto n = vertex_count();
  Nfa nfa(letters_);
  nfa.state_count = 1 + n * static_cast<std::uint32_t>(letters_);
  nfa.initial = {0};
  nfa.final_states.push_back(0);
  auto state = [&](std::uint32_t v, std::uint32_t a) { return 1 + v * static_cast<std::uint32_t>(letters_) + a; };
  for (std::uint32_t a = 0; a < letters_; ++a) nfa.final_states.push_back(state(0, a));
  for (std::uint32_t b = 0; b < letters_; ++b)
    if (next_[0][b] != kNone) nfa.edges.push_back({0, b, state(next_[0][b], b)});
  for (std::uint32_t v = 0; v < n; ++v)
    for (std::uint32_t a = 0; a < letters_; ++a)
      for (std::uint32_t b = 0; b < letters_; ++b)
        if (b != (a ^ 1u) && next_[v][b] != kNone) nfa.edges.push_back({state(v, a), b, state(next_[v][b], b)});
  return trim(nfa);
}

Centralizer centralizer(const std::vector<Word>& S, const std::vector<std::uint32_t>& generators,
                        std::size_t letter_count) {
  std::vector<Word> nontrivial;
  for (const auto& s : S) {
    auto r = free_reduce(s);
    if (!r.empty()) nontrivial.push_back(std::move(r));
  }
  if (nontrivial.empty()) return {CentralizerKind::Whole, {}, StallingsGraph::whole(generators, letter_count)};
  auto [conj, core] = cyclic_decompose(nontrivial.front());
  Word root = free_reduce(concat({conj, primitive_root(core), invert(conj)}));
  auto cyclic = StallingsGraph::build({root}, letter_count);
  for (const auto& s : nontrivial)
    if (!cyclic.contains(s)) return {CentralizerKind::Trivial, {}, StallingsGraph::build({}, letter_count)};
  return {CentralizerKind::Cyclic, root, cyclic};
}

std::vector<Word> reduced_ball(std::size_t radius, const std::vector<std::uint32_t>& generators) {
  std::vector<Word> out{{}};
  std::size_t start = 0;
  for (std::size_t len = 1; len <= radius; ++len) {
    std::size_t end = out.size();
    for (std::size_t i = start; i < end; ++i)
      for (auto g : generators)
        for (bool inv : {false, true}) {
          Letter a = Letter::make(g, inv);
          if (!out[i].empty() && out[i].back() == a.inverse()) continue;
          Word w = out[i];
          w.push_back(a);
          out.push_back(std::move(w));
        }
    start = end;
  }
  return out;
}

}  // namespace expoknap
