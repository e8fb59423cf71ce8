#include "expoknap/automata.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <tuple>
#include <unordered_set>

namespace expoknap {

void Nfa::add_edge(std::uint32_t from, std::uint32_t letter, std::uint32_t to) {
  if (from >= state_count || to >= state_count) throw std::out_of_range("add_edge: unknown state");
  if (letter >= letter_count) throw std::out_of_range("add_edge: letter outside alphabet");
  edges.push_back({from, letter, to});
}

bool Nfa::accepts(const std::vector<std::uint32_t>& word) const {
  std::vector<char> cur(state_count, 0), nxt(state_count, 0);
  for (auto q : initial) cur[q] = 1;
  for (auto a : word) {
    std::fill(nxt.begin(), nxt.end(), 0);
    for (const auto& e : edges)
      if (e.letter == a && cur[e.from]) nxt[e.to] = 1;
    std::swap(cur, nxt);
  }
  return std::any_of(final_states.begin(), final_states.end(), [&](auto q) { return cur[q] != 0; });
}

bool Nfa::is_empty() const { return trim(*this).final_states.empty(); }

nlohmann::json Nfa::to_json() const {
  nlohmann::json tr = nlohmann::json::array();
  for (const auto& e : edges) tr.push_back({e.from, e.letter, e.to});
  return {{"letters", letter_count}, {"states", state_count}, {"initial", initial}, {"final", final_states},
          {"transitions", tr}};
}

Nfa Nfa::from_json(const nlohmann::json& j) {
  Nfa a;
  std::vector<std::string> alphabet;
  if (j.contains("alphabet")) alphabet = j.at("alphabet").get<std::vector<std::string>>();
  a.letter_count = j.contains("letters") ? j.at("letters").get<std::size_t>() : alphabet.size();
  if (!alphabet.empty() && alphabet.size() != a.letter_count)
    throw std::invalid_argument("nfa json: alphabet size disagrees with letters");
  a.state_count = j.at("states").get<std::uint32_t>();
  for (const auto& q : j.at("initial")) {
    a.initial.push_back(q.get<std::uint32_t>());
    if (a.initial.back() >= a.state_count) throw std::invalid_argument("nfa json: initial state out of range");
  }
  for (const auto& q : j.at("final")) {
    a.final_states.push_back(q.get<std::uint32_t>());
    if (a.final_states.back() >= a.state_count) throw std::invalid_argument("nfa json: final state out of range");
  }
  for (const auto& t : j.at("transitions")) {
    if (!t.is_array() || t.size() != 3) throw std::invalid_argument("nfa json: transition must be [from, letter, to]");
    std::uint32_t letter;
    if (t[1].is_string()) {
      auto it = std::find(alphabet.begin(), alphabet.end(), t[1].get<std::string>());
      if (it == alphabet.end()) throw std::invalid_argument("nfa json: unknown letter " + t[1].dump());
      letter = static_cast<std::uint32_t>(it - alphabet.begin());
    } else {
      letter = t[1].get<std::uint32_t>();
    }
    a.add_edge(t[0].get<std::uint32_t>(), letter, t[2].get<std::uint32_t>());
  }
  return a;
}

Nfa trim(const Nfa& a) {
  const auto n = a.state_count;
  std::vector<std::vector<std::uint32_t>> fwd(n), bwd(n);
  for (const auto& e : a.edges) {
    fwd[e.from].push_back(e.to);
    bwd[e.to].push_back(e.from);
  }
  auto sweep = [n](const std::vector<std::uint32_t>& seeds, const std::vector<std::vector<std::uint32_t>>& adj) {
    std::vector<char> seen(n, 0);
    std::vector<std::uint32_t> stack;
    for (auto q : seeds)
      if (!seen[q]) {
        seen[q] = 1;
        stack.push_back(q);
      }
    while (!stack.empty()) {
      auto q = stack.back();
      stack.pop_back();
      for (auto r : adj[q])
        if (!seen[r]) {
          seen[r] = 1;
          stack.push_back(r);
        }
    }
    return seen;
  };
  auto acc = sweep(a.initial, fwd);
  auto coacc = sweep(a.final_states, bwd);
  std::vector<std::uint32_t> id(n, UINT32_MAX);
  Nfa out(a.letter_count);
  for (std::uint32_t q = 0; q < n; ++q)
    if (acc[q] && coacc[q]) id[q] = out.add_state();
  auto keep = [&](const std::vector<std::uint32_t>& qs) {
    std::vector<std::uint32_t> r;
    for (auto q : qs)
      if (id[q] != UINT32_MAX) r.push_back(id[q]);
    std::sort(r.begin(), r.end());
    r.erase(std::unique(r.begin(), r.end()), r.end());
    return r;
  };
  out.initial = keep(a.initial);
  out.final_states = keep(a.final_states);
  for (const auto& e : a.edges)
    if (id[e.from] != UINT32_MAX && id[e.to] != UINT32_MAX) out.edges.push_back({id[e.from], e.letter, id[e.to]});
  std::sort(out.edges.begin(), out.edges.end());
  out.edges.erase(std::unique(out.edges.begin(), out.edges.end()), out.edges.end());
  return out;
}

Nfa language_between(const Nfa& a, std::uint32_t p, std::uint32_t q) {
  if (p >= a.state_count || q >= a.state_count) throw std::out_of_range("language_between: unknown state");
  Nfa b = a;
  b.initial = {p};
  b.final_states = {q};
  return trim(b);
}

Nfa nfa_union(const Nfa& a, const Nfa& b) {
  Nfa out(std::max(a.letter_count, b.letter_count));
  out.state_count = a.state_count + b.state_count;
  out.initial = a.initial;
  out.final_states = a.final_states;
  out.edges = a.edges;
  for (auto q : b.initial) out.initial.push_back(q + a.state_count);
  for (auto q : b.final_states) out.final_states.push_back(q + a.state_count);
  for (const auto& e : b.edges) out.edges.push_back({e.from + a.state_count, e.letter, e.to + a.state_count});
  return out;
}

void Transducer::add_edge(std::uint32_t from, int tape, std::uint32_t letter, std::uint32_t to) {
  if (tape != 1 && tape != 2) throw std::invalid_argument("transducer edge must read tape 1 or 2");
  if (from >= state_count || to >= state_count) throw std::out_of_range("transducer edge: unknown state");
  if (letter >= letter_count) throw std::out_of_range("transducer edge: letter outside alphabet");
  edges.push_back({from, tape, letter, to});
}

Nfa transducer_to_pair_nfa(const Transducer& t) {
  Nfa out(2 * t.letter_count);
  out.state_count = t.state_count;
  out.initial = t.initial;
  out.final_states = t.final_states;
  for (const auto& e : t.edges)
    out.edges.push_back({e.from, e.tape == 1 ? e.letter : static_cast<std::uint32_t>(t.letter_count) + e.letter, e.to});
  return out;
}

// ---------------------------------------------------------------- semilinear

namespace semilinear {

namespace {

bool is_zero(const Vec& v) {
  return std::all_of(v.begin(), v.end(), [](auto x) { return x == 0; });
}

bool leq(const Vec& a, const Vec& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}

Vec minus(const Vec& a, const Vec& b) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

Vec plus(const Vec& a, const Vec& b) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

struct VecHash {
  std::size_t operator()(const Vec& v) const noexcept {
    std::size_t h = 1469598103934665603ULL;
    for (auto x : v) h = (h ^ x) * 1099511628211ULL;
    return h;
  }
};

void normalize_periods(LinearSet& ls) {
  auto& P = ls.periods;
  P.erase(std::remove_if(P.begin(), P.end(), is_zero), P.end());
  std::sort(P.begin(), P.end());
  P.erase(std::unique(P.begin(), P.end()), P.end());
  for (std::size_t i = 0; i < P.size();) {
    std::vector<Vec> others;
    for (std::size_t j = 0; j < P.size(); ++j)
      if (j != i) others.push_back(P[j]);
    if (!others.empty() && in_monoid(P[i], others))
      P.erase(P.begin() + static_cast<std::ptrdiff_t>(i));
    else
      ++i;
  }
}

// L(b', P') ⊇ L(b, P)?
bool covers(const LinearSet& big, const LinearSet& small) {
  if (!leq(big.base, small.base)) return false;
  if (!in_monoid(minus(small.base, big.base), big.periods)) return false;
  for (const auto& p : small.periods)
    if (!std::binary_search(big.periods.begin(), big.periods.end(), p) && !in_monoid(p, big.periods)) return false;
  return true;
}

}  // namespace

bool in_monoid(const Vec& v, const std::vector<Vec>& gens) {
  if (is_zero(v)) return true;
  constexpr std::size_t kBudget = 20000;
  std::unordered_set<Vec, VecHash> seen{v};
  std::vector<Vec> stack{v};
  while (!stack.empty()) {
    Vec r = std::move(stack.back());
    stack.pop_back();
    for (const auto& g : gens) {
      if (is_zero(g) || !leq(g, r)) continue;
      Vec s = minus(r, g);
      if (is_zero(s)) return true;
      if (seen.insert(s).second) {
        if (seen.size() > kBudget) return false;
        stack.push_back(std::move(s));
      }
    }
  }
  return false;
}

Components simplify(Components a) {
  for (auto& c : a) normalize_periods(c);
  std::sort(a.begin(), a.end(), [](const LinearSet& x, const LinearSet& y) {
    if (x.periods.size() != y.periods.size()) return x.periods.size() > y.periods.size();
    if (x.base != y.base) return x.base < y.base;
    return x.periods < y.periods;
  });
  a.erase(std::unique(a.begin(), a.end()), a.end());
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < a.size() && !changed; ++i)
      for (std::size_t j = 0; j < a.size() && !changed; ++j) {
        if (i == j) continue;
        if (covers(a[j], a[i])) {
          a.erase(a.begin() + static_cast<std::ptrdiff_t>(i));
          changed = true;
          break;
        }
        // L(b,P) ∪ L(b+q, P∪{q}) = L(b, P∪{q}).
        const auto& x = a[i];
        const auto& y = a[j];
        if (y.periods.size() == x.periods.size() + 1 && leq(x.base, y.base)) {
          Vec q = minus(y.base, x.base);
          if (!is_zero(q) && std::binary_search(y.periods.begin(), y.periods.end(), q)) {
            std::vector<Vec> rest;
            for (const auto& p : y.periods)
              if (p != q) rest.push_back(p);
            if (rest == x.periods) {
              a[i].periods = y.periods;
              a.erase(a.begin() + static_cast<std::ptrdiff_t>(j));
              changed = true;
            }
          }
        }
      }
  }
  return a;
}

Components unite(Components a, const Components& b) {
  a.insert(a.end(), b.begin(), b.end());
  return simplify(std::move(a));
}

Components sum(const Components& a, const Components& b) {
  Components out;
  for (const auto& x : a)
    for (const auto& y : b) {
      LinearSet z{plus(x.base, y.base), x.periods};
      z.periods.insert(z.periods.end(), y.periods.begin(), y.periods.end());
      out.push_back(std::move(z));
    }
  return simplify(std::move(out));
}

Components star(const Components& a) {
  if (a.empty()) return {};
  const std::size_t d = a.front().base.size();
  Components acc{LinearSet{Vec(d, 0), {}}};
  for (const auto& c : a) {
    Components s;
    if (is_zero(c.base)) {
      s.push_back(LinearSet{c.base, c.periods});
    } else {
      s.push_back(LinearSet{Vec(d, 0), {}});
      LinearSet l{c.base, c.periods};
      l.periods.push_back(c.base);
      s.push_back(std::move(l));
    }
    acc = sum(acc, simplify(std::move(s)));
  }
  return acc;
}

}  // namespace semilinear

// ---------------------------------------------------------------- parikh

namespace {

// Rewrites A over its weight classes: zero-weight edges become ε and are
// closed away, then the result is determinized and minimized unless the
// subset construction grows past a cap. The Parikh image is unchanged.
std::pair<Nfa, std::vector<Vec>> compact_by_weight(const Nfa& a, const std::vector<Vec>& weights) {
  constexpr std::size_t kSubsetCap = 4000;
  std::map<Vec, std::uint32_t> class_of;
  std::vector<Vec> class_weight;
  std::vector<int> letter_class(a.letter_count, -1);
  for (std::size_t l = 0; l < a.letter_count; ++l) {
    if (std::all_of(weights[l].begin(), weights[l].end(), [](auto x) { return x == 0; })) continue;
    auto [it, fresh] = class_of.emplace(weights[l], static_cast<std::uint32_t>(class_weight.size()));
    if (fresh) class_weight.push_back(weights[l]);
    letter_class[l] = static_cast<int>(it->second);
  }
  const std::uint32_t n = a.state_count;
  const std::size_t k = class_weight.size();
  std::vector<std::vector<std::uint32_t>> eps(n);
  std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> moves(n);
  for (const auto& e : a.edges) {
    if (letter_class[e.letter] < 0)
      eps[e.from].push_back(e.to);
    else
      moves[e.from].push_back({static_cast<std::uint32_t>(letter_class[e.letter]), e.to});
  }
  std::vector<char> is_final(n, 0);
  for (auto f : a.final_states) is_final[f] = 1;
  auto closure = [&](std::vector<std::uint32_t> set) {
    std::vector<char> in(n, 0);
    for (auto q : set) in[q] = 1;
    for (std::size_t i = 0; i < set.size(); ++i)
      for (auto r : eps[set[i]])
        if (!in[r]) {
          in[r] = 1;
          set.push_back(r);
        }
    std::sort(set.begin(), set.end());
    return set;
  };

  // Subset construction over ε-closed sets.
  std::map<std::vector<std::uint32_t>, std::uint32_t> id;
  std::vector<std::vector<std::uint32_t>> subsets;
  std::vector<std::vector<int>> delta;
  bool capped = false;
  auto intern = [&](std::vector<std::uint32_t> s) -> int {
    auto [it, fresh] = id.emplace(s, static_cast<std::uint32_t>(subsets.size()));
    if (fresh) {
      subsets.push_back(std::move(s));
      delta.emplace_back(k, -1);
    }
    return static_cast<int>(it->second);
  };
  intern(closure(a.initial));
  for (std::size_t i = 0; i < subsets.size() && !capped; ++i) {
    std::vector<std::vector<std::uint32_t>> succ(k);
    for (auto q : subsets[i])
      for (auto [c, r] : moves[q]) succ[c].push_back(r);
    for (std::size_t c = 0; c < k; ++c) {
      if (succ[c].empty()) continue;
      std::sort(succ[c].begin(), succ[c].end());
      succ[c].erase(std::unique(succ[c].begin(), succ[c].end()), succ[c].end());
      int t = intern(closure(std::move(succ[c])));
      delta[i][c] = t;
    }
    if (subsets.size() > kSubsetCap) capped = true;
  }

  Nfa out(k);
  if (capped) {
    // ε-free NFA on the original states.
    out.state_count = n;
    out.initial = a.initial;
    for (std::uint32_t q = 0; q < n; ++q) {
      auto cl = closure({q});
      if (std::any_of(cl.begin(), cl.end(), [&](auto p) { return is_final[p] != 0; })) out.final_states.push_back(q);
      std::set<std::pair<std::uint32_t, std::uint32_t>> seen;
      for (auto p : cl)
        for (auto mv : moves[p])
          if (seen.insert(mv).second) out.add_edge(q, mv.first, mv.second);
    }
    return {trim(out), class_weight};
  }

  // Moore refinement; -1 is the implicit sink.
  const std::size_t m = subsets.size();
  std::vector<int> block(m);
  for (std::size_t i = 0; i < m; ++i)
    block[i] = std::any_of(subsets[i].begin(), subsets[i].end(), [&](auto p) { return is_final[p] != 0; }) ? 1 : 0;
  for (;;) {
    std::map<std::vector<int>, int> sig_id;
    std::vector<int> next(m);
    for (std::size_t i = 0; i < m; ++i) {
      std::vector<int> sig{block[i]};
      for (std::size_t c = 0; c < k; ++c) sig.push_back(delta[i][c] < 0 ? -1 : block[delta[i][c]]);
      next[i] = sig_id.emplace(std::move(sig), static_cast<int>(sig_id.size())).first->second;
    }
    std::size_t before = std::set<int>(block.begin(), block.end()).size();
    block = std::move(next);
    if (sig_id.size() == before) break;
  }
  const auto blocks = static_cast<std::uint32_t>(1 + *std::max_element(block.begin(), block.end()));
  out.state_count = blocks;
  out.initial = {static_cast<std::uint32_t>(block[0])};
  std::set<std::uint32_t> finals;
  std::set<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>> edges;
  for (std::size_t i = 0; i < m; ++i) {
    if (std::any_of(subsets[i].begin(), subsets[i].end(), [&](auto p) { return is_final[p] != 0; }))
      finals.insert(static_cast<std::uint32_t>(block[i]));
    for (std::size_t c = 0; c < k; ++c)
      if (delta[i][c] >= 0)
        edges.insert({static_cast<std::uint32_t>(block[i]), static_cast<std::uint32_t>(c),
                      static_cast<std::uint32_t>(block[delta[i][c]])});
  }
  out.final_states.assign(finals.begin(), finals.end());
  for (auto [p, c, q] : edges) out.add_edge(p, c, q);
  return {trim(out), class_weight};
}

}  // namespace

SemilinearRep parikh_weighted(const Nfa& input, const std::vector<Vec>& weights, std::vector<std::string> names) {
  using semilinear::Components;
  const std::size_t d = names.size();
  for (const auto& w : weights)
    if (w.size() != d) throw std::invalid_argument("parikh: weight dimension mismatch");
  if (weights.size() < input.letter_count) throw std::invalid_argument("parikh: missing letter weights");
  SemilinearRep rep{std::move(names), {}};
  Nfa a;
  std::vector<Vec> class_weight;
  {
    Nfa t = trim(input);
    if (t.final_states.empty()) return rep;
    std::tie(a, class_weight) = compact_by_weight(t, weights);
  }
  if (a.final_states.empty()) return rep;

  // State elimination over labels that are semilinear sets; S and F are the
  // fresh source and sink.
  const std::uint32_t n = a.state_count, S = n, F = n + 1;
  std::vector<std::map<std::uint32_t, Components>> out(n + 2), in(n + 2);
  auto add = [&](std::uint32_t p, std::uint32_t q, const Components& c) {
    auto& slot = out[p][q];
    slot = semilinear::unite(std::move(slot), c);
    in[q][p] = slot;
  };
  const Components zero{LinearSet{Vec(d, 0), {}}};
  for (auto q : a.initial) add(S, q, zero);
  for (auto q : a.final_states) add(q, F, zero);
  {
    std::map<std::pair<std::uint32_t, std::uint32_t>, Components> grouped;
    for (const auto& e : a.edges) grouped[{e.from, e.to}].push_back(LinearSet{class_weight[e.letter], {}});
    for (auto& [pq, c] : grouped) add(pq.first, pq.second, semilinear::simplify(std::move(c)));
  }
  std::vector<char> gone(n, 0);
  for (std::uint32_t round = 0; round < n; ++round) {
    // Cheapest state first: fewest in×out combinations.
    std::uint32_t best = UINT32_MAX;
    std::size_t best_cost = SIZE_MAX;
    for (std::uint32_t q = 0; q < n; ++q) {
      if (gone[q]) continue;
      std::size_t cost = (in[q].size() + 1) * (out[q].size() + 1);
      if (cost < best_cost) {
        best_cost = cost;
        best = q;
      }
    }
    const auto q = best;
    gone[q] = 1;
    Components loop;
    if (auto it = out[q].find(q); it != out[q].end()) loop = semilinear::star(it->second);
    else loop = zero;
    out[q].erase(q);
    in[q].erase(q);
    auto ins = in[q];
    auto outs = out[q];
    for (auto& [p, c] : ins) out[p].erase(q);
    for (auto& [r, c] : outs) in[r].erase(q);
    in[q].clear();
    out[q].clear();
    for (auto& [p, cin] : ins) {
      auto left = semilinear::sum(cin, loop);
      for (auto& [r, cout] : outs) add(p, r, semilinear::sum(left, cout));
    }
  }
  if (auto it = out[S].find(F); it != out[S].end()) rep.components = it->second;
  return rep;
}

SemilinearRep parikh(const Nfa& a, std::vector<std::string> names) {
  const std::size_t k = a.letter_count;
  if (names.empty())
    for (std::size_t i = 0; i < k; ++i) names.push_back("n" + std::to_string(i));
  if (names.size() != k) throw std::invalid_argument("parikh: one name per letter required");
  std::vector<Vec> weights(k, Vec(k, 0));
  for (std::size_t i = 0; i < k; ++i) weights[i][i] = 1;
  return parikh_weighted(a, weights, std::move(names));
}

}  // namespace expoknap
