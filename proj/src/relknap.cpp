#include "expoknap/relknap.hpp"

#include <algorithm>
#include <cstring>
#include <map>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

namespace expoknap {

namespace {

using semilinear::Components;

Word slice(const Word& w, std::size_t from, std::size_t to) {
  return Word(w.begin() + static_cast<std::ptrdiff_t>(from), w.begin() + static_cast<std::ptrdiff_t>(to));
}

Word red(std::initializer_list<Word> parts) { return free_reduce(concat(parts)); }

void check_geodesic(const Nfa& a) {
  // Sufficient condition: no state is entered by a and left by a⁻¹.
  std::vector<std::vector<char>> in(a.state_count, std::vector<char>(a.letter_count, 0));
  for (const auto& e : a.edges) in[e.to][e.letter] = 1;
  for (const auto& e : a.edges)
    if ((e.letter ^ 1u) < a.letter_count && in[e.from][e.letter ^ 1u])
      throw std::invalid_argument("side language is not freely reduced");
}

std::vector<std::vector<std::uint32_t>> out_edges(const Nfa& a) {
  std::vector<std::vector<std::uint32_t>> out(a.state_count);
  for (std::uint32_t i = 0; i < a.edges.size(); ++i) out[a.edges[i].from].push_back(i);
  return out;
}

Nfa reversed(const Nfa& a) {
  Nfa r(a.letter_count);
  r.state_count = a.state_count;
  r.initial = a.final_states;
  r.final_states = a.initial;
  for (const auto& e : a.edges) r.edges.push_back({e.to, e.letter ^ 1u, e.from});
  return r;
}

// The reachable part of the ball product. Tape 1 reads La forwards
// (g ← red(g·x)), tape 2 reads Lb forwards (g ← red(y⁻¹·g)).
struct BallProduct {
  struct Move {
    std::uint32_t from;
    int tape;
    std::uint32_t edge;
    std::uint32_t to;
  };
  std::uint32_t states = 0;
  std::vector<std::uint32_t> initial, finals;
  std::vector<Move> moves;
};

BallProduct ball_product(const Nfa& La, const Nfa& Lb, const Word& g0, const Word& g_final, std::size_t B,
                         std::uint64_t budget) {
  BallProduct bp;
  const auto oa = out_edges(La), ob = out_edges(Lb);
  std::unordered_map<std::string, std::uint32_t> id;
  struct State {
    std::uint32_t s1, s2;
    Word g;
  };
  std::vector<State> states;
  auto key = [](std::uint32_t s1, std::uint32_t s2, const Word& g) {
    std::string k(8 + 4 * g.size(), '\0');
    std::memcpy(k.data(), &s1, 4);
    std::memcpy(k.data() + 4, &s2, 4);
    for (std::size_t i = 0; i < g.size(); ++i) std::memcpy(k.data() + 8 + 4 * i, &g[i].code, 4);
    return k;
  };
  auto intern = [&](std::uint32_t s1, std::uint32_t s2, Word g) {
    auto [it, fresh] = id.emplace(key(s1, s2, g), static_cast<std::uint32_t>(states.size()));
    if (fresh) {
      states.push_back({s1, s2, std::move(g)});
      if (budget && states.size() > budget) throw EffortExceeded("ball transducer exceeds effort budget");
    }
    return it->second;
  };
  std::vector<char> fa(La.state_count, 0), fb(Lb.state_count, 0);
  for (auto f : La.final_states) fa[f] = 1;
  for (auto f : Lb.final_states) fb[f] = 1;
  Word g_init = free_reduce(g0), g_end = free_reduce(g_final);
  if (g_init.size() > B) return bp;
  for (auto i : La.initial)
    for (auto j : Lb.initial) bp.initial.push_back(intern(i, j, g_init));
  for (std::uint32_t cur = 0; cur < states.size(); ++cur) {
    const auto s1 = states[cur].s1, s2 = states[cur].s2;
    if (fa[s1] && fb[s2] && states[cur].g == g_end) bp.finals.push_back(cur);
    for (auto ei : oa[s1]) {
      Word g = states[cur].g;
      Letter x{La.edges[ei].letter};
      if (!g.empty() && g.back() == x.inverse())
        g.pop_back();
      else
        g.push_back(x);
      if (g.size() > B) continue;
      auto to = intern(La.edges[ei].to, s2, std::move(g));
      bp.moves.push_back({cur, 1, ei, to});
    }
    for (auto ei : ob[s2]) {
      Word g = states[cur].g;
      Letter y{Lb.edges[ei].letter};
      if (!g.empty() && g.front() == y)
        g.erase(g.begin());
      else
        g.insert(g.begin(), y.inverse());
      if (g.size() > B) continue;
      auto to = intern(s1, Lb.edges[ei].to, std::move(g));
      bp.moves.push_back({cur, 2, ei, to});
    }
  }
  bp.states = static_cast<std::uint32_t>(states.size());
  return bp;
}

// ---------------------------------------------------------------- polygons

struct Lang {
  std::uint32_t id;
  const Nfa* nfa;
  const std::vector<Vec>* weights;
  Nfa reverse;
  std::vector<std::vector<std::uint32_t>> out;
  std::vector<std::vector<char>> reach;     // reflexive
  std::vector<std::vector<char>> nonempty;  // some nonempty word from p to q
};

struct PSide {
  const Lang* L;
  std::uint32_t p, q;
  Word v;
};

class PolygonSolver {
 public:
  PolygonSolver(std::size_t dims, const RelKnapConfig& cfg, RelKnapStats* stats)
      : dims_(dims), cfg_(cfg), stats_(stats) {}

  const Lang* lang(const SideSpec& s) {
    auto k = std::make_pair(s.language.get(), s.edge_weights.get());
    if (auto it = langs_index_.find(k); it != langs_index_.end()) return langs_[it->second].get();
    const Nfa& a = *s.language;
    if (!s.edge_weights || s.edge_weights->size() != a.edges.size())
      throw std::invalid_argument("polygon: one weight per edge required");
    for (const auto& w : *s.edge_weights)
      if (w.size() != dims_) throw std::invalid_argument("polygon: weight dimension mismatch");
    auto L = std::make_unique<Lang>();
    L->id = static_cast<std::uint32_t>(langs_.size());
    L->nfa = &a;
    L->weights = s.edge_weights.get();
    L->reverse = reversed(a);
    L->out = out_edges(a);
    const auto n = a.state_count;
    L->reach.assign(n, std::vector<char>(n, 0));
    L->nonempty.assign(n, std::vector<char>(n, 0));
    for (std::uint32_t p = 0; p < n; ++p) {
      std::vector<std::uint32_t> stack;
      L->reach[p][p] = 1;
      for (auto ei : L->out[p]) {
        auto t = a.edges[ei].to;
        if (!L->nonempty[p][t]) {
          L->nonempty[p][t] = 1;
          stack.push_back(t);
        }
      }
      while (!stack.empty()) {
        auto s2 = stack.back();
        stack.pop_back();
        for (auto ei : L->out[s2]) {
          auto t = a.edges[ei].to;
          if (!L->nonempty[p][t]) {
            L->nonempty[p][t] = 1;
            stack.push_back(t);
          }
        }
      }
      for (std::uint32_t q = 0; q < n; ++q)
        if (L->nonempty[p][q]) L->reach[p][q] = 1;
    }
    for (auto g : generators_of(a)) generators_.push_back(g);
    std::sort(generators_.begin(), generators_.end());
    generators_.erase(std::unique(generators_.begin(), generators_.end()), generators_.end());
    langs_index_[k] = langs_.size();
    langs_.push_back(std::move(L));
    return langs_.back().get();
  }

  Components solve_top(std::vector<PSide> sides) {
    if (!cfg_.generators.empty()) generators_ = cfg_.generators;
    ball_k_ = reduced_ball(cfg_.kappa, generators_);
    ball_k1_ = reduced_ball(cfg_.kappa + 1, generators_);
    ball_2k1_ = reduced_ball(2 * cfg_.kappa + 1, generators_);
    return solve(std::move(sides));
  }

 private:
  std::size_t dims_;
  RelKnapConfig cfg_;
  RelKnapStats* stats_;
  std::vector<std::unique_ptr<Lang>> langs_;
  std::map<std::pair<const Nfa*, const std::vector<Vec>*>, std::size_t> langs_index_;
  std::vector<std::uint32_t> generators_;
  std::vector<Word> ball_k_, ball_k1_, ball_2k1_;
  std::unordered_map<std::string, Components> memo_;
  std::uint64_t work_ = 0;

  static std::vector<std::uint32_t> generators_of(const Nfa& a) {
    std::vector<std::uint32_t> g;
    for (std::uint32_t i = 0; 2 * i < a.letter_count; ++i) g.push_back(i);
    return g;
  }

  void charge(std::uint64_t units) {
    work_ += units;
    if (cfg_.effort && work_ > cfg_.effort) throw EffortExceeded("polygon recursion exceeds effort budget");
  }

  Components zero() const { return {LinearSet{Vec(dims_, 0), {}}}; }

  std::vector<std::uint32_t> mid(const PSide& s) const {
    std::vector<std::uint32_t> r;
    for (std::uint32_t x = 0; x < s.L->nfa->state_count; ++x)
      if (s.L->reach[s.p][x] && s.L->reach[x][s.q]) r.push_back(x);
    return r;
  }

  static std::vector<std::uint32_t> encode(const PSide& s) {
    std::vector<std::uint32_t> k{s.L->id, s.p, s.q};
    for (auto a : s.v) k.push_back(a.code);
    return k;
  }

  Components solve(std::vector<PSide> s) {
    for (auto& x : s) x.v = free_reduce(x.v);
    // Empty sides kill the polygon; ε-only sides fold into the previous constant.
    for (const auto& x : s)
      if (!x.L->reach[x.p][x.q]) return {};
    for (bool changed = true; changed && s.size() > 1;) {
      changed = false;
      for (std::size_t i = 0; i < s.size(); ++i) {
        const auto& x = s[i];
        if (x.p == x.q && !x.L->nonempty[x.p][x.p]) {
          auto& prev = s[(i + s.size() - 1) % s.size()];
          prev.v = red({prev.v, x.v});
          s.erase(s.begin() + static_cast<std::ptrdiff_t>(i));
          changed = true;
          break;
        }
      }
    }
    // Rotation-minimal key; the image does not depend on the rotation.
    const std::size_t n = s.size();
    std::vector<std::vector<std::uint32_t>> enc;
    for (const auto& x : s) enc.push_back(encode(x));
    std::size_t best = 0;
    for (std::size_t r = 1; r < n; ++r) {
      for (std::size_t i = 0; i < n; ++i) {
        const auto& a = enc[(r + i) % n];
        const auto& b = enc[(best + i) % n];
        if (a != b) {
          if (a < b) best = r;
          break;
        }
      }
    }
    std::rotate(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(best), s.end());
    std::string key;
    for (std::size_t i = 0; i < n; ++i) {
      const auto& e = enc[(best + i) % n];
      key.append(reinterpret_cast<const char*>(e.data()), e.size() * 4);
      key.push_back('|');
    }
    if (auto it = memo_.find(key); it != memo_.end()) {
      if (stats_) ++stats_->memo_hits;
      return it->second;
    }
    charge(1);
    if (stats_) ++stats_->polygons;
    Components result;
    if (n == 1)
      result = base1(s[0]);
    else if (n == 2)
      result = base2(s[0], s[1]);
    else
      result = recurse(s);
    memo_.emplace(std::move(key), result);
    return result;
  }

  // w ∈ L_{p,q} with w v = 1 forces w = red(v⁻¹).
  Components base1(const PSide& s) {
    const Word w = invert(s.v);
    const Nfa& a = *s.L->nfa;
    std::map<std::uint32_t, std::vector<Vec>> cur{{s.p, {Vec(dims_, 0)}}};
    for (auto letter : w) {
      std::map<std::uint32_t, std::vector<Vec>> next;
      for (const auto& [q, ws] : cur)
        for (auto ei : s.L->out[q]) {
          const auto& e = a.edges[ei];
          if (e.letter != letter.code) continue;
          auto& dst = next[e.to];
          for (const auto& v : ws) {
            Vec x = v;
            for (std::size_t i = 0; i < dims_; ++i) x[i] += (*s.L->weights)[ei][i];
            dst.push_back(std::move(x));
          }
        }
      for (auto& [q, ws] : next) {
        std::sort(ws.begin(), ws.end());
        ws.erase(std::unique(ws.begin(), ws.end()), ws.end());
      }
      cur = std::move(next);
    }
    Components out;
    if (auto it = cur.find(s.q); it != cur.end())
      for (const auto& v : it->second) out.push_back(LinearSet{v, {}});
    return semilinear::simplify(std::move(out));
  }

  // w1 v1 w2 v2 = 1: tape 1 reads w2, tape 2 reads w1⁻¹ backwards through L1.
  Components base2(const PSide& s1, const PSide& s2) {
    std::size_t B = s1.v.size() + s2.v.size();
    B = cfg_.ball ? std::max(cfg_.ball, B) : B + 2;
    Nfa La = *s2.L->nfa;
    La.initial = {s2.p};
    La.final_states = {s2.q};
    Nfa Lb = s1.L->reverse;
    Lb.initial = {s1.q};
    Lb.final_states = {s1.p};
    std::uint64_t left = cfg_.effort ? (cfg_.effort > work_ ? cfg_.effort - work_ : 1) : 0;
    auto bp = ball_product(La, Lb, s1.v, invert(s2.v), B, left);
    charge(bp.states);
    if (stats_) stats_->transducer_states += bp.states;
    std::map<Vec, std::uint32_t> cls;
    std::vector<Vec> weights;
    auto class_of = [&](const Vec& w) {
      auto [it, fresh] = cls.emplace(w, static_cast<std::uint32_t>(weights.size()));
      if (fresh) weights.push_back(w);
      return it->second;
    };
    std::vector<std::uint32_t> letter;
    for (const auto& m : bp.moves)
      letter.push_back(class_of(m.tape == 1 ? (*s2.L->weights)[m.edge] : (*s1.L->weights)[m.edge]));
    Nfa pairs(weights.size());
    pairs.state_count = bp.states;
    pairs.initial = bp.initial;
    pairs.final_states = bp.finals;
    for (std::size_t i = 0; i < bp.moves.size(); ++i) pairs.edges.push_back({bp.moves[i].from, letter[i], bp.moves[i].to});
    std::vector<std::string> names(dims_, "");
    return parikh_weighted(pairs, weights, names).components;
  }

  using Parts = std::vector<std::vector<PSide>>;

  // Minkowski sum of the parts, smallest first; an empty part stops early.
  Components combine(Parts parts) {
    std::stable_sort(parts.begin(), parts.end(), [](const auto& a, const auto& b) { return a.size() < b.size(); });
    Components acc = zero();
    for (auto& p : parts) {
      auto c = solve(std::move(p));
      if (c.empty()) return {};
      acc = semilinear::sum(acc, c);
    }
    return acc;
  }

  static std::vector<PSide> cat(std::vector<PSide> a, const std::vector<PSide>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
  }

  Components recurse(const std::vector<PSide>& s) {
    const std::size_t n = s.size();
    auto S = [&](std::size_t j) -> const PSide& { return s[j - 1]; };
    auto with = [](const PSide& b, std::uint32_t p, std::uint32_t q, Word v) { return PSide{b.L, p, q, std::move(v)}; };
    auto range = [&](std::size_t a, std::size_t b) {
      std::vector<PSide> out;
      for (std::size_t j = a; j <= b && j <= n; ++j) out.push_back(S(j));
      return out;
    };
    Components result;
    auto add = [&](Components c) {
      if (c.empty()) return;
      result.insert(result.end(), c.begin(), c.end());
      if (result.size() > 32) result = semilinear::simplify(std::move(result));
    };
    const auto& s1 = S(1);
    const auto& s2 = S(2);
    const auto& s3 = S(3);
    const auto mid1 = mid(s1), mid2 = mid(s2), mid3 = mid(s3);

    // Cut from P2 to Q_i.
    for (std::size_t i = 3; i <= n; ++i) {
      const auto& si = S(i);
      for (auto r : mid2)
        for (std::size_t j = 0; j <= si.v.size(); ++j)
          for (const auto& w : ball_k_) {
            std::vector<PSide> A = cat({s1, with(s2, s2.p, r, red({w, slice(si.v, j, si.v.size())}))}, range(i + 1, n));
            std::vector<PSide> Bp =
                cat(cat({with(s2, r, s2.q, s2.v)}, range(3, i - 1)), {with(si, si.p, si.q, red({slice(si.v, 0, j), invert(w)}))});
            add(combine({std::move(A), std::move(Bp)}));
          }
    }
    // Cut from P2 to P_i, i ≥ 4.
    for (std::size_t i = 4; i <= n; ++i) {
      const auto& si = S(i);
      const auto midi = mid(si);
      for (auto r : mid2)
        for (auto r2 : midi)
          for (const auto& w : ball_k_) {
            std::vector<PSide> A = cat({s1, with(s2, s2.p, r, w), with(si, r2, si.q, si.v)}, range(i + 1, n));
            std::vector<PSide> Bp = cat(cat({with(s2, r, s2.q, s2.v)}, range(3, i - 1)), {with(si, si.p, r2, invert(w))});
            add(combine({std::move(A), std::move(Bp)}));
          }
    }
    // Cut from Q1 to Q2.
    for (std::size_t j1 = 0; j1 <= s1.v.size(); ++j1)
      for (std::size_t j2 = 0; j2 <= s2.v.size(); ++j2)
        for (const auto& w : ball_2k1_) {
          std::vector<PSide> A{with(s2, s2.p, s2.q, red({slice(s2.v, 0, j2), invert(w), slice(s1.v, j1, s1.v.size())}))};
          std::vector<PSide> Bp =
              cat({with(s1, s1.p, s1.q, red({slice(s1.v, 0, j1), w, slice(s2.v, j2, s2.v.size())}))}, range(3, n));
          add(combine({std::move(A), std::move(Bp)}));
        }
    // Cut from P1 to Q2.
    for (auto r : mid1)
      for (std::size_t j2 = 0; j2 <= s2.v.size(); ++j2)
        for (const auto& w : ball_2k1_) {
          std::vector<PSide> A{with(s1, r, s1.q, s1.v), with(s2, s2.p, s2.q, red({slice(s2.v, 0, j2), invert(w)}))};
          std::vector<PSide> Bp = cat({with(s1, s1.p, r, red({w, slice(s2.v, j2, s2.v.size())}))}, range(3, n));
          add(combine({std::move(A), std::move(Bp)}));
        }
    // Cut from Q1 to P3.
    for (std::size_t j1 = 0; j1 <= s1.v.size(); ++j1)
      for (auto r : mid3)
        for (const auto& w : ball_2k1_) {
          std::vector<PSide> A{s2, with(s3, s3.p, r, red({invert(w), slice(s1.v, j1, s1.v.size())}))};
          std::vector<PSide> Bp =
              cat({with(s1, s1.p, s1.q, red({slice(s1.v, 0, j1), w})), with(s3, r, s3.q, s3.v)}, range(4, n));
          add(combine({std::move(A), std::move(Bp)}));
        }
    // A tripod from P2 to P1 and P3.
    for (auto r1 : mid1)
      for (auto r2 : mid2)
        for (auto r3 : mid3)
          for (const auto& w1 : ball_k_)
            for (const auto& w2 : ball_k1_) {
              std::vector<PSide> A{with(s1, r1, s1.q, s1.v), with(s2, s2.p, r2, w1)};
              std::vector<PSide> Bp{with(s2, r2, s2.q, s2.v), with(s3, s3.p, r3, invert(w2))};
              std::vector<PSide> C =
                  cat({with(s1, s1.p, r1, red({invert(w1), w2})), with(s3, r3, s3.q, s3.v)}, range(4, n));
              add(combine({std::move(A), std::move(Bp), std::move(C)}));
            }
    return semilinear::simplify(std::move(result));
  }
};

std::vector<std::string> default_pair_names(std::size_t k) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < k; ++i) names.push_back("x" + std::to_string(i));
  for (std::size_t i = 0; i < k; ++i) names.push_back("y" + std::to_string(i));
  return names;
}

// Reduced words of A as L_{start, end}; start has no incoming edges, so
// L_{start, start} = {ε}.
struct PointedLanguage {
  std::shared_ptr<const Nfa> nfa;
  std::uint32_t start, end;
};

PointedLanguage pointed_language(const StallingsGraph& A) {
  const auto k = static_cast<std::uint32_t>(A.letter_count());
  const auto n = A.vertex_count();
  auto nfa = std::make_shared<Nfa>(k);
  // 0 start, 1 end, 2 + v·k + a "at v, last read a".
  nfa->state_count = 2 + n * k;
  nfa->initial = {0};
  nfa->final_states = {1};
  auto st = [&](std::uint32_t v, std::uint32_t a) { return 2 + v * k + a; };
  auto link = [&](std::uint32_t from, std::uint32_t b, std::uint32_t v) {
    nfa->edges.push_back({from, b, st(v, b)});
    if (v == 0) nfa->edges.push_back({from, b, 1});
  };
  for (std::uint32_t b = 0; b < k; ++b)
    if (A.target(0, Letter{b}) != StallingsGraph::kNone) link(0, b, A.target(0, Letter{b}));
  for (std::uint32_t v = 0; v < n; ++v)
    for (std::uint32_t a = 0; a < k; ++a)
      for (std::uint32_t b = 0; b < k; ++b)
        if (b != (a ^ 1u) && A.target(v, Letter{b}) != StallingsGraph::kNone) link(st(v, a), b, A.target(v, Letter{b}));
  return {nfa, 0, 1};
}

}  // namespace

// ---------------------------------------------------------------- sides

SideSpec::SideSpec(std::shared_ptr<const Nfa> lang, std::uint32_t p_, std::uint32_t q_, Word v_,
                   std::shared_ptr<const std::vector<Vec>> weights)
    : language(std::move(lang)), p(p_), q(q_), v(std::move(v_)), edge_weights(std::move(weights)) {
  if (!language) throw std::invalid_argument("side without language");
  if (p >= language->state_count || q >= language->state_count) throw std::out_of_range("side state out of range");
  check_geodesic(*language);
}

SideSpec SideSpec::constant(const Word& w, Word v, std::size_t letter_count) {
  Word r = free_reduce(w);
  auto nfa = std::make_shared<Nfa>(letter_count);
  nfa->state_count = static_cast<std::uint32_t>(r.size() + 1);
  for (std::uint32_t i = 0; i < r.size(); ++i) nfa->add_edge(i, r[i].code, i + 1);
  nfa->initial = {0};
  nfa->final_states = {static_cast<std::uint32_t>(r.size())};
  return SideSpec(nfa, 0, static_cast<std::uint32_t>(r.size()), std::move(v));
}

Transducer ball_transducer(const Word& v1, const Nfa& L1, const Word& v2, const Nfa& L2, std::size_t B) {
  if (B < v1.size() + v2.size()) throw std::invalid_argument("ball bound below |v1|+|v2|");
  check_geodesic(L1);
  check_geodesic(L2);
  auto bp = ball_product(L1, L2, v1, v2, B, 0);
  Transducer t;
  t.letter_count = std::max(L1.letter_count, L2.letter_count);
  t.state_count = bp.states;
  t.initial = bp.initial;
  t.final_states = bp.finals;
  for (const auto& m : bp.moves)
    t.add_edge(m.from, m.tape, m.tape == 1 ? L1.edges[m.edge].letter : L2.edges[m.edge].letter, m.to);
  return t;
}

SolutionSet pair_parikh(const Word& v1, const Nfa& L1, const Word& v2, const Nfa& L2, std::size_t B,
                        std::vector<std::string> names) {
  if (B == 0) B = v1.size() + v2.size() + 2;
  auto t = ball_transducer(v1, L1, v2, L2, B);
  if (names.empty()) names = default_pair_names(t.letter_count);
  return SolutionSet::from_linear(parikh(transducer_to_pair_nfa(t), std::move(names)));
}

semilinear::Components polygon_image(const std::vector<SideSpec>& sides, std::size_t dims, const RelKnapConfig& cfg,
                                     RelKnapStats* stats) {
  if (sides.empty()) throw std::invalid_argument("polygon needs at least one side");
  PolygonSolver solver(dims, cfg, stats);
  std::vector<PSide> ps;
  for (const auto& s : sides) ps.push_back({solver.lang(s), s.p, s.q, s.v});
  return solver.solve_top(std::move(ps));
}

SolutionSet polygon_set(const std::vector<SideSpec>& sides, const RelKnapConfig& cfg, RelKnapStats* stats) {
  if (sides.empty()) throw std::invalid_argument("polygon needs at least one side");
  std::size_t k = 0;
  for (const auto& s : sides) k = std::max(k, s.language->letter_count);
  const std::size_t dims = sides.size() * k;
  std::vector<SideSpec> weighted;
  std::vector<std::string> names;
  for (std::size_t i = 0; i < sides.size(); ++i) {
    auto w = std::make_shared<std::vector<Vec>>();
    for (const auto& e : sides[i].language->edges) {
      Vec x(dims, 0);
      x[i * k + e.letter] = 1;
      w->push_back(std::move(x));
    }
    weighted.emplace_back(sides[i].language, sides[i].p, sides[i].q, sides[i].v, w);
    for (std::size_t a = 0; a < k; ++a) names.push_back("s" + std::to_string(i + 1) + "_" + std::to_string(a));
  }
  return SolutionSet::from_linear(SemilinearRep{names, polygon_image(weighted, dims, cfg, stats)});
}

// ---------------------------------------------------------------- rel_sol

NormalizedExpr normalize(const KnapsackExpr& e) {
  e.validate();
  if (e.has_repeated_variables()) throw std::invalid_argument("normalize: variables must be distinct");
  NormalizedExpr out;
  out.expr.constants = {e.constants[0]};
  for (std::size_t i = 0; i < e.powers.size(); ++i) {
    Word u = free_reduce(e.powers[i].base);
    if (u.empty()) {
      out.free_vars.push_back(e.powers[i].var);
      out.expr.constants.back() = concat(out.expr.constants.back(), e.constants[i + 1]);
      continue;
    }
    auto [s, c] = cyclic_decompose(u);
    out.expr.constants.back() = free_reduce(concat(out.expr.constants.back(), s));
    out.expr.powers.push_back({c, e.powers[i].var});
    out.expr.constants.push_back(concat(invert(s), e.constants[i + 1]));
    out.scale.push_back(1);
    out.shift.push_back(0);
  }
  for (auto& c : out.expr.constants) c = free_reduce(c);
  return out;
}

SolutionSet rel_sol(const KnapsackExpr& e, const StallingsGraph& A, const RelKnapConfig& cfg, RelKnapStats* stats) {
  const auto vars = e.variables();
  auto ne = normalize(e);
  const auto& x = ne.expr;
  const std::size_t k = x.powers.size();
  std::vector<std::string> core_vars;
  for (const auto& p : x.powers) core_vars.push_back(p.var);

  // A ⊇ ⟨letters of e⟩ when its graph is a bouquet carrying every letter.
  bool covers = A.vertex_count() == 1;
  for (const auto& c : x.constants)
    for (Letter a : c) covers = covers && A.target(0, a) == 0;
  for (const auto& p : x.powers)
    for (Letter a : p.base) covers = covers && A.target(0, a) == 0;

  SolutionSet core;
  if (covers) {
    core = SolutionSet::universe(core_vars);
  } else if (k == 0) {
    core = A.contains(x.constants[0]) ? SolutionSet::universe({}) : SolutionSet::empty({});
  } else {
    // u1^x1 v1 ... uk^xk vk · a⁻¹ · v0 = 1 with a⁻¹ ∈ A. The weight of a power
    // side counts completed cycles, so its coordinate is x_i itself.
    std::vector<SideSpec> sides;
    for (std::size_t i = 0; i < k; ++i) {
      const Word& u = x.powers[i].base;
      auto nfa = std::make_shared<Nfa>(A.letter_count());
      nfa->state_count = static_cast<std::uint32_t>(u.size());
      auto w = std::make_shared<std::vector<Vec>>();
      for (std::uint32_t j = 0; j < u.size(); ++j) {
        nfa->add_edge(j, u[j].code, static_cast<std::uint32_t>((j + 1) % u.size()));
        Vec wt(k, 0);
        if (j + 1 == u.size()) wt[i] = 1;
        w->push_back(std::move(wt));
      }
      nfa->initial = {0};
      nfa->final_states = {0};
      sides.emplace_back(nfa, 0, 0, x.constants[i + 1], w);
    }
    auto pl = pointed_language(A);
    auto zero = std::make_shared<std::vector<Vec>>(pl.nfa->edges.size(), Vec(k, 0));
    RelKnapConfig c = cfg;
    if (c.generators.empty())
      for (std::uint32_t g = 0; 2 * g < A.letter_count(); ++g) c.generators.push_back(g);
    // Nonempty words of A, then a = ε.
    sides.emplace_back(pl.nfa, pl.start, pl.end, x.constants[0], zero);
    auto comps = polygon_image(sides, k, c, stats);
    sides.back() = SideSpec(pl.nfa, pl.start, pl.start, x.constants[0], zero);
    comps = semilinear::unite(std::move(comps), polygon_image(sides, k, c, stats));
    core = SolutionSet::from_linear(SemilinearRep{core_vars, std::move(comps)});
  }
  return reorder(cylindrify(core, vars), vars);
}

SolutionSet divide_coords(const SolutionSet& s, const std::vector<std::uint64_t>& ell) {
  if (ell.size() != s.dim()) throw std::invalid_argument("divide_coords: one factor per coordinate");
  if (std::any_of(ell.begin(), ell.end(), [](auto l) { return l == 0; }))
    throw std::invalid_argument("divide_coords: factors must be positive");
  if (std::all_of(ell.begin(), ell.end(), [](auto l) { return l == 1; })) return s;
  std::vector<std::string> scaled;
  for (std::size_t i = 0; i < s.dim(); ++i) scaled.push_back("#div" + std::to_string(i));
  Formula f = Formula::member(s, scaled);
  for (std::size_t i = 0; i < s.dim(); ++i)
    f = f && Formula::eq(Formula::Term::var(s.vars()[i], ell[i]), Formula::Term::var(scaled[i]));
  return formula_to_set(Formula::exists(scaled, f), s.vars());
}

}  // namespace expoknap
