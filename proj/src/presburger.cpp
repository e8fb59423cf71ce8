#include "expoknap/presburger.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>

namespace expoknap {

// ---------------------------------------------------------------- reps

void SemilinearRep::validate() const {
  std::set<std::string> seen(vars.begin(), vars.end());
  if (seen.size() != vars.size()) throw std::invalid_argument("semilinear: duplicate variable");
  for (const auto& c : components) {
    if (c.base.size() != vars.size()) throw std::invalid_argument("semilinear: base dimension mismatch");
    for (const auto& p : c.periods)
      if (p.size() != vars.size()) throw std::invalid_argument("semilinear: period dimension mismatch");
  }
}

nlohmann::json SemilinearRep::to_json() const {
  nlohmann::json comps = nlohmann::json::array();
  for (const auto& c : components) comps.push_back({{"base", c.base}, {"periods", c.periods}});
  return {{"vars", vars}, {"components", comps}};
}

SemilinearRep SemilinearRep::from_json(const nlohmann::json& j) {
  SemilinearRep r;
  r.vars = j.at("vars").get<std::vector<std::string>>();
  for (const auto& c : j.at("components"))
    r.components.push_back({c.at("base").get<Vec>(), c.at("periods").get<std::vector<Vec>>()});
  r.validate();
  return r;
}

namespace {

std::vector<std::size_t> positions_in(const std::vector<std::string>& from, const std::vector<std::string>& to) {
  // For each name of `to`, its index in `from`.
  std::vector<std::size_t> pos;
  for (const auto& v : to) {
    auto it = std::find(from.begin(), from.end(), v);
    if (it == from.end()) throw std::invalid_argument("unknown variable '" + v + "'");
    pos.push_back(static_cast<std::size_t>(it - from.begin()));
  }
  return pos;
}

Vec pick(const Vec& v, const std::vector<std::size_t>& pos) {
  Vec out;
  out.reserve(pos.size());
  for (auto p : pos) out.push_back(v[p]);
  return out;
}

SemilinearRep reorder_rep(const SemilinearRep& r, const std::vector<std::string>& order) {
  auto pos = positions_in(r.vars, order);
  SemilinearRep out{order, {}};
  for (const auto& c : r.components) {
    LinearSet ls{pick(c.base, pos), {}};
    for (const auto& p : c.periods) ls.periods.push_back(pick(p, pos));
    out.components.push_back(std::move(ls));
  }
  return out;
}

bool same_var_set(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  if (a.size() != b.size()) return false;
  std::set<std::string> sa(a.begin(), a.end()), sb(b.begin(), b.end());
  return sa == sb && sa.size() == a.size();
}

}  // namespace

// ---------------------------------------------------------------- SolutionSet

SolutionSet::SolutionSet(std::vector<std::string> vars, PresAutomaton dfa, std::optional<SemilinearRep> rep)
    : vars_(std::move(vars)), dfa_(std::move(dfa)), rep_(std::move(rep)) {
  if (dfa_.dims() != vars_.size()) throw std::invalid_argument("SolutionSet: dimension mismatch");
  std::set<std::string> seen(vars_.begin(), vars_.end());
  if (seen.size() != vars_.size()) throw std::invalid_argument("SolutionSet: duplicate variable");
  if (rep_ && rep_->vars != vars_) rep_ = reorder_rep(*rep_, vars_);
}

SolutionSet SolutionSet::universe(std::vector<std::string> vars) {
  const std::size_t d = vars.size();
  SemilinearRep rep{vars, {LinearSet{Vec(d, 0), {}}}};
  for (std::size_t i = 0; i < d; ++i) {
    Vec e(d, 0);
    e[i] = 1;
    rep.components[0].periods.push_back(e);
  }
  return SolutionSet(std::move(vars), PresAutomaton::universal(d), std::move(rep));
}

SolutionSet SolutionSet::empty(std::vector<std::string> vars) {
  SemilinearRep rep{vars, {}};
  const std::size_t d = vars.size();
  return SolutionSet(std::move(vars), PresAutomaton::empty(d), std::move(rep));
}

SolutionSet SolutionSet::point(std::vector<std::string> vars, const Vec& v) {
  return from_linear(SemilinearRep{std::move(vars), {LinearSet{v, {}}}});
}

SolutionSet SolutionSet::from_linear(const SemilinearRep& rep) {
  rep.validate();
  const std::size_t d = rep.dim();
  PresAutomaton acc = PresAutomaton::empty(d);
  for (const auto& c : rep.components)
    acc = PresAutomaton::combine(acc, PresAutomaton::linear_set(c, d), PresAutomaton::BoolOp::Or);
  return SolutionSet(rep.vars, std::move(acc), rep);
}

bool SolutionSet::contains(const std::map<std::string, std::uint64_t>& valuation) const {
  Vec v;
  for (const auto& name : vars_) {
    auto it = valuation.find(name);
    if (it == valuation.end()) throw std::invalid_argument("contains: no value for '" + name + "'");
    v.push_back(it->second);
  }
  return dfa_.accepts(v);
}

int SolutionSet::index_of(const std::string& var) const {
  auto it = std::find(vars_.begin(), vars_.end(), var);
  return it == vars_.end() ? -1 : static_cast<int>(it - vars_.begin());
}

// ---------------------------------------------------------------- operations

SolutionSet reorder(const SolutionSet& s, const std::vector<std::string>& order) {
  if (!same_var_set(s.vars(), order)) throw std::invalid_argument("reorder: not a permutation of the variables");
  if (order == s.vars()) return s;
  auto pos = positions_in(s.vars(), order);
  std::optional<SemilinearRep> rep;
  if (s.carried_rep()) rep = reorder_rep(*s.carried_rep(), order);
  return SolutionSet(order, s.automaton().permute(pos), std::move(rep));
}

SolutionSet cylindrify(const SolutionSet& s, const std::vector<std::string>& vars) {
  auto names = s.vars();
  PresAutomaton a = s.automaton();
  std::vector<std::string> added;
  for (const auto& v : vars)
    if (std::find(names.begin(), names.end(), v) == names.end()) {
      a = a.insert_var(names.size());
      names.push_back(v);
      added.push_back(v);
    }
  if (added.empty()) return s;
  std::optional<SemilinearRep> rep;
  if (s.carried_rep()) {
    const auto& old = *s.carried_rep();
    const std::size_t d0 = old.dim(), d = names.size();
    SemilinearRep r{names, {}};
    for (const auto& c : old.components) {
      LinearSet ls{c.base, {}};
      ls.base.resize(d, 0);
      for (auto p : c.periods) {
        p.resize(d, 0);
        ls.periods.push_back(std::move(p));
      }
      for (std::size_t i = d0; i < d; ++i) {
        Vec e(d, 0);
        e[i] = 1;
        ls.periods.push_back(std::move(e));
      }
      r.components.push_back(std::move(ls));
    }
    rep = std::move(r);
  }
  return SolutionSet(std::move(names), std::move(a), std::move(rep));
}

namespace {

SolutionSet boolean(const SolutionSet& a, const SolutionSet& b, PresAutomaton::BoolOp op) {
  if (!same_var_set(a.vars(), b.vars())) throw std::invalid_argument("boolean operation on different variable sets");
  SolutionSet bb = reorder(b, a.vars());
  std::optional<SemilinearRep> rep;
  if (op == PresAutomaton::BoolOp::Or && a.carried_rep() && bb.carried_rep()) {
    rep = *a.carried_rep();
    for (const auto& c : bb.carried_rep()->components) rep->components.push_back(c);
  }
  return SolutionSet(a.vars(), PresAutomaton::combine(a.automaton(), bb.automaton(), op), std::move(rep));
}

std::vector<std::string> union_order(const std::vector<std::string>& u, const std::vector<std::string>& v) {
  auto out = u;
  for (const auto& x : v)
    if (std::find(out.begin(), out.end(), x) == out.end()) out.push_back(x);
  return out;
}

}  // namespace

SolutionSet unite(const SolutionSet& a, const SolutionSet& b) { return boolean(a, b, PresAutomaton::BoolOp::Or); }

SolutionSet intersect(const SolutionSet& a, const SolutionSet& b) {
  return boolean(a, b, PresAutomaton::BoolOp::And);
}

SolutionSet complement(const SolutionSet& s) { return SolutionSet(s.vars(), s.automaton().complement()); }

SolutionSet exists(const SolutionSet& s, const std::string& var) {
  int i = s.index_of(var);
  if (i < 0) return s;
  auto names = s.vars();
  names.erase(names.begin() + i);
  std::optional<SemilinearRep> rep;
  if (s.carried_rep()) {
    SemilinearRep r{names, {}};
    for (const auto& c : s.carried_rep()->components) {
      LinearSet ls = c;
      ls.base.erase(ls.base.begin() + i);
      for (auto& p : ls.periods) p.erase(p.begin() + i);
      r.components.push_back(std::move(ls));
    }
    rep = std::move(r);
  }
  return SolutionSet(std::move(names), s.automaton().project(static_cast<std::size_t>(i)), std::move(rep));
}

SolutionSet forall(const SolutionSet& s, const std::string& var) { return complement(exists(complement(s), var)); }

bool equivalent(const SolutionSet& a, const SolutionSet& b) {
  if (!same_var_set(a.vars(), b.vars())) return false;
  return PresAutomaton::equivalent(a.automaton(), reorder(b, a.vars()).automaton());
}

bool is_subset(const SolutionSet& a, const SolutionSet& b) {
  if (!same_var_set(a.vars(), b.vars())) throw std::invalid_argument("is_subset: different variable sets");
  auto bb = reorder(b, a.vars());
  return PresAutomaton::combine(a.automaton(), bb.automaton(), PresAutomaton::BoolOp::Diff).is_empty();
}

SolutionSet meet(const SolutionSet& a, const SolutionSet& b) {
  auto order = union_order(a.vars(), b.vars());
  auto aa = cylindrify(a, order);
  auto bb = reorder(cylindrify(b, order), order);
  return SolutionSet(order, PresAutomaton::combine(aa.automaton(), bb.automaton(), PresAutomaton::BoolOp::And));
}

SolutionSet oplus(const SolutionSet& a, const SolutionSet& b) {
  for (const auto& v : b.vars())
    if (a.index_of(v) >= 0) throw std::invalid_argument("oplus: variable sets are not disjoint");
  auto m = meet(a, b);
  if (a.carried_rep() && b.carried_rep()) {
    const std::size_t da = a.dim(), db = b.dim();
    SemilinearRep r{m.vars(), {}};
    for (const auto& ca : a.carried_rep()->components)
      for (const auto& cb : b.carried_rep()->components) {
        LinearSet ls{ca.base, {}};
        ls.base.insert(ls.base.end(), cb.base.begin(), cb.base.end());
        for (const auto& p : ca.periods) {
          Vec q = p;
          q.resize(da + db, 0);
          ls.periods.push_back(std::move(q));
        }
        for (const auto& p : cb.periods) {
          Vec q(da, 0);
          q.insert(q.end(), p.begin(), p.end());
          ls.periods.push_back(std::move(q));
        }
        r.components.push_back(std::move(ls));
      }
    return SolutionSet(m.vars(), m.automaton(), std::move(r));
  }
  return m;
}

SolutionSet restrict_to(const SolutionSet& s, const std::vector<std::string>& keep) {
  SolutionSet cur = s;
  for (const auto& v : s.vars())
    if (std::find(keep.begin(), keep.end(), v) == keep.end()) cur = exists(cur, v);
  return reorder(cur, keep);
}

SolutionSet scale_shift(const SolutionSet& s, std::uint64_t m, const Vec& d) {
  const std::size_t n = s.dim();
  if (d.size() != n) throw std::invalid_argument("scale_shift: shift dimension mismatch");
  if (m == 0) return s.is_empty() ? SolutionSet::empty(s.vars()) : SolutionSet::point(s.vars(), d);
  // Coordinates y (new) then x (old): y_i - m x_i = d_i, then drop x.
  PresAutomaton a = s.automaton();
  for (std::size_t i = 0; i < n; ++i) a = a.insert_var(0);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::int64_t> c(2 * n, 0);
    c[i] = 1;
    c[n + i] = -static_cast<std::int64_t>(m);
    a = PresAutomaton::combine(a, PresAutomaton::linear_eq(c, static_cast<std::int64_t>(d[i])),
                               PresAutomaton::BoolOp::And);
  }
  for (std::size_t i = 2 * n; i-- > n;) a = a.project(i);
  std::optional<SemilinearRep> rep;
  if (s.carried_rep()) {
    SemilinearRep r{s.vars(), {}};
    for (const auto& c : s.carried_rep()->components) {
      LinearSet ls{c.base, {}};
      for (std::size_t i = 0; i < n; ++i) ls.base[i] = m * c.base[i] + d[i];
      for (auto p : c.periods) {
        for (auto& x : p) x *= m;
        ls.periods.push_back(std::move(p));
      }
      r.components.push_back(std::move(ls));
    }
    rep = std::move(r);
  }
  return SolutionSet(s.vars(), std::move(a), std::move(rep));
}

SolutionSet diagonalize(const SolutionSet& s, const std::string& x, const std::string& y) {
  int i = s.index_of(x), j = s.index_of(y);
  if (i < 0 || j < 0) throw std::invalid_argument("diagonalize: unknown variable");
  if (i == j) return s;
  std::vector<std::int64_t> c(s.dim(), 0);
  c[i] = 1;
  c[j] = -1;
  return SolutionSet(s.vars(), PresAutomaton::combine(s.automaton(), PresAutomaton::linear_eq(c, 0),
                                                      PresAutomaton::BoolOp::And));
}

SolutionSet rename(const SolutionSet& s, const std::map<std::string, std::string>& names) {
  auto vars = s.vars();
  for (auto& v : vars) {
    auto it = names.find(v);
    if (it != names.end()) v = it->second;
  }
  std::optional<SemilinearRep> rep = s.carried_rep();
  if (rep) rep->vars = vars;
  return SolutionSet(std::move(vars), s.automaton(), std::move(rep));
}

// ---------------------------------------------------------------- extraction

namespace {

bool rep_matches(const SemilinearRep& rep, const SolutionSet& s) {
  return equivalent(SolutionSet::from_linear(rep), s);
}

}  // namespace

namespace {

// q ∈ ℕ·gens (q nonzero), by depth-first subtraction.
bool generated_by(const Vec& q, const std::vector<Vec>& gens) {
  std::set<Vec> seen;
  std::function<bool(const Vec&)> go = [&](const Vec& r) {
    if (std::all_of(r.begin(), r.end(), [](auto x) { return x == 0; })) return true;
    if (!seen.insert(r).second) return false;
    for (const auto& g : gens) {
      bool fits = std::any_of(g.begin(), g.end(), [](auto x) { return x != 0; });
      for (std::size_t i = 0; i < r.size() && fits; ++i) fits = g[i] <= r[i];
      if (!fits) continue;
      Vec next = r;
      for (std::size_t i = 0; i < r.size(); ++i) next[i] -= g[i];
      if (go(next)) return true;
    }
    return false;
  };
  return go(q);
}

}  // namespace

std::optional<SemilinearRep> extract_semilinear(const SolutionSet& s, const ExtractOptions& opts) {
  if (s.carried_rep() && rep_matches(*s.carried_rep(), s)) return s.carried_rep();
  const auto& a = s.automaton();
  const std::size_t d = s.dim();
  if (a.is_finite()) {
    SemilinearRep r{s.vars(), {}};
    for (auto& v : a.finite_members()) r.components.push_back(LinearSet{std::move(v), {}});
    return r;
  }
  if (d > opts.max_dims) return std::nullopt;

  // Guess periods from the members in a probe box, then cover the minimal
  // members greedily; the result is accepted only if it denotes exactly s.
  const std::uint64_t B = opts.probe_box;
  auto members = a.enumerate(B);
  std::vector<Vec> candidates;
  {
    Vec p(d, 0);
    std::vector<Vec> all;
    std::function<void(std::size_t)> gen = [&](std::size_t i) {
      if (i == d) {
        if (std::any_of(p.begin(), p.end(), [](auto x) { return x != 0; })) all.push_back(p);
        return;
      }
      for (std::uint64_t x = 0; x <= B; ++x) {
        p[i] = x;
        gen(i + 1);
      }
      p[i] = 0;
    };
    gen(0);
    std::stable_sort(all.begin(), all.end(), [](const Vec& x, const Vec& y) {
      return std::accumulate(x.begin(), x.end(), std::uint64_t{0}) <
             std::accumulate(y.begin(), y.end(), std::uint64_t{0});
    });
    for (const auto& q : all) {
      if (candidates.size() >= opts.max_candidate_periods) break;
      bool witnessed = false;
      for (const auto& v : members) {
        bool ok = true;
        Vec w = v;
        for (int k = 1; k <= 3 && ok; ++k) {
          for (std::size_t i = 0; i < d; ++i) w[i] += q[i];
          ok = a.accepts(w);
        }
        if (ok) {
          witnessed = true;
          break;
        }
      }
      if (!witnessed) continue;
      // Skip sums of two smaller candidates. (Candidates are only locally
      // witnessed, so longer combinations are not safe to drop here.)
      bool reducible = false;
      for (std::size_t i = 0; i < candidates.size() && !reducible; ++i)
        for (std::size_t j = i; j < candidates.size() && !reducible; ++j) {
          bool eq = true;
          for (std::size_t k = 0; k < d; ++k) eq = eq && candidates[i][k] + candidates[j][k] == q[k];
          reducible = eq;
        }
      if (!reducible) candidates.push_back(q);
    }
  }

  SemilinearRep rep{s.vars(), {}};
  PresAutomaton covered = PresAutomaton::empty(d);
  for (const auto& b : members) {
    if (covered.accepts(b)) continue;
    LinearSet ls{b, {}};
    for (const auto& q : candidates) {
      if (ls.periods.size() >= 2 * d) break;
      if (generated_by(q, ls.periods)) continue;
      LinearSet trial = ls;
      trial.periods.push_back(q);
      auto t = PresAutomaton::linear_set(trial, d);
      if (PresAutomaton::combine(t, a, PresAutomaton::BoolOp::Diff).is_empty()) ls = std::move(trial);
    }
    covered = PresAutomaton::combine(covered, PresAutomaton::linear_set(ls, d), PresAutomaton::BoolOp::Or);
    rep.components.push_back(std::move(ls));
  }
  if (PresAutomaton::equivalent(covered, a)) return rep;
  return std::nullopt;
}

// ---------------------------------------------------------------- formulas

struct Formula::Node {
  Kind kind;
  Term lhs, rhs;
  std::vector<Formula> kids;
  std::string var;
  std::shared_ptr<const SolutionSet> set;
  std::vector<std::string> args;
};

Formula::Term Formula::Term::operator+(const Term& o) const {
  Term t = *this;
  for (const auto& [v, c] : o.coeffs) t.coeffs[v] += c;
  t.constant += o.constant;
  return t;
}

Formula Formula::truth(bool value) {
  auto n = std::make_shared<Node>();
  n->kind = value ? Kind::True : Kind::False;
  return Formula(n);
}

Formula Formula::le(Term lhs, Term rhs) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Le;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return Formula(n);
}

Formula Formula::lt(Term lhs, Term rhs) { return le(lhs + Term::num(1), std::move(rhs)); }

Formula Formula::eq(Term lhs, Term rhs) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Eq;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return Formula(n);
}

Formula Formula::member(SolutionSet s, std::vector<std::string> args) {
  if (args.size() != s.dim()) throw std::invalid_argument("member: arity mismatch");
  auto n = std::make_shared<Node>();
  n->kind = Kind::Member;
  n->set = std::make_shared<const SolutionSet>(std::move(s));
  n->args = std::move(args);
  return Formula(n);
}

Formula Formula::exists(const std::string& var, Formula body) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Exists;
  n->var = var;
  n->kids.push_back(std::move(body));
  return Formula(n);
}

Formula Formula::forall(const std::string& var, Formula body) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Forall;
  n->var = var;
  n->kids.push_back(std::move(body));
  return Formula(n);
}

Formula Formula::exists(const std::vector<std::string>& vars, Formula body) {
  for (auto it = vars.rbegin(); it != vars.rend(); ++it) body = exists(*it, std::move(body));
  return body;
}

Formula Formula::operator&&(const Formula& o) const {
  auto n = std::make_shared<Node>();
  n->kind = Kind::And;
  n->kids = {*this, o};
  return Formula(n);
}

Formula Formula::operator||(const Formula& o) const {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Or;
  n->kids = {*this, o};
  return Formula(n);
}

Formula Formula::operator!() const {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Not;
  n->kids = {*this};
  return Formula(n);
}

Formula::Kind Formula::kind() const { return node_->kind; }

namespace {

void collect_free(const Formula::Node& n, std::vector<std::string>& bound, std::vector<std::string>& out) {
  auto note = [&](const std::string& v) {
    if (std::find(bound.begin(), bound.end(), v) != bound.end()) return;
    if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
  };
  switch (n.kind) {
    case Formula::Kind::Le:
    case Formula::Kind::Eq:
      for (const auto& [v, c] : n.lhs.coeffs) note(v);
      for (const auto& [v, c] : n.rhs.coeffs) note(v);
      break;
    case Formula::Kind::Member:
      for (const auto& v : n.args) note(v);
      break;
    case Formula::Kind::Exists:
    case Formula::Kind::Forall:
      bound.push_back(n.var);
      collect_free(n.kids[0].node(), bound, out);
      bound.pop_back();
      break;
    default:
      for (const auto& k : n.kids) collect_free(k.node(), bound, out);
  }
}

}  // namespace

std::vector<std::string> Formula::free_vars() const {
  std::vector<std::string> bound, out;
  collect_free(*node_, bound, out);
  return out;
}

bool Formula::evaluate(const std::map<std::string, std::uint64_t>& env, std::uint64_t quantifier_bound) const {
  const Node& n = *node_;
  auto value = [&](const Term& t) {
    std::uint64_t s = t.constant;
    for (const auto& [v, c] : t.coeffs) {
      auto it = env.find(v);
      if (it == env.end()) throw std::invalid_argument("evaluate: unbound variable '" + v + "'");
      s += c * it->second;
    }
    return s;
  };
  switch (n.kind) {
    case Kind::True: return true;
    case Kind::False: return false;
    case Kind::Le: return value(n.lhs) <= value(n.rhs);
    case Kind::Eq: return value(n.lhs) == value(n.rhs);
    case Kind::Not: return !n.kids[0].evaluate(env, quantifier_bound);
    case Kind::And: return n.kids[0].evaluate(env, quantifier_bound) && n.kids[1].evaluate(env, quantifier_bound);
    case Kind::Or: return n.kids[0].evaluate(env, quantifier_bound) || n.kids[1].evaluate(env, quantifier_bound);
    case Kind::Exists:
    case Kind::Forall: {
      auto inner = env;
      bool want = n.kind == Kind::Exists;
      for (std::uint64_t x = 0; x <= quantifier_bound; ++x) {
        inner[n.var] = x;
        if (n.kids[0].evaluate(inner, quantifier_bound) == want) return want;
      }
      return !want;
    }
    case Kind::Member: {
      Vec v;
      for (const auto& a : n.args) {
        auto it = env.find(a);
        if (it == env.end()) throw std::invalid_argument("evaluate: unbound variable '" + a + "'");
        v.push_back(it->second);
      }
      return n.set->contains(v);
    }
  }
  return false;
}

namespace {

SolutionSet compile(const Formula::Node& n);

SolutionSet compile_atom(const Formula::Node& n) {
  std::vector<std::string> vars;
  std::map<std::string, std::int64_t> net;
  for (const auto& [v, c] : n.lhs.coeffs) {
    if (std::find(vars.begin(), vars.end(), v) == vars.end()) vars.push_back(v);
    net[v] += static_cast<std::int64_t>(c);
  }
  for (const auto& [v, c] : n.rhs.coeffs) {
    if (std::find(vars.begin(), vars.end(), v) == vars.end()) vars.push_back(v);
    net[v] -= static_cast<std::int64_t>(c);
  }
  std::vector<std::int64_t> coeffs;
  for (const auto& v : vars) coeffs.push_back(net[v]);
  auto bound = static_cast<std::int64_t>(n.rhs.constant) - static_cast<std::int64_t>(n.lhs.constant);
  return SolutionSet(vars, n.kind == Formula::Kind::Le ? PresAutomaton::linear_le(coeffs, bound)
                                                       : PresAutomaton::linear_eq(coeffs, bound));
}

SolutionSet compile_member(const Formula::Node& n) {
  const auto& s = *n.set;
  std::map<std::string, std::string> tmp;
  for (std::size_t i = 0; i < s.dim(); ++i) tmp[s.vars()[i]] = "#" + std::to_string(i);
  SolutionSet cur = rename(s, tmp);
  std::map<std::string, std::string> final_names;
  for (std::size_t i = 0; i < n.args.size(); ++i) {
    auto first = static_cast<std::size_t>(std::find(n.args.begin(), n.args.end(), n.args[i]) - n.args.begin());
    std::string ti = "#" + std::to_string(i);
    if (first == i) {
      final_names[ti] = n.args[i];
    } else {
      cur = exists(diagonalize(cur, "#" + std::to_string(first), ti), ti);
    }
  }
  return rename(cur, final_names);
}

SolutionSet compile(const Formula::Node& n) {
  switch (n.kind) {
    case Formula::Kind::True: return SolutionSet::universe({});
    case Formula::Kind::False: return SolutionSet::empty({});
    case Formula::Kind::Le:
    case Formula::Kind::Eq: return compile_atom(n);
    case Formula::Kind::Not: return complement(compile(n.kids[0].node()));
    case Formula::Kind::And:
      return meet(compile(n.kids[0].node()), compile(n.kids[1].node()));
    case Formula::Kind::Or: {
      auto a = compile(n.kids[0].node());
      auto b = compile(n.kids[1].node());
      auto order = union_order(a.vars(), b.vars());
      return unite(cylindrify(a, order), cylindrify(b, order));
    }
    case Formula::Kind::Exists: return exists(compile(n.kids[0].node()), n.var);
    case Formula::Kind::Forall: return forall(compile(n.kids[0].node()), n.var);
    case Formula::Kind::Member: return compile_member(n);
  }
  throw std::logic_error("compile: unknown formula kind");
}

}  // namespace

SolutionSet formula_to_set(const Formula& f, const std::vector<std::string>& order) {
  auto s = compile(f.node());
  if (order.empty()) return reorder(s, union_order(f.free_vars(), s.vars()));
  for (const auto& v : s.vars())
    if (std::find(order.begin(), order.end(), v) == order.end())
      throw std::invalid_argument("formula_to_set: order misses variable '" + v + "'");
  return reorder(cylindrify(s, order), order);
}

}  // namespace expoknap
