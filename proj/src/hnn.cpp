#include "expoknap/hnn.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <unordered_map>

#include "expoknap/wordeq.hpp"

namespace expoknap {

// ---------------------------------------------------------------- group

HnnGroup::HnnGroup(Alphabet alphabet, std::map<std::uint32_t, StallingsGraph> associated)
    : alphabet_(std::move(alphabet)), associated_(std::move(associated)) {
  for (std::uint32_t g = 0; g < alphabet_.generator_count(); ++g)
    if (alphabet_.is_stable(g) && !associated_.count(g))
      throw std::invalid_argument("HnnGroup: stable letter '" + alphabet_.generator_name(g) + "' has no subgroup");
  for (const auto& [g, A] : associated_) {
    if (g >= alphabet_.generator_count() || !alphabet_.is_stable(g))
      throw std::invalid_argument("HnnGroup: subgroup attached to a non-stable generator");
    if (A.letter_count() != alphabet_.letter_count())
      throw std::invalid_argument("HnnGroup: subgroup alphabet size mismatch");
    for (std::uint32_t v = 0; v < A.vertex_count(); ++v)
      for (std::uint32_t c = 0; c < A.letter_count(); ++c)
        if (alphabet_.is_stable(Letter{c}) && A.target(v, Letter{c}) != StallingsGraph::kNone)
          throw std::invalid_argument("HnnGroup: subgroup uses a stable letter");
  }
}

const StallingsGraph& HnnGroup::subgroup(std::uint32_t g) const {
  auto it = associated_.find(g);
  if (it == associated_.end()) throw std::invalid_argument("HnnGroup: not a stable generator");
  return it->second;
}

std::vector<std::uint32_t> HnnGroup::base_generators() const {
  std::vector<std::uint32_t> out;
  for (std::uint32_t g = 0; g < alphabet_.generator_count(); ++g)
    if (!alphabet_.is_stable(g)) out.push_back(g);
  return out;
}

Word HnnGroup::project_base(const Word& w) const {
  Word out;
  for (Letter a : w)
    if (!is_stable(a)) out.push_back(a);
  return out;
}

Word HnnGroup::project_stable(const Word& w) const {
  Word out;
  for (Letter a : w)
    if (is_stable(a)) out.push_back(a);
  return out;
}

bool HnnGroup::is_base_word(const Word& w) const {
  return std::none_of(w.begin(), w.end(), [&](Letter a) { return is_stable(a); });
}

// ---------------------------------------------------------------- Britton layer

namespace {

void push_reduced(Word& w, Letter a) {
  if (!w.empty() && w.back() == a.inverse())
    w.pop_back();
  else
    w.push_back(a);
}

// w = g0 t1 g1 ... tk gk.
struct Syllables {
  std::vector<Word> g{Word{}};
  std::vector<Letter> t;
};

Syllables syllables(const HnnGroup& H, const Word& w) {
  Syllables s;
  for (Letter a : w) {
    if (H.is_stable(a)) {
      s.t.push_back(a);
      s.g.emplace_back();
    } else {
      s.g.back().push_back(a);
    }
  }
  return s;
}

Word join(const Syllables& s) {
  Word out = s.g[0];
  for (std::size_t i = 0; i < s.t.size(); ++i) {
    out.push_back(s.t[i]);
    out.insert(out.end(), s.g[i + 1].begin(), s.g[i + 1].end());
  }
  return out;
}

bool is_pin(const HnnGroup& H, Letter a, const Word& g, Letter b) {
  return b == a.inverse() && H.subgroup(a.generator()).contains(free_reduce(g));
}

}  // namespace

Word britton_reduce(const HnnGroup& H, const Word& w) {
  Syllables out;
  for (Letter a : w) {
    if (!H.is_stable(a)) {
      push_reduced(out.g.back(), a);
      continue;
    }
    if (!out.t.empty() && is_pin(H, out.t.back(), out.g.back(), a)) {
      Word g = std::move(out.g.back());
      out.g.pop_back();
      out.t.pop_back();
      for (Letter c : g) push_reduced(out.g.back(), c);
    } else {
      out.t.push_back(a);
      out.g.emplace_back();
    }
  }
  return join(out);
}

bool is_britton_reduced(const HnnGroup& H, const Word& w) {
  if (!is_freely_reduced(w)) return false;
  Syllables s = syllables(H, w);
  for (std::size_t i = 0; i + 1 < s.t.size(); ++i)
    if (is_pin(H, s.t[i], s.g[i + 1], s.t[i + 1])) return false;
  return true;
}

Word mult_reduce(const HnnGroup& H, const Word& u, const Word& v) {
  if (!is_britton_reduced(H, u) || !is_britton_reduced(H, v))
    throw std::invalid_argument("mult_reduce: operands must be Britton-reduced");
  Syllables su = syllables(H, u), sv = syllables(H, v);
  const std::size_t k = su.t.size(), l = sv.t.size();
  // m is the reduced middle once i pairs have cancelled.
  Word m = free_reduce(concat(su.g[k], sv.g[0]));
  std::size_t i = 0;
  while (i < k && i < l && is_pin(H, su.t[k - 1 - i], m, sv.t[i])) {
    m = free_reduce(concat({su.g[k - 1 - i], m, sv.g[i + 1]}));
    ++i;
  }
  Syllables out;
  out.g.assign(su.g.begin(), su.g.begin() + static_cast<std::ptrdiff_t>(k - i));
  out.t.assign(su.t.begin(), su.t.begin() + static_cast<std::ptrdiff_t>(k - i));
  out.g.push_back(m);
  out.t.insert(out.t.end(), sv.t.begin() + static_cast<std::ptrdiff_t>(i), sv.t.end());
  out.g.insert(out.g.end(), sv.g.begin() + static_cast<std::ptrdiff_t>(i + 1), sv.g.end());
  return join(out);
}

bool in_base(const HnnGroup& H, const Word& w) { return H.is_base_word(britton_reduce(H, w)); }

bool equals_one(const HnnGroup& H, const Word& w) { return britton_reduce(H, w).empty(); }

WellBehaved well_behaved_decompose(const HnnGroup& H, const Word& u) {
  Word s, p, v = britton_reduce(H, u);
  for (;;) {
    std::vector<std::size_t> T;
    for (std::size_t i = 0; i < v.size(); ++i)
      if (H.is_stable(v[i])) T.push_back(i);
    if (T.size() < 2) break;
    const std::size_t f = T.front(), l = T.back();
    Word a(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(f));
    Word b(v.begin() + static_cast<std::ptrdiff_t>(l + 1), v.end());
    Word mid(v.begin() + static_cast<std::ptrdiff_t>(f + 1), v.begin() + static_cast<std::ptrdiff_t>(l));
    Word ba = concat(b, a);
    if (!is_pin(H, v[l], ba, v[f])) break;
    // u^m = a t^e (ba)⁻¹ (b a mid)^m t^f b.
    s = concat({s, a, Word{v[f]}, invert(ba)});
    p = concat({Word{v[l]}, b, p});
    v = britton_reduce(H, concat(ba, mid));
  }
  WellBehaved out{britton_reduce(H, s), v, britton_reduce(H, p)};
  for (std::uint64_t m = 0; m <= 4; ++m)
    if (!equals_one(H, concat({power(u, m), invert(concat({out.s, power(out.v, m), out.p}))})))
      throw std::logic_error("well_behaved_decompose: decomposition check failed");
  return out;
}

// ---------------------------------------------------------------- G-constraints

namespace {

const std::string kXP = "@xp", kYP = "@yp";

struct Context {
  const HnnGroup& H;
  HnnConfig cfg;
  HnnStats* stats;
  StallingsGraph trivial;
  std::unordered_map<std::string, SolutionSet> rel_cache, band_cache;

  Context(const HnnGroup& h, const HnnConfig& c, HnnStats* s) : H(h), cfg(c), stats(s) {
    if (cfg.relknap.generators.empty()) cfg.relknap.generators = H.base_generators();
    trivial = StallingsGraph::build({}, H.letter_count());
  }

  std::string key(const KnapsackExpr& e) const { return e.format(H.alphabet()); }

  SolutionSet relative(const KnapsackExpr& e, const StallingsGraph& A, const std::string& tag) {
    const std::string k = tag + "|" + key(e);
    auto it = rel_cache.find(k);
    if (it != rel_cache.end()) return it->second;
    if (stats) ++stats->rel_calls;
    auto s = rel_sol(e, A, cfg.relknap);
    rel_cache.emplace(k, s);
    return s;
  }
};

// Σ-segments of a knapsack expression over the base group.
struct ExprBuilder {
  KnapsackExpr e;
  void word(const Word& w) { e.constants.back().insert(e.constants.back().end(), w.begin(), w.end()); }
  void pow(const Word& base, const std::string& var) {
    if (base.empty()) return;  // unconstrained here
    e.powers.push_back({base, var});
    e.constants.emplace_back();
  }
  void expr(const KnapsackExpr& x) {
    word(x.constants[0]);
    for (std::size_t i = 0; i < x.powers.size(); ++i) {
      pow(x.powers[i].base, x.powers[i].var);
      word(x.constants[i + 1]);
    }
  }
};

std::vector<std::size_t> stable_positions(const HnnGroup& H, const Word& w) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < w.size(); ++i)
    if (H.is_stable(w[i])) out.push_back(i);
  return out;
}

Word slice(const Word& w, std::size_t from, std::size_t to) {
  return Word(w.begin() + static_cast<std::ptrdiff_t>(from), w.begin() + static_cast<std::ptrdiff_t>(to));
}

bool is_prefix(const Word& p, const Word& w) { return p.size() <= w.size() && std::equal(p.begin(), p.end(), w.begin()); }
bool is_suffix(const Word& s, const Word& w) {
  return s.size() <= w.size() && std::equal(s.begin(), s.end(), w.end() - static_cast<std::ptrdiff_t>(s.size()));
}

SolutionSet band_set(Context& cx, const PieceSpec& left, const KnapsackExpr& e, const PieceSpec& right) {
  const HnnGroup& H = cx.H;
  auto pt = [&](const Word& w) { return H.project_stable(w); };
  auto pb = [&](const Word& w) { return H.project_base(w); };

  // left = w^X Ps, right = Qh z^Y.
  Word w, Ps, z, Qh;
  if (left.base.empty()) {
    Ps = concat(left.pre, left.suf);
  } else {
    if (!is_suffix(left.pre, left.base) || !is_prefix(left.suf, left.base))
      throw std::invalid_argument("g_constraint_set: left piece is not of the form u'' u^x u'");
    w = concat(left.pre, slice(left.base, 0, left.base.size() - left.pre.size()));
    Ps = concat(left.pre, left.suf);
  }
  if (right.base.empty()) {
    Qh = concat(right.pre, right.suf);
  } else {
    if (!is_suffix(right.pre, right.base) || !is_prefix(right.suf, right.base))
      throw std::invalid_argument("g_constraint_set: right piece is not of the form v' v^y v''");
    z = concat(slice(right.base, right.suf.size(), right.base.size()), right.suf);
    Qh = concat(right.pre, right.suf);
  }
  if (pt(w).empty() && pt(Ps).empty()) throw std::invalid_argument("g_constraint_set: left piece has no stable letter");
  if (pt(z).empty() && pt(Qh).empty()) throw std::invalid_argument("g_constraint_set: right piece has no stable letter");
  if (!left.base.empty() && pt(w).empty()) throw std::invalid_argument("g_constraint_set: left base has no stable letter");
  if (!right.base.empty() && pt(z).empty())
    throw std::invalid_argument("g_constraint_set: right base has no stable letter");
  for (const auto& v : e.variables())
    if (v == left.var || v == right.var) throw std::invalid_argument("g_constraint_set: variable clash");

  const std::string X = left.base.empty() ? "@X" : left.var, Y = right.base.empty() ? "@Y" : right.var;
  const auto evars = e.variables();
  std::vector<std::string> order{X, Y};
  order.insert(order.end(), evars.begin(), evars.end());

  SolutionSet result =
      cylindrify(two_power_eq({}, pt(w), pt(Ps), {}, invert(pt(z)), invert(pt(Qh)), X, Y), order);

  auto content = [&](const Word& s, bool wpow, bool zpow, const Word& p) {
    ExprBuilder b;
    b.word(pb(s));
    if (wpow) {
      b.pow(pb(w), kXP);
      b.word(pb(Ps));
    }
    b.expr(e);
    if (zpow) {
      b.word(pb(Qh));
      b.pow(pb(z), kYP);
    }
    b.word(pb(p));
    return b.e;
  };
  auto D_of = [&](const KnapsackExpr& k, Letter t) {
    return cx.relative(k, H.subgroup(t.generator()), std::to_string(t.generator()));
  };
  auto add = [&](const Formula& f) {
    if (result.is_empty()) return;
    result = meet(result, formula_to_set(f, {}));
  };

  std::vector<Word> Sw, SPs, Pz, PQh;
  for (auto i : stable_positions(H, w)) Sw.push_back(slice(w, i, w.size()));
  for (auto i : stable_positions(H, Ps)) SPs.push_back(slice(Ps, i, Ps.size()));
  for (auto j : stable_positions(H, z)) Pz.push_back(slice(z, 0, j + 1));
  for (auto j : stable_positions(H, Qh)) PQh.push_back(slice(Qh, 0, j + 1));

  for (const auto& s : Sw) {
    for (const auto& p : Pz) {
      if (result.is_empty()) return SolutionSet::empty(order);
      auto C = two_power_eq(pt(s), pt(w), pt(Ps), invert(pt(p)), invert(pt(z)), invert(pt(Qh)), kXP, kYP);
      if (C.is_empty()) continue;
      auto D = D_of(content(s, true, true, p), s[0]);
      add(!Formula::exists({kXP, kYP}, Formula::lt(Formula::Term::var(kXP), Formula::Term::var(X)) &&
                                           Formula::lt(Formula::Term::var(kYP), Formula::Term::var(Y)) &&
                                           Formula::member(C, {kXP, kYP}) && !Formula::member(D, D.vars())));
    }
    for (const auto& p : PQh) {
      auto C = exists(two_power_eq(pt(s), pt(w), pt(Ps), invert(pt(p)), {}, {}, kXP, kYP), kYP);
      if (C.is_empty()) continue;
      auto D = D_of(content(s, true, false, p), s[0]);
      add(!Formula::exists(kXP, Formula::lt(Formula::Term::var(kXP), Formula::Term::var(X)) &&
                                    Formula::member(C, {kXP}) && !Formula::member(D, D.vars())));
    }
  }
  for (const auto& s : SPs) {
    for (const auto& p : Pz) {
      auto C = exists(two_power_eq(pt(s), {}, {}, invert(pt(p)), invert(pt(z)), invert(pt(Qh)), kXP, kYP), kXP);
      if (C.is_empty()) continue;
      auto D = D_of(content(s, false, true, p), s[0]);
      add(!Formula::exists(kYP, Formula::lt(Formula::Term::var(kYP), Formula::Term::var(Y)) &&
                                    Formula::member(C, {kYP}) && !Formula::member(D, D.vars())));
    }
    for (const auto& p : PQh) {
      if (pt(s) != invert(pt(p))) continue;
      auto D = D_of(content(s, false, false, p), s[0]);
      if (result.is_empty()) break;
      result = meet(result, D);
    }
  }
  if (left.base.empty()) result = exists(meet(result, SolutionSet::point({X}, {0})), X);
  if (right.base.empty()) result = exists(meet(result, SolutionSet::point({Y}, {0})), Y);
  std::vector<std::string> out;
  if (!left.base.empty()) out.push_back(X);
  if (!right.base.empty()) out.push_back(Y);
  out.insert(out.end(), evars.begin(), evars.end());
  return restrict_to(cylindrify(result, out), out);
}

std::string piece_key(const HnnGroup& H, const PieceSpec& p) {
  return H.alphabet().format(p.pre) + "/" + H.alphabet().format(p.base) + "/" + H.alphabet().format(p.suf);
}

// Band constraint with canonical variable names, cached.
SolutionSet cached_band(Context& cx, PieceSpec left, const KnapsackExpr& e, PieceSpec right) {
  std::map<std::string, std::string> to_canon, from_canon;
  KnapsackExpr ce = e;
  std::size_t n = 0;
  for (auto& pw : ce.powers) {
    auto [it, fresh] = to_canon.emplace(pw.var, "@z" + std::to_string(n));
    if (fresh) ++n;
    pw.var = it->second;
  }
  for (const auto& [a, b] : to_canon) from_canon[b] = a;
  if (!left.base.empty()) {
    from_canon["@X"] = left.var;
    left.var = "@X";
  }
  if (!right.base.empty()) {
    from_canon["@Y"] = right.var;
    right.var = "@Y";
  }
  const std::string k = piece_key(cx.H, left) + "|" + cx.key(ce) + "|" + piece_key(cx.H, right);
  auto it = cx.band_cache.find(k);
  if (it == cx.band_cache.end()) {
    if (cx.stats) ++cx.stats->bands;
    it = cx.band_cache.emplace(k, band_set(cx, left, ce, right)).first;
  }
  return rename(it->second, from_canon);
}

// ---------------------------------------------------------------- guesses

struct Block {
  enum Kind { SigmaConst, TConst, SigmaPower, TPower } kind;
  Word word;
  std::string var;
  std::vector<std::size_t> T;
};

struct Piece {
  std::size_t block;
  PieceSpec spec;
  Letter first, last;
  std::size_t item;
};

// π_Σ content: pre · base^var · suf, or just pre.
struct Item {
  std::size_t block;
  Word pre, base, suf;
  std::string var;
};

struct State {
  std::vector<Piece> pieces;
  std::vector<std::size_t> stack;
  std::vector<Item> items;
  std::vector<std::set<std::size_t>> partners;
  std::vector<std::size_t> piece_count;
  std::vector<char> zero, done;
  std::vector<std::vector<std::string>> piece_vars;
  SolutionSet R = SolutionSet::universe({});
  std::size_t next_var = 0;
};

class GuessSearch {
 public:
  GuessSearch(Context& cx, std::vector<Block> blocks, std::vector<std::string> vars)
      : cx_(cx), H_(cx.H), blocks_(std::move(blocks)), vars_(std::move(vars)) {
    opens_.resize(blocks_.size());
    for (std::size_t i = 0; i < blocks_.size(); ++i) {
      const auto& b = blocks_[i];
      if (b.kind == Block::TConst || b.kind == Block::TPower) ++t_blocks_;
      for (auto k : b.T) opens_[i].insert(b.word[k].code);
    }
  }

  SolutionSet run() {
    result_ = SolutionSet::empty(vars_);
    State st;
    const std::size_t n = blocks_.size();
    st.partners.resize(n);
    st.piece_count.assign(n, 0);
    st.zero.assign(n, 0);
    st.done.assign(n, 0);
    st.piece_vars.resize(n);
    next_block(std::move(st), 0);
    return result_;
  }

 private:
  void tick() {
    ++nodes_;
    if (cx_.cfg.effort && nodes_ > cx_.cfg.effort) throw EffortExceeded("HNN guess search exceeds effort budget");
  }

  bool dead(const State& st) const { return cx_.cfg.prune && st.R.is_empty(); }

  void next_block(State st, std::size_t b) {
    tick();
    if (!closable(st, b)) return;
    if (b == blocks_.size()) {
      if (!st.stack.empty()) return;
      if (cx_.stats) {
        ++cx_.stats->guesses;
        cx_.stats->max_pieces = std::max(cx_.stats->max_pieces, st.pieces.size());
      }
      if (st.pieces.size() > 4 * blocks_.size()) throw std::logic_error("guess exceeds the structural piece bound");
      auto R = restrict_to(cylindrify(st.R, vars_), vars_);
      result_ = unite(result_, R);
      return;
    }
    const Block& B = blocks_[b];
    switch (B.kind) {
      case Block::SigmaConst:
        st.items.push_back({b, B.word, {}, {}, {}});
        st.done[b] = 1;
        next_block(std::move(st), b + 1);
        return;
      case Block::SigmaPower:
        st.items.push_back({b, {}, B.word, {}, B.var});
        st.done[b] = 1;
        next_block(std::move(st), b + 1);
        return;
      case Block::TConst:
        st.items.push_back({b, H_.project_base(slice(B.word, 0, B.T[0])), {}, {}, {}});
        const_piece(std::move(st), b, 0);
        return;
      case Block::TPower: {
        State z = st;
        z.zero[b] = 1;
        z.R = meet(z.R, SolutionSet::point({B.var}, {0}));
        finish(z, b);
        next_block(std::move(z), b + 1);
        st.items.push_back({b, H_.project_base(slice(B.word, 0, B.T[0])), {}, {}, {}});
        power_piece(std::move(st), b, 0, 1, {});
        return;
      }
    }
  }

  void const_piece(State st, std::size_t b, std::size_t i) {
    const Block& B = blocks_[b];
    for (std::size_t j = i; j < B.T.size(); ++j) {
      PieceSpec spec{slice(B.word, B.T[i], B.T[j] + 1), {}, {}, {}};
      for (State s : place(st, b, spec, B.word[B.T[i]], B.word[B.T[j]])) {
        const std::size_t end = j + 1 < B.T.size() ? B.T[j + 1] : B.word.size();
        s.items.push_back({b, H_.project_base(slice(B.word, B.T[j] + 1, end)), {}, {}, {}});
        if (j + 1 < B.T.size()) {
          const_piece(std::move(s), b, j + 1);
        } else {
          finish(s, b);
          next_block(std::move(s), b + 1);
        }
      }
    }
  }

  // x = copies + Σ spanning vars once the block ends.
  void power_piece(State st, std::size_t b, std::size_t i, std::uint64_t copies, std::vector<std::string> vars) {
    tick();
    const Block& B = blocks_[b];
    const Word& u = B.word;
    const std::size_t tau = B.T.size();
    for (std::size_t j = 0; j < tau; ++j) {
      for (int spanning = 0; spanning < 2; ++spanning) {
        if (!spanning && j < i) continue;
        PieceSpec spec;
        std::uint64_t c = copies;
        auto vs = vars;
        if (spanning) {
          spec = {slice(u, B.T[i], u.size()), u, slice(u, 0, B.T[j] + 1), "@p" + std::to_string(st.next_var)};
          ++c;
          vs.push_back(spec.var);
        } else {
          spec = {slice(u, B.T[i], B.T[j] + 1), {}, {}, {}};
        }
        State base = st;
        if (spanning) {
          ++base.next_var;
          base.piece_vars[b].push_back(spec.var);
        }
        for (State s : place(base, b, spec, u[B.T[i]], u[B.T[j]])) {
          if (j + 1 < tau) {
            s.items.push_back({b, H_.project_base(slice(u, B.T[j] + 1, B.T[j + 1])), {}, {}, {}});
            power_piece(std::move(s), b, j + 1, c, vs);
            continue;
          }
          State wrap = s;
          s.items.push_back({b, H_.project_base(slice(u, B.T[j] + 1, u.size())), {}, {}, {}});
          Formula::Term rhs = Formula::Term::num(c);
          for (const auto& v : vs) rhs = rhs + Formula::Term::var(v);
          s.R = meet(s.R, formula_to_set(Formula::eq(Formula::Term::var(B.var), rhs), {}));
          finish(s, b);
          if (!dead(s)) next_block(std::move(s), b + 1);
          wrap.items.push_back(
              {b, H_.project_base(concat(slice(u, B.T[j] + 1, u.size()), slice(u, 0, B.T[0]))), {}, {}, {}});
          power_piece(std::move(wrap), b, 0, c + 1, vs);
        }
      }
    }
  }

  // Opens the piece or closes the innermost open piece with it.
  std::vector<State> place(const State& st, std::size_t b, const PieceSpec& spec, Letter first, Letter last) {
    std::vector<State> out;
    if (st.piece_count[b] + 1 >= t_blocks_) return out;  // one partner block per piece
    Item item = spec.base.empty()
                    ? Item{b, H_.project_base(spec.pre), {}, {}, {}}
                    : Item{b, H_.project_base(spec.pre), H_.project_base(spec.base), H_.project_base(spec.suf), spec.var};
    // Open.
    {
      State s = st;
      ++s.piece_count[b];
      s.pieces.push_back({b, spec, first, last, s.items.size()});
      s.stack.push_back(s.pieces.size() - 1);
      s.items.push_back(item);
      if (closable(s, b)) out.push_back(std::move(s));
    }
    // Close.
    if (!st.stack.empty()) {
      const Piece& P = st.pieces[st.stack.back()];
      if (P.block != b && !st.partners[b].count(P.block) && P.last == first.inverse()) {
        auto band = cached_band(cx_, P.spec, middle(st, P, b), spec);
        if (!(cx_.cfg.prune && band.is_empty())) {
          State s = st;
          s.R = meet(s.R, band);
          s.partners[b].insert(P.block);
          s.partners[P.block].insert(b);
          ++s.piece_count[b];
          s.stack.pop_back();
          s.pieces.push_back({b, spec, first, last, s.items.size()});
          s.items.push_back(item);
          collect(s);
          if (!dead(s) && closable(s, b)) out.push_back(std::move(s));
        }
      }
    }
    return out;
  }

  // Open pieces close innermost first, each in a later block that can start
  // a piece with the inverse letter and is not yet a partner of its block.
  bool closable(const State& st, std::size_t from) const {
    std::size_t f = from;
    std::vector<std::pair<std::size_t, std::size_t>> used;
    for (std::size_t k = st.stack.size(); k-- > 0;) {
      const Piece& P = st.pieces[st.stack[k]];
      const std::uint32_t want = P.last.inverse().code;
      std::size_t c = f;
      for (; c < blocks_.size(); ++c) {
        if (c == P.block || !opens_[c].count(want) || st.partners[c].count(P.block)) continue;
        if (std::find(used.begin(), used.end(), std::make_pair(c, P.block)) != used.end()) continue;
        break;
      }
      if (c == blocks_.size()) return false;
      used.emplace_back(c, P.block);
      f = c;
    }
    return true;
  }

  KnapsackExpr middle(const State& st, const Piece& P, std::size_t b) const {
    ExprBuilder eb;
    std::size_t last_whole = SIZE_MAX;
    for (std::size_t k = P.item + 1; k < st.items.size(); ++k) {
      const Item& it = st.items[k];
      if (it.block != P.block && it.block != b) {
        if (it.block == last_whole) continue;
        last_whole = it.block;
        const Block& B = blocks_[it.block];
        switch (B.kind) {
          case Block::SigmaConst: eb.word(B.word); break;
          case Block::TConst: eb.word(H_.project_base(B.word)); break;
          case Block::SigmaPower: eb.pow(B.word, B.var); break;
          case Block::TPower:
            if (!st.zero[it.block]) eb.pow(H_.project_base(B.word), B.var);
            break;
        }
        continue;
      }
      eb.word(it.pre);
      if (!it.var.empty()) {
        eb.pow(it.base, it.var);
        eb.word(it.suf);
      }
    }
    return eb.e;
  }

  void finish(State& st, std::size_t b) {
    st.done[b] = 1;
    collect(st);
  }

  // Projects piece variables no later band can mention.
  void collect(State& st) {
    for (std::size_t bb = 0; bb < blocks_.size(); ++bb) {
      if (!st.done[bb] || st.piece_vars[bb].empty()) continue;
      bool open = std::any_of(st.stack.begin(), st.stack.end(), [&](std::size_t p) { return st.pieces[p].block == bb; });
      if (open) continue;
      for (const auto& v : st.piece_vars[bb])
        if (st.R.index_of(v) >= 0) st.R = exists(st.R, v);
      st.piece_vars[bb].clear();
    }
  }

  Context& cx_;
  const HnnGroup& H_;
  std::vector<Block> blocks_;
  std::vector<std::string> vars_;
  std::size_t t_blocks_ = 0;
  std::vector<std::set<std::uint32_t>> opens_;  // first letters of pieces per block
  std::uint64_t nodes_ = 0;
  SolutionSet result_;
};

struct Prepared {
  KnapsackExpr expr;  // Britton-reduced constants, well-behaved nonempty bases
  std::vector<std::string> free_vars;
};

Prepared prepare(const HnnGroup& H, const KnapsackExpr& e) {
  e.validate();
  Prepared out;
  std::vector<Word> consts{e.constants[0]};
  for (std::size_t i = 0; i < e.powers.size(); ++i) {
    Word u = britton_reduce(H, e.powers[i].base);
    if (u.empty()) {
      out.free_vars.push_back(e.powers[i].var);
      consts.back() = concat(consts.back(), e.constants[i + 1]);
      continue;
    }
    auto wb = well_behaved_decompose(H, u);
    consts.back() = concat(consts.back(), wb.s);
    out.expr.powers.push_back({wb.v, e.powers[i].var});
    consts.push_back(concat(wb.p, e.constants[i + 1]));
  }
  out.expr.constants.clear();
  for (const auto& c : consts) out.expr.constants.push_back(britton_reduce(H, c));
  return out;
}

SolutionSet membership(Context& cx, const KnapsackExpr& e) {
  const HnnGroup& H = cx.H;
  std::vector<Block> blocks;
  auto add_const = [&](const Word& c) {
    if (c.empty()) return;
    auto T = stable_positions(H, c);
    blocks.push_back({T.empty() ? Block::SigmaConst : Block::TConst, c, {}, T});
  };
  add_const(e.constants[0]);
  for (std::size_t i = 0; i < e.powers.size(); ++i) {
    auto T = stable_positions(H, e.powers[i].base);
    blocks.push_back({T.empty() ? Block::SigmaPower : Block::TPower, e.powers[i].base, e.powers[i].var, T});
    add_const(e.constants[i + 1]);
  }
  GuessSearch search(cx, std::move(blocks), e.variables());
  return search.run();
}

std::vector<std::string> union_vars(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  auto out = a;
  for (const auto& v : b)
    if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
  return out;
}

// Gives every repeated occurrence a fresh name; copies[fresh] = original.
KnapsackExpr split_repeats(const KnapsackExpr& e, std::map<std::string, std::string>& copies) {
  KnapsackExpr out = e;
  std::map<std::string, std::size_t> seen;
  for (auto& p : out.powers) {
    std::size_t n = seen[p.var]++;
    if (n == 0) continue;
    std::string fresh = p.var + "~" + std::to_string(n);
    copies[fresh] = p.var;
    p.var = fresh;
  }
  return out;
}

SolutionSet merge_copies(SolutionSet s, const std::map<std::string, std::string>& copies,
                         const std::vector<std::string>& order) {
  for (const auto& [fresh, orig] : copies) s = exists(diagonalize(s, orig, fresh), fresh);
  return reorder(s, order);
}

}  // namespace

SolutionSet g_constraint_set(const HnnGroup& H, const PieceSpec& left, const KnapsackExpr& e, const PieceSpec& right,
                             const HnnConfig& cfg, HnnStats* stats) {
  if (!H.is_base_word(concat(e.constants[0], e.constants.back())))
    throw std::invalid_argument("g_constraint_set: middle expression must be over the base group");
  for (const auto& p : e.powers)
    if (!H.is_base_word(p.base)) throw std::invalid_argument("g_constraint_set: middle expression must be over the base group");
  for (const auto& c : e.constants)
    if (!H.is_base_word(c)) throw std::invalid_argument("g_constraint_set: middle expression must be over the base group");
  if (e.has_repeated_variables()) throw std::invalid_argument("g_constraint_set: repeated variable");
  Context cx(H, cfg, stats);
  return band_set(cx, left, e, right);
}

SolutionSet lemma2dim_set(const HnnGroup& H, const Word& u, const Word& u1, const Word& u2, const Word& v,
                          const Word& v1, const Word& v2, const KnapsackExpr& e, const HnnConfig& cfg,
                          const std::string& x, const std::string& y) {
  if (u.empty() || v.empty()) throw std::invalid_argument("lemma2dim_set: empty base");
  return g_constraint_set(H, PieceSpec{u2, u, u1, x}, e, PieceSpec{v1, v, v2, y}, cfg);
}

SolutionSet remark1dim_set(const HnnGroup& H, const PieceSpec& left, const KnapsackExpr& e, const PieceSpec& right,
                           const HnnConfig& cfg) {
  return g_constraint_set(H, left, e, right, cfg);
}

SolutionSet base_membership_set(const HnnGroup& H, const KnapsackExpr& e, const HnnConfig& cfg, HnnStats* stats) {
  if (e.has_repeated_variables()) throw std::invalid_argument("base_membership_set: repeated variable");
  Context cx(H, cfg, stats);
  auto prep = prepare(H, e);
  auto order = e.variables();
  return reorder(cylindrify(membership(cx, prep.expr), order), order);
}

SolutionSet sol(const HnnGroup& H, const KnapsackExpr& e, const HnnConfig& cfg, HnnStats* stats) {
  e.validate();
  std::map<std::string, std::string> copies;
  KnapsackExpr k = split_repeats(e, copies);
  Context cx(H, cfg, stats);
  auto prep = prepare(H, k);
  const auto all = k.variables();

  ExprBuilder proj;
  proj.word(H.project_base(prep.expr.constants[0]));
  for (std::size_t i = 0; i < prep.expr.powers.size(); ++i) {
    proj.pow(H.project_base(prep.expr.powers[i].base), prep.expr.powers[i].var);
    proj.word(H.project_base(prep.expr.constants[i + 1]));
  }
  auto F = cx.relative(proj.e, cx.trivial, "1");
  SolutionSet result = cylindrify(F, all);
  if (!result.is_empty()) result = meet(result, membership(cx, prep.expr));
  result = restrict_to(cylindrify(result, all), all);
  return merge_copies(result, copies, e.variables());
}

SolutionSet exponent_sol(const HnnGroup& H, const std::vector<KnapsackExpr>& system, const HnnConfig& cfg,
                         HnnStats* stats) {
  std::vector<std::string> order;
  for (const auto& e : system) order = union_vars(order, e.variables());
  SolutionSet result = SolutionSet::universe(order);
  for (const auto& e : system) {
    if (result.is_empty()) break;
    result = meet(result, sol(H, e, cfg, stats));
  }
  return reorder(result, order);
}

SolutionSet centralizer_membership(const KnapsackExpr& e, const std::vector<Word>& S, std::size_t letter_count,
                                   const RelKnapConfig& cfg) {
  e.validate();
  const auto order = e.variables();
  const auto trivial = StallingsGraph::build({}, letter_count);
  SolutionSet result = SolutionSet::universe(order);
  for (const auto& a : S) {
    // e a e⁻¹ a⁻¹ with every variable of e occurring twice.
    KnapsackExpr c = e;
    c.constants.back() = concat({c.constants.back(), a, invert(e.constants.back())});
    for (std::size_t i = e.powers.size(); i-- > 0;) {
      c.powers.push_back({invert(e.powers[i].base), e.powers[i].var});
      c.constants.push_back(invert(e.constants[i]));
    }
    c.constants.back() = concat(c.constants.back(), invert(a));
    std::map<std::string, std::string> copies;
    auto k = split_repeats(c, copies);
    auto s = restrict_to(cylindrify(rel_sol(k, trivial, cfg), k.variables()), k.variables());
    result = meet(result, merge_copies(s, copies, order));
  }
  return reorder(result, order);
}

}  // namespace expoknap
