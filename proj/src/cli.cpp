#include "expoknap/cli.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "expoknap/automata.hpp"
#include "expoknap/freegroup.hpp"
#include "expoknap/hnn.hpp"
#include "expoknap/oracle.hpp"
#include "expoknap/presburger.hpp"
#include "expoknap/relknap.hpp"

namespace expoknap::cli {

ParseError::ParseError(std::size_t line, std::size_t column, const std::string& msg)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + msg),
      line_(line),
      column_(column),
      msg_(msg) {}

// ---------------------------------------------------------------- lookups

const FreeDecl* ProblemFile::find_free(std::string_view name) const {
  for (const auto& f : frees)
    if (f.name == name) return &f;
  return nullptr;
}

const SubgroupDecl* ProblemFile::find_subgroup(std::string_view name) const {
  for (const auto& s : subgroups)
    if (s.name == name) return &s;
  return nullptr;
}

const ExprDecl* ProblemFile::find_expr(std::string_view name) const {
  for (const auto& e : exprs)
    if (e.name == name) return &e;
  return nullptr;
}

bool ProblemFile::is_hnn(std::string_view name) const {
  return std::any_of(hnns.begin(), hnns.end(), [&](const HnnDecl& h) { return h.name == name; });
}

Alphabet ProblemFile::alphabet_of(std::string_view group) const {
  if (const auto* f = find_free(group)) return Alphabet(f->generators);
  Alphabet al;
  bool first = true;
  for (const auto& h : hnns) {
    if (h.name != group) continue;
    if (first) al = Alphabet(find_free(h.base)->generators);
    first = false;
    al.add_generator(h.stable, true);
  }
  if (first) throw std::invalid_argument("unknown group '" + std::string(group) + "'");
  return al;
}

// ---------------------------------------------------------------- lexer

namespace {

struct Token {
  enum Kind { Ident, Number, Sym, End } kind = End;
  std::string text;
  std::size_t col = 0;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\''; }

std::vector<Token> lex(std::string_view s, std::size_t line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    char c = s[i];
    if (c == ' ' || c == '\t' || c == '\r') {
      ++i;
    } else if (ident_start(c)) {
      std::size_t j = i;
      while (j < s.size() && ident_char(s[j])) ++j;
      out.push_back({Token::Ident, std::string(s.substr(i, j - i)), i + 1});
      i = j;
    } else if (std::isdigit(static_cast<unsigned char>(c)) ||
               (c == '-' && i + 1 < s.size() && std::isdigit(static_cast<unsigned char>(s[i + 1])))) {
      std::size_t j = i + 1;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      out.push_back({Token::Number, std::string(s.substr(i, j - i)), i + 1});
      i = j;
    } else if (std::string_view("=<>,()^").find(c) != std::string_view::npos) {
      out.push_back({Token::Sym, std::string(1, c), i + 1});
      ++i;
    } else {
      throw ParseError(line, i + 1, std::string("unexpected character '") + c + "'");
    }
  }
  out.push_back({Token::End, "", s.size() + 1});
  return out;
}

const std::set<std::string> kKeywords = {"free",   "subgroup", "hnn",       "extend",    "by",     "commuting", "expr",
                                         "solve",  "system",   "relative",  "enumerate", "parikh", "in",        "box"};

class LineParser {
 public:
  LineParser(std::vector<Token> toks, std::size_t line) : t_(std::move(toks)), line_(line) {}

  const Token& peek() const { return t_[i_]; }
  Token next() { return t_[i_ == t_.size() - 1 ? i_ : i_++]; }
  bool at_sym(const char* s) const { return peek().kind == Token::Sym && peek().text == s; }
  bool at_word(const char* s) const { return peek().kind == Token::Ident && peek().text == s; }
  bool at_end() const { return peek().kind == Token::End; }

  [[noreturn]] void fail(const Token& t, const std::string& msg) const { throw ParseError(line_, t.col, msg); }

  void expect_sym(const char* s) {
    if (!at_sym(s)) fail(peek(), std::string("expected '") + s + "'" + found());
    next();
  }
  void expect_word(const char* s) {
    if (!at_word(s)) fail(peek(), std::string("expected '") + s + "'" + found());
    next();
  }
  void expect_end() {
    if (!at_end()) fail(peek(), "unexpected '" + peek().text + "'");
  }
  Token name() {
    if (peek().kind != Token::Ident || kKeywords.count(peek().text)) fail(peek(), "expected a name" + found());
    return next();
  }
  std::uint64_t number() {
    if (peek().kind != Token::Number || peek().text[0] == '-') fail(peek(), "expected a natural number" + found());
    return std::stoull(next().text);
  }

  /// Product of letters, `1`, parenthesized words and their powers, up to a
  /// token that cannot start an atom. With vars = false no `^name` is allowed.
  KnapsackExpr product(const Alphabet& al, bool vars) {
    KnapsackExpr e;
    for (;;) {
      Word w;
      if (at_sym("(")) {
        next();
        KnapsackExpr inner = product(al, false);
        expect_sym(")");
        w = inner.constants[0];
      } else if (peek().kind == Token::Number && peek().text == "1") {
        next();
      } else if (peek().kind == Token::Ident && peek().text != "in") {
        int g = al.find(peek().text);
        if (g < 0) fail(peek(), "unknown generator '" + peek().text + "'");
        w.push_back(Letter::make(static_cast<std::uint32_t>(g), false));
        next();
      } else {
        break;
      }
      bool powered = false;
      while (at_sym("^")) {
        const Token caret = next();
        if (powered) fail(caret, "a variable power cannot be raised again");
        if (peek().kind == Token::Number) {
          long long n = std::stoll(next().text);
          if (n < 0) w = invert(w);
          w = power(w, static_cast<std::uint64_t>(n < 0 ? -n : n));
        } else if (peek().kind == Token::Ident && !kKeywords.count(peek().text)) {
          if (!vars) fail(peek(), "variable exponent not allowed here");
          if (al.find(peek().text) >= 0) fail(peek(), "'" + peek().text + "' is a generator, not a variable");
          e.powers.push_back({w, next().text});
          e.constants.emplace_back();
          powered = true;
        } else {
          fail(peek(), "expected an exponent" + found());
        }
      }
      if (!powered) e.constants.back().insert(e.constants.back().end(), w.begin(), w.end());
    }
    return e;
  }

 private:
  std::string found() const { return at_end() ? ", found end of line" : ", found '" + peek().text + "'"; }

  std::vector<Token> t_;
  std::size_t i_ = 0;
  std::size_t line_;
};

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

}  // namespace

// ---------------------------------------------------------------- parser

ProblemFile parse(std::string_view text) {
  ProblemFile p;
  std::set<std::string> names;  // groups, subgroups and expressions share one namespace
  std::size_t lineno = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view raw = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++lineno;
    if (auto h = raw.find('#'); h != std::string_view::npos) raw = raw.substr(0, h);
    if (trim(raw).empty()) continue;

    // The path after `parikh` is taken verbatim.
    {
      std::size_t b = 0;
      while (b < raw.size() && std::isspace(static_cast<unsigned char>(raw[b]))) ++b;
      if (raw.substr(b, 6) == "parikh" && (b + 6 == raw.size() || std::isspace(static_cast<unsigned char>(raw[b + 6])))) {
        Query q;
        q.kind = Query::Kind::Parikh;
        q.path = trim(raw.substr(b + 6));
        q.line = lineno;
        if (q.path.empty()) throw ParseError(lineno, raw.size() + 1, "expected an automaton file");
        p.order.emplace_back('q', p.queries.size());
        p.queries.push_back(std::move(q));
        continue;
      }
    }

    LineParser lp(lex(raw, lineno), lineno);
    const Token head = lp.next();
    auto fresh = [&](const Token& t) {
      if (names.count(t.text)) lp.fail(t, "'" + t.text + "' is already declared");
      names.insert(t.text);
    };
    auto group_ref = [&](const Token& t) {
      if (!p.find_free(t.text) && !p.is_hnn(t.text)) lp.fail(t, "undeclared group '" + t.text + "'");
    };
    auto expr_ref = [&](const Token& t) -> const ExprDecl& {
      const auto* e = p.find_expr(t.text);
      if (!e) lp.fail(t, "undeclared expression '" + t.text + "'");
      return *e;
    };

    if (head.kind != Token::Ident) lp.fail(head, "expected a declaration or query");
    if (head.text == "free") {
      FreeDecl f;
      const Token n = lp.name();
      f.name = n.text;
      lp.expect_sym("=");
      lp.expect_sym("<");
      if (!lp.at_sym(">")) {
        for (;;) {
          const Token g = lp.name();
          if (std::find(f.generators.begin(), f.generators.end(), g.text) != f.generators.end())
            lp.fail(g, "generator '" + g.text + "' listed twice");
          f.generators.push_back(g.text);
          if (!lp.at_sym(",")) break;
          lp.next();
        }
      }
      lp.expect_sym(">");
      lp.expect_end();
      fresh(n);
      p.order.emplace_back('f', p.frees.size());
      p.frees.push_back(std::move(f));
    } else if (head.text == "subgroup") {
      SubgroupDecl s;
      const Token n = lp.name();
      s.name = n.text;
      lp.expect_sym("=");
      lp.expect_sym("<");
      // The group comes last; find it first so the words can be read.
      // Scan ahead for `> in G`.
      LineParser ahead = lp;
      while (!ahead.at_end() && !ahead.at_sym(">")) ahead.next();
      ahead.expect_sym(">");
      ahead.expect_word("in");
      const Token g = ahead.name();
      ahead.expect_end();
      if (!p.find_free(g.text)) {
        if (p.is_hnn(g.text)) lp.fail(g, "subgroups must live in a free group");
        lp.fail(g, "undeclared group '" + g.text + "'");
      }
      s.group = g.text;
      const Alphabet al = p.alphabet_of(g.text);
      if (!lp.at_sym(">")) {
        for (;;) {
          const Token at = lp.peek();
          KnapsackExpr w = lp.product(al, false);
          if (w.constants[0].empty() && at.kind == Token::Sym) lp.fail(at, "expected a word");
          s.generators.push_back(w.constants[0]);
          if (!lp.at_sym(",")) break;
          lp.next();
        }
      }
      lp.expect_sym(">");
      lp.expect_word("in");
      lp.next();
      lp.expect_end();
      fresh(n);
      p.order.emplace_back('s', p.subgroups.size());
      p.subgroups.push_back(std::move(s));
    } else if (head.text == "hnn") {
      HnnDecl h;
      const Token n = lp.name();
      h.name = n.text;
      lp.expect_sym("=");
      lp.expect_word("extend");
      const Token b = lp.name();
      if (!p.find_free(b.text)) lp.fail(b, "undeclared free group '" + b.text + "'");
      h.base = b.text;
      lp.expect_word("by");
      const Token t = lp.name();
      h.stable = t.text;
      lp.expect_word("commuting");
      const Token a = lp.name();
      const auto* sub = p.find_subgroup(a.text);
      if (!sub) lp.fail(a, "undeclared subgroup '" + a.text + "'");
      if (sub->group != h.base) lp.fail(a, "subgroup '" + a.text + "' is not a subgroup of '" + h.base + "'");
      h.subgroup = a.text;
      lp.expect_end();
      if (p.is_hnn(h.name)) {
        Alphabet al = p.alphabet_of(h.name);
        const auto first = std::find_if(p.hnns.begin(), p.hnns.end(), [&](const HnnDecl& x) { return x.name == h.name; });
        if (first->base != h.base) lp.fail(b, "'" + h.name + "' extends '" + first->base + "'");
        if (al.find(h.stable) >= 0) lp.fail(t, "'" + h.stable + "' is already a generator of '" + h.name + "'");
        if (std::any_of(p.exprs.begin(), p.exprs.end(), [&](const ExprDecl& e) { return e.group == h.name; }))
          lp.fail(t, "'" + h.name + "' already has expressions; declare all stable letters first");
      } else {
        fresh(n);
        if (Alphabet(p.find_free(h.base)->generators).find(h.stable) >= 0)
          lp.fail(t, "'" + h.stable + "' is already a generator of '" + h.base + "'");
      }
      p.order.emplace_back('h', p.hnns.size());
      p.hnns.push_back(std::move(h));
    } else if (head.text == "expr") {
      ExprDecl e;
      const Token n = lp.name();
      e.name = n.text;
      lp.expect_sym("=");
      LineParser ahead = lp;
      Token g;
      while (!ahead.at_end()) {
        if (ahead.at_word("in")) {
          ahead.next();
          g = ahead.peek();
        }
        ahead.next();
      }
      if (g.kind != Token::Ident) lp.fail(ahead.peek(), "expected 'in' and a group");
      group_ref(g);
      e.group = g.text;
      e.expr = lp.product(p.alphabet_of(g.text), true);
      lp.expect_word("in");
      lp.next();
      lp.expect_end();
      fresh(n);
      p.order.emplace_back('e', p.exprs.size());
      p.exprs.push_back(std::move(e));
    } else if (head.text == "solve" || head.text == "enumerate" || head.text == "relative") {
      Query q;
      q.line = lineno;
      if (head.text == "solve" && lp.at_word("system")) {
        lp.next();
        q.kind = Query::Kind::System;
        const ExprDecl* first = nullptr;
        for (;;) {
          const Token t = lp.name();
          const auto& e = expr_ref(t);
          if (first && e.group != first->group)
            lp.fail(t, "'" + t.text + "' is over '" + e.group + "', not '" + first->group + "'");
          if (!first) first = &e;
          q.names.push_back(t.text);
          if (!lp.at_sym(",")) break;
          lp.next();
        }
      } else {
        const Token t = lp.name();
        const auto& e = expr_ref(t);
        q.names.push_back(t.text);
        if (head.text == "solve") {
          q.kind = Query::Kind::Solve;
        } else if (head.text == "enumerate") {
          q.kind = Query::Kind::Enumerate;
          if (lp.at_word("box")) {
            lp.next();
            lp.expect_sym("=");
            q.box = lp.number();
          }
        } else {
          q.kind = Query::Kind::Relative;
          lp.expect_word("in");
          const Token a = lp.name();
          const auto* sub = p.find_subgroup(a.text);
          if (!sub) lp.fail(a, "undeclared subgroup '" + a.text + "'");
          if (sub->group != e.group) lp.fail(a, "'" + e.name + "' is over '" + e.group + "', not '" + sub->group + "'");
          if (e.expr.has_repeated_variables()) lp.fail(t, "relative queries need pairwise distinct variables");
          q.names.push_back(a.text);
        }
      }
      lp.expect_end();
      p.order.emplace_back('q', p.queries.size());
      p.queries.push_back(std::move(q));
    } else {
      lp.fail(head, "unknown statement '" + head.text + "'");
    }
  }
  return p;
}

// ---------------------------------------------------------------- formatter

namespace {

std::string join(const std::vector<std::string>& xs, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? sep : "") + xs[i];
  return out;
}

}  // namespace

std::string format(const ProblemFile& p) {
  std::ostringstream out;
  for (auto [kind, i] : p.order) {
    switch (kind) {
      case 'f':
        out << "free " << p.frees[i].name << " = <" << join(p.frees[i].generators, ", ") << ">\n";
        break;
      case 's': {
        const auto& s = p.subgroups[i];
        const Alphabet al = p.alphabet_of(s.group);
        std::vector<std::string> ws;
        for (const auto& w : s.generators) ws.push_back(al.format(w));
        out << "subgroup " << s.name << " = <" << join(ws, ", ") << "> in " << s.group << "\n";
        break;
      }
      case 'h': {
        const auto& h = p.hnns[i];
        out << "hnn " << h.name << " = extend " << h.base << " by " << h.stable << " commuting " << h.subgroup << "\n";
        break;
      }
      case 'e': {
        const auto& e = p.exprs[i];
        out << "expr " << e.name << " = " << e.expr.format(p.alphabet_of(e.group)) << " in " << e.group << "\n";
        break;
      }
      default: {
        const auto& q = p.queries[i];
        switch (q.kind) {
          case Query::Kind::Solve: out << "solve " << q.names[0]; break;
          case Query::Kind::System: out << "solve system " << join(q.names, ", "); break;
          case Query::Kind::Relative: out << "relative " << q.names[0] << " in " << q.names[1]; break;
          case Query::Kind::Enumerate:
            out << "enumerate " << q.names[0];
            if (q.box) out << " box=" << *q.box;
            break;
          case Query::Kind::Parikh: out << "parikh " << q.path; break;
        }
        out << "\n";
      }
    }
  }
  return out.str();
}

// ---------------------------------------------------------------- runner

namespace {

using oracle::Point;

struct Group {
  HnnGroup H;
  oracle::Presentation pres;
};

Group build_group(const ProblemFile& p, const std::string& name) {
  Group g;
  g.pres.alphabet = p.alphabet_of(name);
  std::map<std::uint32_t, StallingsGraph> assoc;
  for (const auto& h : p.hnns) {
    if (h.name != name) continue;
    const auto t = static_cast<std::uint32_t>(g.pres.alphabet.find(h.stable));
    const auto& gens = p.find_subgroup(h.subgroup)->generators;
    assoc[t] = StallingsGraph::build(gens, g.pres.alphabet.letter_count());
    g.pres.subgroup_generators[t] = gens;
  }
  g.H = HnnGroup(g.pres.alphabet, std::move(assoc));
  return g;
}

std::string describe(const Query& q) {
  ProblemFile one;
  one.queries = {q};
  one.order = {{'q', 0}};
  std::string s = format(one);
  return s.substr(0, s.size() - 1);
}

// Every point of [0, box]^n in lexicographic order.
template <class F>
void for_box(std::size_t n, std::uint64_t box, F&& f) {
  Point x(n, 0);
  for (;;) {
    f(x);
    std::size_t i = n;
    while (i > 0 && x[i - 1] == box) x[--i] = 0;
    if (i == 0) return;
    ++x[i - 1];
  }
}

std::map<std::string, std::uint64_t> valuation(const std::vector<std::string>& vars, const Point& x) {
  std::map<std::string, std::uint64_t> s;
  for (std::size_t i = 0; i < vars.size(); ++i) s[vars[i]] = x[i];
  return s;
}

nlohmann::json diff(const std::vector<Point>& ours, const std::vector<Point>& theirs, std::uint64_t box) {
  std::vector<Point> missing, extra;
  std::set_difference(theirs.begin(), theirs.end(), ours.begin(), ours.end(), std::back_inserter(missing));
  std::set_difference(ours.begin(), ours.end(), theirs.begin(), theirs.end(), std::back_inserter(extra));
  return {{"box", box}, {"agrees", missing.empty() && extra.empty()}, {"missing", missing}, {"extra", extra}};
}

// Parikh vectors of accepted words of length ≤ len, sorted.
std::vector<Point> brute_parikh(const Nfa& a, std::uint64_t len) {
  std::set<std::pair<std::uint32_t, Point>> layer, all;
  for (auto q : a.initial) layer.insert({q, Point(a.letter_count, 0)});
  all = layer;
  for (std::uint64_t l = 0; l < len; ++l) {
    std::set<std::pair<std::uint32_t, Point>> next;
    for (const auto& [q, v] : layer)
      for (const auto& e : a.edges)
        if (e.from == q) {
          Point w = v;
          ++w[e.letter];
          if (all.insert({e.to, w}).second) next.insert({e.to, w});
        }
    layer = std::move(next);
  }
  std::set<Point> out;
  for (const auto& [q, v] : all)
    if (std::find(a.final_states.begin(), a.final_states.end(), q) != a.final_states.end()) out.insert(v);
  return {out.begin(), out.end()};
}

// Pulls each base back along its periods while the set stays the same,
// then drops subsumed components. Only equivalence-checked steps are kept.
std::vector<LinearSet> tidy(const SolutionSet& s, std::vector<LinearSet> comps) {
  comps = semilinear::simplify(std::move(comps));
  for (std::size_t i = 0; i < comps.size(); ++i) {
    for (bool moved = true; moved;) {
      moved = false;
      for (const auto& p : comps[i].periods) {
        bool fits = true;
        for (std::size_t d = 0; d < p.size(); ++d) fits = fits && p[d] <= comps[i].base[d];
        if (!fits || std::all_of(p.begin(), p.end(), [](auto v) { return v == 0; })) continue;
        auto trial = comps;
        for (std::size_t d = 0; d < p.size(); ++d) trial[i].base[d] -= p[d];
        if (equivalent(SolutionSet::from_linear(SemilinearRep{s.vars(), trial}), s)) {
          comps = std::move(trial);
          moved = true;
          break;
        }
      }
    }
  }
  return semilinear::simplify(std::move(comps));
}

// Prefer the extracted form; carried representations can list many
// redundant periods.
nlohmann::json representation(const SolutionSet& s) {
  std::optional<SemilinearRep> rep = extract_semilinear(s);
  if (!rep) rep = s.carried_rep();
  if (!rep) return "AUTOMATON-ONLY";
  return SemilinearRep{s.vars(), tidy(s, rep->components)}.to_json().at("components");
}

std::vector<Point> sorted_points(const SolutionSet& s, std::uint64_t box) {
  auto pts = s.enumerate(box);
  std::sort(pts.begin(), pts.end());
  return pts;
}

}  // namespace

nlohmann::json run(const ProblemFile& p, const Options& opts) {
  HnnConfig cfg;
  cfg.relknap.kappa = opts.kappa;
  cfg.relknap.ball = opts.ball;
  cfg.relknap.effort = opts.effort;
  cfg.effort = opts.effort;

  nlohmann::json results = nlohmann::json::array();
  std::map<std::string, Group> groups;
  auto group = [&](const std::string& name) -> const Group& {
    auto it = groups.find(name);
    if (it == groups.end()) it = groups.emplace(name, build_group(p, name)).first;
    return it->second;
  };

  for (const auto& q : p.queries) {
    const auto start = std::chrono::steady_clock::now();
    nlohmann::json r;
    r["query"] = describe(q);
    r["line"] = q.line;
    const std::uint64_t box = q.box.value_or(opts.box);
    SolutionSet s;
    nlohmann::json check;

    switch (q.kind) {
      case Query::Kind::Solve:
      case Query::Kind::Enumerate: {
        const auto& e = *p.find_expr(q.names[0]);
        const Group& g = group(e.group);
        s = reorder(sol(g.H, e.expr, cfg), e.expr.variables());
        if (opts.oracle) {
          oracle::Oracle o(g.pres);
          check = diff(sorted_points(s, box), oracle::brute_solutions_parallel(o, e.expr, box), box);
        }
        break;
      }
      case Query::Kind::System: {
        std::vector<KnapsackExpr> sys;
        for (const auto& n : q.names) sys.push_back(p.find_expr(n)->expr);
        const Group& g = group(p.find_expr(q.names[0])->group);
        s = exponent_sol(g.H, sys, cfg);
        if (opts.oracle) {
          oracle::Oracle o(g.pres);
          std::vector<Point> hits;
          for_box(s.dim(), box, [&](const Point& x) {
            auto val = valuation(s.vars(), x);
            for (const auto& e : sys)
              if (!oracle::wp_rewrite(o, e.evaluate(val), 0)) return;
            hits.push_back(x);
          });
          check = diff(sorted_points(s, box), hits, box);
        }
        break;
      }
      case Query::Kind::Relative: {
        const auto& e = *p.find_expr(q.names[0]);
        const auto& sub = *p.find_subgroup(q.names[1]);
        const std::size_t lc = p.alphabet_of(e.group).letter_count();
        s = reorder(rel_sol(e.expr, StallingsGraph::build(sub.generators, lc), cfg.relknap), e.expr.variables());
        if (opts.oracle) check = diff(sorted_points(s, box), oracle::brute_relative(e.expr, sub.generators, lc, box), box);
        break;
      }
      case Query::Kind::Parikh: {
        std::filesystem::path path(q.path);
        if (path.is_relative()) path = std::filesystem::path(opts.base_dir) / path;
        std::ifstream in(path);
        if (!in) throw std::runtime_error("line " + std::to_string(q.line) + ": cannot read '" + q.path + "'");
        nlohmann::json j;
        try {
          j = nlohmann::json::parse(in);
        } catch (const nlohmann::json::exception& ex) {
          throw std::runtime_error("line " + std::to_string(q.line) + ": " + q.path + ": " + ex.what());
        }
        Nfa a = Nfa::from_json(j);
        std::vector<std::string> names;
        if (j.contains("alphabet")) names = j.at("alphabet").get<std::vector<std::string>>();
        const SemilinearRep rep = parikh(a, names);
        s = SolutionSet::from_linear(rep);
        if (opts.oracle) {
          // Words up to length box give exactly the vectors of weight ≤ box.
          std::vector<Point> ours;
          for (auto& x : sorted_points(s, box)) {
            std::uint64_t total = 0;
            for (auto v : x) total += v;
            if (total <= box) ours.push_back(std::move(x));
          }
          check = diff(ours, brute_parikh(a, box), box);
          check["scope"] = "vectors of total weight <= box";
        }
        break;
      }
    }

    r["variables"] = s.vars();
    r["status"] = s.is_empty() ? "UNSAT" : "SAT";
    if (auto comps = representation(s); comps.is_string()) {
      r["representation"] = comps;
    } else {
      r["representation"] = "SEMILINEAR";
      r["components"] = comps;
    }
    r["box"] = box;
    r["solutions"] = sorted_points(s, box);
    if (opts.oracle) r["oracle"] = check;
    if (opts.timing)
      r["time_ms"] =
          std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    results.push_back(std::move(r));
  }
  return {{"schema", 1}, {"results", results}};
}

// ---------------------------------------------------------------- text

namespace {

std::string tuple(const nlohmann::json& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + v[i].dump();
  return s + ")";
}

std::string tuples(const nlohmann::json& vs) {
  std::string s;
  for (const auto& v : vs) s += " " + tuple(v);
  return s.empty() ? " none" : s;
}

}  // namespace

std::string render_text(const nlohmann::json& report) {
  std::ostringstream out;
  out << "schema " << report.at("schema").get<int>() << "\n";
  for (const auto& r : report.at("results")) {
    out << "query " << r.at("query").get<std::string>() << " (line " << r.at("line") << ")\n";
    out << "  variables:";
    for (const auto& v : r.at("variables")) out << " " << v.get<std::string>();
    out << "\n  status: " << r.at("status").get<std::string>() << "\n";
    out << "  representation: " << r.at("representation").get<std::string>() << "\n";
    if (r.contains("components")) {
      const auto& rep = r.at("components");
      out << "  components: " << rep.size() << "\n";
      for (const auto& c : rep) out << "    base " << tuple(c.at("base")) << " periods" << tuples(c.at("periods")) << "\n";
    }
    out << "  solutions in box " << r.at("box") << ":" << tuples(r.at("solutions")) << "\n";
    if (r.contains("oracle")) {
      const auto& o = r.at("oracle");
      out << "  oracle box " << o.at("box") << ": " << (o.at("agrees").get<bool>() ? "agrees" : "DIFFERS") << "\n";
      if (!o.at("missing").empty()) out << "    missing:" << tuples(o.at("missing")) << "\n";
      if (!o.at("extra").empty()) out << "    extra:" << tuples(o.at("extra")) << "\n";
    }
    if (r.contains("time_ms")) out << "  time_ms: " << r.at("time_ms").get<double>() << "\n";
  }
  return out.str();
}

}  // namespace expoknap::cli
