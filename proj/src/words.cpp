#include "expoknap/words.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <stdexcept>

namespace expoknap {

Alphabet::Alphabet(std::vector<std::string> generators) {
  for (auto& g : generators) add_generator(std::move(g));
}

std::uint32_t Alphabet::add_generator(std::string name, bool stable) {
  if (name.empty() || name == "1")
    throw std::invalid_argument("invalid generator name '" + name + "'");
  if (find(name) >= 0) throw std::invalid_argument("duplicate generator '" + name + "'");
  names_.push_back(std::move(name));
  stable_.push_back(stable);
  return static_cast<std::uint32_t>(names_.size() - 1);
}

int Alphabet::find(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return static_cast<int>(i);
  return -1;
}

std::string Alphabet::letter_name(Letter a, InverseStyle style) const {
  const std::string& base = names_.at(a.generator());
  if (!a.inverted()) return base;
  if (style == InverseStyle::Uppercase && base.size() == 1 &&
      std::islower(static_cast<unsigned char>(base[0]))) {
    std::string up(1, static_cast<char>(std::toupper(static_cast<unsigned char>(base[0]))));
    if (find(up) < 0) return up;
  }
  return base + "^-1";
}

Word Alphabet::parse(std::string_view text, InverseStyle style) const {
  Word out;
  std::istringstream in{std::string(text)};
  std::string tok;
  while (in >> tok) {
    if (tok == "1") continue;
    bool inv = false;
    std::string name = tok;
    if (name.size() > 3 && name.ends_with("^-1")) {
      inv = true;
      name.resize(name.size() - 3);
    }
    int g = find(name);
    if (g < 0 && !inv && style == InverseStyle::Uppercase && name.size() == 1 &&
        std::isupper(static_cast<unsigned char>(name[0]))) {
      std::string low(1, static_cast<char>(std::tolower(static_cast<unsigned char>(name[0]))));
      g = find(low);
      inv = true;
    }
    if (g < 0) throw std::invalid_argument("unknown letter '" + tok + "'");
    out.push_back(Letter::make(static_cast<std::uint32_t>(g), inv));
  }
  return out;
}

std::string Alphabet::format(const Word& w, InverseStyle style) const {
  if (w.empty()) return "1";
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) out += ' ';
    out += letter_name(w[i], style);
  }
  return out;
}

std::vector<bool> Alphabet::letters_where_stable(bool stable) const {
  std::vector<bool> keep(letter_count(), false);
  for (std::size_t g = 0; g < names_.size(); ++g)
    if (stable_[g] == stable) keep[2 * g] = keep[2 * g + 1] = true;
  return keep;
}

Word invert(const Word& w) {
  Word out(w.rbegin(), w.rend());
  for (auto& a : out) a = a.inverse();
  return out;
}

Word free_reduce(const Word& w) {
  Word out;
  out.reserve(w.size());
  for (Letter a : w) {
    if (!out.empty() && out.back() == a.inverse())
      out.pop_back();
    else
      out.push_back(a);
  }
  return out;
}

bool is_freely_reduced(const Word& w) {
  for (std::size_t i = 1; i < w.size(); ++i)
    if (w[i] == w[i - 1].inverse()) return false;
  return true;
}

bool is_cyclically_reduced(const Word& w) {
  if (!is_freely_reduced(w)) return false;
  return w.size() < 2 || w.front() != w.back().inverse();
}

Word concat(const Word& u, const Word& v) {
  Word out;
  out.reserve(u.size() + v.size());
  out.insert(out.end(), u.begin(), u.end());
  out.insert(out.end(), v.begin(), v.end());
  return out;
}

Word concat(std::initializer_list<Word> parts) {
  Word out;
  for (const Word& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

Word power(const Word& w, std::uint64_t n) {
  Word out;
  out.reserve(w.size() * n);
  for (std::uint64_t i = 0; i < n; ++i) out.insert(out.end(), w.begin(), w.end());
  return out;
}

Word project(const Word& w, const std::vector<bool>& keep) {
  Word out;
  for (Letter a : w)
    if (a.code < keep.size() && keep[a.code]) out.push_back(a);
  return out;
}

CyclicDecomposition cyclic_decompose(const Word& u) {
  Word r = free_reduce(u);
  std::size_t lo = 0, hi = r.size();
  while (hi - lo >= 2 && r[lo] == r[hi - 1].inverse()) {
    ++lo;
    --hi;
  }
  return {Word(r.begin(), r.begin() + static_cast<std::ptrdiff_t>(lo)),
          Word(r.begin() + static_cast<std::ptrdiff_t>(lo), r.begin() + static_cast<std::ptrdiff_t>(hi))};
}

Word primitive_root(const Word& c) {
  const std::size_t n = c.size();
  for (std::size_t period = 1; period < n; ++period) {
    if (n % period) continue;
    bool ok = true;
    for (std::size_t i = period; i < n && ok; ++i) ok = c[i] == c[i - period];
    if (ok) return Word(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(period));
  }
  return c;
}

std::vector<std::uint64_t> parikh_vector(const Word& w, std::size_t letter_count) {
  std::vector<std::uint64_t> v(letter_count, 0);
  for (Letter a : w) ++v.at(a.code);
  return v;
}

}  // namespace expoknap

namespace expoknap {

std::vector<std::string> KnapsackExpr::variables() const {
  std::vector<std::string> out;
  for (const auto& p : powers)
    if (std::find(out.begin(), out.end(), p.var) == out.end()) out.push_back(p.var);
  return out;
}

bool KnapsackExpr::has_repeated_variables() const { return variables().size() != powers.size(); }

Word KnapsackExpr::evaluate(const std::map<std::string, std::uint64_t>& sigma) const {
  validate();
  Word w = constants[0];
  for (std::size_t i = 0; i < powers.size(); ++i) {
    auto it = sigma.find(powers[i].var);
    if (it == sigma.end()) throw std::invalid_argument("evaluate: no value for '" + powers[i].var + "'");
    for (std::uint64_t k = 0; k < it->second; ++k) w.insert(w.end(), powers[i].base.begin(), powers[i].base.end());
    w.insert(w.end(), constants[i + 1].begin(), constants[i + 1].end());
  }
  return w;
}

std::string KnapsackExpr::format(const Alphabet& al) const {
  validate();
  std::string out;
  auto put = [&](const std::string& s) {
    if (!out.empty()) out += ' ';
    out += s;
  };
  if (!constants[0].empty()) put(al.format(constants[0]));
  for (std::size_t i = 0; i < powers.size(); ++i) {
    put("(" + al.format(powers[i].base) + ")^" + powers[i].var);
    if (!constants[i + 1].empty()) put(al.format(constants[i + 1]));
  }
  return out.empty() ? "1" : out;
}

void KnapsackExpr::validate() const {
  if (constants.size() != powers.size() + 1)
    throw std::invalid_argument("knapsack expression needs one more constant than powers");
}

}  // namespace expoknap
