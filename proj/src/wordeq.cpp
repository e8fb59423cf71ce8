#include "expoknap/wordeq.hpp"

#include <numeric>

namespace expoknap {

namespace {

// Letter i of a q^n b without building it.
struct PowerWord {
  const Word& a;
  const Word& q;
  std::uint64_t n;
  const Word& b;

  std::uint64_t size() const { return a.size() + n * q.size() + b.size(); }
  Letter at(std::uint64_t i) const {
    if (i < a.size()) return a[i];
    i -= a.size();
    if (i < n * q.size()) return q[i % q.size()];
    return b[i - n * q.size()];
  }
};

bool equal(const PowerWord& l, const PowerWord& r) {
  if (l.size() != r.size()) return false;
  for (std::uint64_t i = 0; i < l.size(); ++i)
    if (l.at(i) != r.at(i)) return false;
  return true;
}

}  // namespace

SolutionSet two_power_eq(const Word& p, const Word& q, const Word& r, const Word& s, const Word& u, const Word& v,
                         const std::string& xn, const std::string& yn) {
  const std::vector<std::string> vars{xn, yn};
  SemilinearRep rep{vars, {}};
  auto holds = [&](std::uint64_t x, std::uint64_t y) { return equal({p, q, x, r}, {s, u, y, v}); };
  const std::uint64_t Q = q.size(), U = u.size();
  const auto P = static_cast<std::int64_t>(p.size() + r.size());
  const auto S = static_cast<std::int64_t>(s.size() + v.size());

  if (Q == 0 && U == 0) {
    if (holds(0, 0)) rep.components.push_back({{0, 0}, {{1, 0}, {0, 1}}});
    return SolutionSet::from_linear(rep);
  }
  if (Q == 0 || U == 0) {
    // The side without a power has fixed length, which pins the other exponent.
    const bool left_fixed = Q == 0;
    const std::int64_t fixed_len = left_fixed ? P : S;
    const std::int64_t other_len = left_fixed ? S : P;
    const auto step = static_cast<std::int64_t>(left_fixed ? U : Q);
    const std::int64_t diff = fixed_len - other_len;
    if (diff >= 0 && diff % step == 0) {
      auto e = static_cast<std::uint64_t>(diff / step);
      if (left_fixed ? holds(0, e) : holds(e, 0)) {
        if (left_fixed)
          rep.components.push_back({{0, e}, {{1, 0}}});
        else
          rep.components.push_back({{e, 0}, {{0, 1}}});
      }
    }
    return SolutionSet::from_linear(rep);
  }

  // x·Q - y·U = C.
  const std::int64_t C = S - P;
  const std::uint64_t g = std::gcd(Q, U);
  if (((C % static_cast<std::int64_t>(g)) + static_cast<std::int64_t>(g)) % static_cast<std::int64_t>(g) != 0)
    return SolutionSet::from_linear(rep);
  const std::uint64_t dx = U / g, dy = Q / g;
  std::uint64_t x0 = 0;
  while ((static_cast<std::int64_t>(x0 * Q) - C) % static_cast<std::int64_t>(U) != 0) ++x0;
  while (static_cast<std::int64_t>(x0 * Q) < C) x0 += dx;
  const std::uint64_t y0 = static_cast<std::uint64_t>((static_cast<std::int64_t>(x0 * Q) - C)) / U;

  std::uint64_t cutoff = p.size() + r.size() + s.size() + v.size() + 2 * std::lcm(Q, U) + dx;
  for (int attempt = 0; attempt < 8; ++attempt, cutoff *= 2) {
    // First line index at or past the cutoff.
    std::uint64_t kt = x0 >= cutoff ? 0 : (cutoff - x0 + dx - 1) / dx;
    bool a = holds(x0 + kt * dx, y0 + kt * dy);
    bool b = holds(x0 + (kt + 1) * dx, y0 + (kt + 1) * dy);
    bool c = holds(x0 + (kt + 2) * dx, y0 + (kt + 2) * dy);
    if (a != b || b != c) continue;
    for (std::uint64_t k = 0; k < kt; ++k)
      if (holds(x0 + k * dx, y0 + k * dy)) rep.components.push_back({{x0 + k * dx, y0 + k * dy}, {}});
    if (a) rep.components.push_back({{x0 + kt * dx, y0 + kt * dy}, {{dx, dy}}});
    return SolutionSet::from_linear(rep);
  }
  throw std::logic_error("two_power_eq: no periodic tail found");
}

}  // namespace expoknap
