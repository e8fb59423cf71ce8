#include "expoknap/presburger.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <functional>
#include <map>
#include <unordered_map>

namespace expoknap {

namespace {

struct VecHash {
  std::size_t operator()(const std::vector<std::uint32_t>& v) const noexcept {
    std::size_t h = v.size() * 0x9e3779b97f4a7c15ULL;
    for (auto x : v) h ^= x + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
  }
};

unsigned bit_length(std::uint64_t x) { return x == 0 ? 0 : 64 - std::countl_zero(x); }

}  // namespace

// Mutable construction surface shared by the static constructors.
class AutomatonBuilder {
 public:
  explicit AutomatonBuilder(std::size_t dims) { a_.dims_ = dims; a_.next_.clear(); a_.layer_.clear(); a_.accept_.clear(); }

  std::uint32_t add(std::uint32_t layer, bool accept) {
    a_.next_.push_back({0, 0});
    a_.layer_.push_back(layer);
    a_.accept_.push_back(accept ? 1 : 0);
    return static_cast<std::uint32_t>(a_.next_.size() - 1);
  }
  void set(std::uint32_t q, int bit, std::uint32_t to) { a_.next_[q][bit] = to; }
  void set_init(std::uint32_t q) { a_.init_ = q; }
  void set_accept(std::uint32_t q, bool acc) { a_.accept_[q] = acc ? 1 : 0; }

  PresAutomaton finish(bool saturate = false) {
    if (saturate) a_.saturate();
    a_.minimize();
    return std::move(a_);
  }

 private:
  PresAutomaton a_;
};

PresAutomaton PresAutomaton::universal(std::size_t dims) {
  PresAutomaton a;
  a.dims_ = dims;
  a.next_.clear();
  a.layer_.clear();
  a.accept_.clear();
  std::size_t n = std::max<std::size_t>(dims, 1);
  for (std::size_t i = 0; i < n; ++i) {
    auto to = static_cast<std::uint32_t>((i + 1) % n);
    a.next_.push_back({to, to});
    a.layer_.push_back(static_cast<std::uint32_t>(i));
    a.accept_.push_back(i == 0 ? 1 : 0);
  }
  a.init_ = 0;
  return a;
}

PresAutomaton PresAutomaton::empty(std::size_t dims) {
  PresAutomaton a = universal(dims);
  a.accept_[0] = 0;
  return a;
}

namespace {

PresAutomaton build_linear(const std::vector<std::int64_t>& coeffs, std::int64_t bound, bool equality) {
  const std::size_t d = coeffs.size();
  if (d == 0) {
    bool holds = equality ? bound == 0 : bound >= 0;
    return holds ? PresAutomaton::universal(0) : PresAutomaton::empty(0);
  }
  // State (layer, carry, partial dot product of this round); a sink per layer
  // handles parity failures of the equality.
  struct Key {
    std::uint32_t layer;
    std::int64_t carry;
    std::int64_t partial;
    bool sink;
    auto operator<=>(const Key&) const = default;
  };
  AutomatonBuilder b(d);
  std::map<Key, std::uint32_t> ids;
  std::deque<Key> todo;
  auto id_of = [&](const Key& k) {
    auto it = ids.find(k);
    if (it != ids.end()) return it->second;
    bool acc = false;
    if (k.layer == 0 && !k.sink) acc = equality ? k.carry == 0 : k.carry >= 0;
    auto q = b.add(k.layer, acc);
    ids.emplace(k, q);
    todo.push_back(k);
    return q;
  };
  auto floor_div2 = [](std::int64_t x) { return x >= 0 ? x / 2 : -((-x + 1) / 2); };
  b.set_init(id_of(Key{0, bound, 0, false}));
  while (!todo.empty()) {
    Key k = todo.front();
    todo.pop_front();
    std::uint32_t q = ids.at(k);
    for (int bit = 0; bit < 2; ++bit) {
      Key nk;
      if (k.sink) {
        nk = Key{static_cast<std::uint32_t>((k.layer + 1) % d), 0, 0, true};
      } else if (k.layer + 1 < d) {
        nk = Key{k.layer + 1, k.carry, k.partial + (bit ? coeffs[k.layer] : 0), false};
      } else {
        std::int64_t s = k.partial + (bit ? coeffs[k.layer] : 0);
        std::int64_t diff = k.carry - s;
        if (equality) {
          if (diff % 2 != 0)
            nk = Key{0, 0, 0, true};
          else
            nk = Key{0, diff / 2, 0, false};
        } else {
          nk = Key{0, floor_div2(diff), 0, false};
        }
      }
      b.set(q, bit, id_of(nk));
    }
  }
  return b.finish();
}

}  // namespace

PresAutomaton PresAutomaton::linear_le(const std::vector<std::int64_t>& coeffs, std::int64_t bound) {
  return build_linear(coeffs, bound, false);
}

PresAutomaton PresAutomaton::linear_eq(const std::vector<std::int64_t>& coeffs, std::int64_t bound) {
  return build_linear(coeffs, bound, true);
}

PresAutomaton PresAutomaton::linear_set(const LinearSet& ls, std::size_t dims) {
  if (ls.base.size() != dims) throw std::invalid_argument("linear_set: base dimension mismatch");
  std::vector<Vec> periods;
  for (const auto& p : ls.periods) {
    if (p.size() != dims) throw std::invalid_argument("linear_set: period dimension mismatch");
    if (std::any_of(p.begin(), p.end(), [](auto x) { return x != 0; })) periods.push_back(p);
  }
  std::sort(periods.begin(), periods.end());
  periods.erase(std::unique(periods.begin(), periods.end()), periods.end());
  const std::size_t m = periods.size();
  // Variables x_0..x_{d-1}, λ_0..λ_{m-1}: x_i - Σ_j p_j[i] λ_j = b_i.
  PresAutomaton acc = universal(dims + m);
  for (std::size_t i = 0; i < dims; ++i) {
    std::vector<std::int64_t> c(dims + m, 0);
    c[i] = 1;
    for (std::size_t j = 0; j < m; ++j) c[dims + j] = -static_cast<std::int64_t>(periods[j][i]);
    acc = combine(acc, linear_eq(c, static_cast<std::int64_t>(ls.base[i])), BoolOp::And);
  }
  for (std::size_t j = m; j-- > 0;) acc = acc.project(dims + j);
  return acc;
}

std::uint32_t PresAutomaton::run_round(std::uint32_t q, std::uint64_t tuple_bits) const {
  for (std::size_t i = 0; i < dims_; ++i) q = next_[q][(tuple_bits >> i) & 1];
  return q;
}

bool PresAutomaton::accepts(std::span<const std::uint64_t> v) const {
  if (v.size() != dims_) throw std::invalid_argument("accepts: dimension mismatch");
  unsigned rounds = 0;
  for (auto x : v) rounds = std::max(rounds, bit_length(x));
  std::uint32_t q = init_;
  for (unsigned k = 0; k < rounds; ++k)
    for (std::size_t i = 0; i < dims_; ++i) q = next_[q][(v[i] >> k) & 1];
  return accept_[q] != 0;
}

bool PresAutomaton::is_empty() const {
  std::vector<char> seen(next_.size(), 0);
  std::vector<std::uint32_t> stack{init_};
  seen[init_] = 1;
  while (!stack.empty()) {
    auto q = stack.back();
    stack.pop_back();
    if (accept_[q]) return false;
    for (auto to : next_[q])
      if (!seen[to]) {
        seen[to] = 1;
        stack.push_back(to);
      }
  }
  return true;
}

std::vector<char> PresAutomaton::coreachable() const {
  const std::size_t n = next_.size();
  std::vector<std::vector<std::uint32_t>> pred(n);
  for (std::uint32_t q = 0; q < n; ++q)
    for (auto to : next_[q]) pred[to].push_back(q);
  std::vector<char> good(n, 0);
  std::vector<std::uint32_t> stack;
  for (std::uint32_t q = 0; q < n; ++q)
    if (accept_[q]) {
      good[q] = 1;
      stack.push_back(q);
    }
  while (!stack.empty()) {
    auto q = stack.back();
    stack.pop_back();
    for (auto p : pred[q])
      if (!good[p]) {
        good[p] = 1;
        stack.push_back(p);
      }
  }
  return good;
}

bool PresAutomaton::is_finite() const {
  const std::size_t n = next_.size();
  auto good = coreachable();
  std::vector<char> reach(n, 0);
  std::vector<std::uint32_t> stack{init_};
  reach[init_] = 1;
  while (!stack.empty()) {
    auto q = stack.back();
    stack.pop_back();
    for (auto to : next_[q])
      if (!reach[to]) {
        reach[to] = 1;
        stack.push_back(to);
      }
  }
  // Tarjan over useful states, iteratively.
  std::vector<int> index(n, -1), low(n, 0), comp(n, -1);
  std::vector<char> on_stack(n, 0);
  std::vector<std::uint32_t> tstack;
  int counter = 0, comps = 0;
  auto useful = [&](std::uint32_t q) { return reach[q] && good[q]; };
  for (std::uint32_t root = 0; root < n; ++root) {
    if (!useful(root) || index[root] >= 0) continue;
    std::vector<std::pair<std::uint32_t, int>> call{{root, 0}};
    index[root] = low[root] = counter++;
    tstack.push_back(root);
    on_stack[root] = 1;
    while (!call.empty()) {
      auto& [q, e] = call.back();
      if (e < 2) {
        auto to = next_[q][e++];
        if (!useful(to)) continue;
        if (index[to] < 0) {
          index[to] = low[to] = counter++;
          tstack.push_back(to);
          on_stack[to] = 1;
          call.push_back({to, 0});
        } else if (on_stack[to]) {
          low[q] = std::min(low[q], index[to]);
        }
        continue;
      }
      auto done = q;
      call.pop_back();
      if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[done]);
      if (low[done] == index[done]) {
        std::uint32_t w;
        do {
          w = tstack.back();
          tstack.pop_back();
          on_stack[w] = 0;
          comp[w] = comps;
        } while (w != done);
        ++comps;
      }
    }
  }
  for (std::uint32_t q = 0; q < n; ++q) {
    if (!useful(q)) continue;
    auto to = next_[q][1];
    if (useful(to) && comp[to] == comp[q]) return false;
  }
  return true;
}

PresAutomaton PresAutomaton::combine(const PresAutomaton& a, const PresAutomaton& b, BoolOp op) {
  if (a.dims_ != b.dims_) throw std::invalid_argument("combine: dimension mismatch");
  auto eval = [op](bool x, bool y) {
    switch (op) {
      case BoolOp::And: return x && y;
      case BoolOp::Or: return x || y;
      case BoolOp::Diff: return x && !y;
      case BoolOp::Xor: return x != y;
    }
    return false;
  };
  AutomatonBuilder bld(a.dims_);
  std::unordered_map<std::uint64_t, std::uint32_t> ids;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
  auto id_of = [&](std::uint32_t p, std::uint32_t q) {
    std::uint64_t key = (static_cast<std::uint64_t>(p) << 32) | q;
    auto it = ids.find(key);
    if (it != ids.end()) return it->second;
    bool acc = a.layer_[p] == 0 && eval(a.accept_[p], b.accept_[q]);
    auto id = bld.add(a.layer_[p], acc);
    ids.emplace(key, id);
    pairs.emplace_back(p, q);
    return id;
  };
  bld.set_init(id_of(a.init_, b.init_));
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    auto [p, q] = pairs[i];
    for (int bit = 0; bit < 2; ++bit) {
      auto to = id_of(a.next_[p][bit], b.next_[q][bit]);
      bld.set(static_cast<std::uint32_t>(i), bit, to);
    }
  }
  return bld.finish();
}

PresAutomaton PresAutomaton::complement() const {
  PresAutomaton c = *this;
  for (std::size_t q = 0; q < c.next_.size(); ++q)
    if (c.layer_[q] == 0) c.accept_[q] = !c.accept_[q];
  c.minimize();
  return c;
}

PresAutomaton PresAutomaton::project(std::size_t var) const {
  if (var >= dims_) throw std::out_of_range("project: no such coordinate");
  if (dims_ == 1) return is_empty() ? empty(0) : universal(0);
  const std::size_t n = next_.size();
  auto removed = [&](std::uint32_t q) { return layer_[q] == var; };

  // Closure through the removed layer (it has no adjacent removed layers).
  auto close = [&](std::uint32_t q, std::vector<std::uint32_t>& out) {
    if (removed(q)) {
      out.push_back(next_[q][0]);
      out.push_back(next_[q][1]);
    } else {
      out.push_back(q);
    }
  };

  // good[q]: q reaches an accepting state reading 0 on kept layers.
  std::vector<std::vector<std::uint32_t>> pred(n);
  for (std::uint32_t q = 0; q < n; ++q)
    for (int bit = 0; bit < 2; ++bit)
      if (removed(q) || bit == 0) pred[next_[q][bit]].push_back(q);
  std::vector<char> good(n, 0);
  std::vector<std::uint32_t> stack;
  for (std::uint32_t q = 0; q < n; ++q)
    if (accept_[q]) {
      good[q] = 1;
      stack.push_back(q);
    }
  while (!stack.empty()) {
    auto q = stack.back();
    stack.pop_back();
    for (auto p : pred[q])
      if (!good[p]) {
        good[p] = 1;
        stack.push_back(p);
      }
  }

  auto new_layer = [&](std::uint32_t l) { return l > var ? l - 1 : l; };
  AutomatonBuilder bld(dims_ - 1);
  std::unordered_map<std::vector<std::uint32_t>, std::uint32_t, VecHash> ids;
  std::vector<std::vector<std::uint32_t>> subsets;
  auto id_of = [&](std::vector<std::uint32_t> s) {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    auto it = ids.find(s);
    if (it != ids.end()) return it->second;
    auto l = new_layer(layer_[s.front()]);
    bool acc = l == 0 && std::any_of(s.begin(), s.end(), [&](auto q) { return good[q] != 0; });
    auto id = bld.add(l, acc);
    ids.emplace(s, id);
    subsets.push_back(std::move(s));
    return id;
  };
  std::vector<std::uint32_t> start;
  close(init_, start);
  bld.set_init(id_of(start));
  for (std::size_t i = 0; i < subsets.size(); ++i) {
    for (int bit = 0; bit < 2; ++bit) {
      std::vector<std::uint32_t> t;
      for (auto q : subsets[i]) close(next_[q][bit], t);
      auto to = id_of(std::move(t));
      bld.set(static_cast<std::uint32_t>(i), bit, to);
    }
  }
  return bld.finish();
}

PresAutomaton PresAutomaton::insert_var(std::size_t pos) const {
  if (pos > dims_) throw std::out_of_range("insert_var: bad position");
  if (dims_ == 0) return accept_[init_] ? universal(1) : empty(1);
  const std::size_t n = next_.size();
  const std::uint32_t target = pos < dims_ ? static_cast<std::uint32_t>(pos) : 0;
  AutomatonBuilder bld(dims_ + 1);
  // Old states keep their ids; pre-states follow.
  std::vector<std::uint32_t> pre(n, UINT32_MAX);
  for (std::uint32_t q = 0; q < n; ++q) {
    auto l = layer_[q];
    auto nl = l < pos ? l : l + 1;
    bld.add(nl, pos != 0 && accept_[q]);
  }
  for (std::uint32_t q = 0; q < n; ++q)
    if (layer_[q] == target) {
      pre[q] = bld.add(static_cast<std::uint32_t>(pos), pos == 0 && accept_[q]);
      bld.set(pre[q], 0, q);
      bld.set(pre[q], 1, q);
    }
  for (std::uint32_t q = 0; q < n; ++q)
    for (int bit = 0; bit < 2; ++bit) {
      auto to = next_[q][bit];
      bld.set(q, bit, layer_[to] == target ? pre[to] : to);
    }
  bld.set_init(pos == 0 ? pre[init_] : init_);
  return bld.finish();
}

PresAutomaton PresAutomaton::swap_adjacent(std::size_t pos) const {
  if (pos + 1 >= dims_) throw std::out_of_range("swap_adjacent: bad position");
  const std::size_t n = next_.size();
  const auto j = static_cast<std::uint32_t>(pos);
  AutomatonBuilder bld(dims_);
  for (std::uint32_t q = 0; q < n; ++q) bld.add(layer_[q], accept_[q]);
  for (std::uint32_t q = 0; q < n; ++q) {
    if (layer_[q] == j) {
      for (int b1 = 0; b1 < 2; ++b1) {
        auto m = bld.add(j + 1, false);
        bld.set(q, b1, m);
        for (int b0 = 0; b0 < 2; ++b0) bld.set(m, b0, next_[next_[q][b0]][b1]);
      }
    } else {
      // Edges out of old layer j+1 states are dead after the rewrite.
      bld.set(q, 0, next_[q][0]);
      bld.set(q, 1, next_[q][1]);
    }
  }
  bld.set_init(init_);
  return bld.finish();
}

PresAutomaton PresAutomaton::permute(const std::vector<std::size_t>& order) const {
  if (order.size() != dims_) throw std::invalid_argument("permute: size mismatch");
  std::vector<std::size_t> cur(dims_);
  for (std::size_t i = 0; i < dims_; ++i) cur[i] = i;
  PresAutomaton a = *this;
  for (std::size_t i = 0; i < dims_; ++i) {
    auto it = std::find(cur.begin() + static_cast<std::ptrdiff_t>(i), cur.end(), order[i]);
    if (it == cur.end()) throw std::invalid_argument("permute: not a permutation");
    for (auto p = static_cast<std::size_t>(it - cur.begin()); p > i; --p) {
      a = a.swap_adjacent(p - 1);
      std::swap(cur[p - 1], cur[p]);
    }
  }
  return a;
}

bool PresAutomaton::equivalent(const PresAutomaton& a, const PresAutomaton& b) {
  return combine(a, b, BoolOp::Xor).is_empty();
}

std::vector<Vec> PresAutomaton::enumerate(std::uint64_t box) const {
  std::vector<Vec> out;
  if (dims_ == 0) {
    if (accept_[init_]) out.push_back({});
    return out;
  }
  const auto good = coreachable();
  const unsigned max_rounds = bit_length(box);
  Vec val(dims_, 0);
  if (accept_[init_]) out.push_back(val);
  std::function<void(std::uint32_t, std::size_t, unsigned, bool)> walk = [&](std::uint32_t q, std::size_t l,
                                                                             unsigned k, bool any1) {
    if (l == dims_) {
      if (any1 && accept_[q]) out.push_back(val);
      if (k + 1 < max_rounds) walk(q, 0, k + 1, false);
      return;
    }
    for (int bit = 0; bit < 2; ++bit) {
      auto to = next_[q][bit];
      if (!good[to]) continue;
      if (bit) {
        std::uint64_t add = std::uint64_t{1} << k;
        if (val[l] + add > box) continue;
        val[l] += add;
        walk(to, l + 1, k, true);
        val[l] -= add;
      } else {
        walk(to, l + 1, k, any1);
      }
    }
  };
  if (max_rounds > 0 && good[init_]) walk(init_, 0, 0, false);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Vec> PresAutomaton::finite_members() const {
  if (!is_finite()) throw std::logic_error("finite_members: set is infinite");
  // Without useful cycles the last 1-bit of an accepted encoding occurs
  // before any boundary state repeats.
  std::size_t rounds = 1;
  for (auto l : layer_) rounds += l == 0;
  if (rounds > 63) rounds = 63;
  auto all = enumerate((std::uint64_t{1} << rounds) - 1);
  return all;
}

void PresAutomaton::saturate() {
  // Acceptance becomes: some zero-extension reaches an accepting state.
  const std::size_t n = next_.size();
  std::vector<std::vector<std::uint32_t>> pred(n);
  for (std::uint32_t q = 0; q < n; ++q) pred[next_[q][0]].push_back(q);
  std::vector<char> good(n, 0);
  std::vector<std::uint32_t> stack;
  for (std::uint32_t q = 0; q < n; ++q)
    if (accept_[q] && layer_[q] == 0) {
      good[q] = 1;
      stack.push_back(q);
    }
  while (!stack.empty()) {
    auto q = stack.back();
    stack.pop_back();
    for (auto p : pred[q])
      if (!good[p]) {
        good[p] = 1;
        stack.push_back(p);
      }
  }
  for (std::uint32_t q = 0; q < n; ++q) accept_[q] = layer_[q] == 0 && good[q];
}

void PresAutomaton::minimize() {
  // Restrict to reachable states.
  {
    const std::size_t n = next_.size();
    std::vector<std::uint32_t> id(n, UINT32_MAX), order;
    id[init_] = 0;
    order.push_back(init_);
    for (std::size_t i = 0; i < order.size(); ++i)
      for (auto to : next_[order[i]])
        if (id[to] == UINT32_MAX) {
          id[to] = static_cast<std::uint32_t>(order.size());
          order.push_back(to);
        }
    decltype(next_) nx(order.size());
    std::vector<std::uint32_t> ly(order.size());
    std::vector<char> ac(order.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
      nx[i] = {id[next_[order[i]][0]], id[next_[order[i]][1]]};
      ly[i] = layer_[order[i]];
      ac[i] = accept_[order[i]];
    }
    next_ = std::move(nx);
    layer_ = std::move(ly);
    accept_ = std::move(ac);
    init_ = 0;
  }
  const auto n = static_cast<std::uint32_t>(next_.size());

  // Inverse transitions in CSR form.
  std::array<std::vector<std::uint32_t>, 2> inv_start, inv;
  for (int a = 0; a < 2; ++a) {
    inv_start[a].assign(n + 1, 0);
    for (std::uint32_t q = 0; q < n; ++q) ++inv_start[a][next_[q][a] + 1];
    for (std::uint32_t q = 0; q < n; ++q) inv_start[a][q + 1] += inv_start[a][q];
    inv[a].assign(n, 0);
    auto fill = inv_start[a];
    for (std::uint32_t q = 0; q < n; ++q) inv[a][fill[next_[q][a]]++] = q;
  }

  std::vector<std::uint32_t> elems(n), loc(n), blk(n);
  std::vector<std::uint32_t> bstart, bend, marked;
  {
    std::map<std::pair<std::uint32_t, char>, std::vector<std::uint32_t>> groups;
    for (std::uint32_t q = 0; q < n; ++q) groups[{layer_[q], accept_[q]}].push_back(q);
    std::uint32_t pos = 0;
    for (auto& [key, members] : groups) {
      auto b = static_cast<std::uint32_t>(bstart.size());
      bstart.push_back(pos);
      for (auto q : members) {
        elems[pos] = q;
        loc[q] = pos;
        blk[q] = b;
        ++pos;
      }
      bend.push_back(pos);
      marked.push_back(0);
    }
  }
  std::vector<std::pair<std::uint32_t, int>> work;
  std::vector<std::array<char, 2>> in_work(bstart.size(), {1, 1});
  for (std::uint32_t b = 0; b < bstart.size(); ++b) {
    work.emplace_back(b, 0);
    work.emplace_back(b, 1);
  }
  std::vector<std::uint32_t> splitter, touched;
  while (!work.empty()) {
    auto [B, a] = work.back();
    work.pop_back();
    in_work[B][a] = 0;
    splitter.assign(elems.begin() + bstart[B], elems.begin() + bend[B]);
    touched.clear();
    for (auto q : splitter) {
      for (auto k = inv_start[a][q]; k < inv_start[a][q + 1]; ++k) {
        auto p = inv[a][k];
        auto C = blk[p];
        auto slot = bstart[C] + marked[C];
        if (loc[p] < slot) continue;
        auto other = elems[slot];
        std::swap(elems[slot], elems[loc[p]]);
        loc[other] = loc[p];
        loc[p] = slot;
        if (marked[C]++ == 0) touched.push_back(C);
      }
    }
    for (auto C : touched) {
      auto m = marked[C];
      marked[C] = 0;
      if (m == bend[C] - bstart[C]) continue;
      auto D = static_cast<std::uint32_t>(bstart.size());
      bstart.push_back(bstart[C]);
      bend.push_back(bstart[C] + m);
      marked.push_back(0);
      in_work.push_back({0, 0});
      bstart[C] += m;
      for (auto i = bstart[D]; i < bend[D]; ++i) blk[elems[i]] = D;
      for (int x = 0; x < 2; ++x) {
        if (in_work[C][x]) {
          work.emplace_back(D, x);
          in_work[D][x] = 1;
        } else {
          auto smaller = (bend[D] - bstart[D]) <= (bend[C] - bstart[C]) ? D : C;
          work.emplace_back(smaller, x);
          in_work[smaller][x] = 1;
        }
      }
    }
  }

  // Quotient, renumbered in BFS order from the initial block.
  const auto nb = static_cast<std::uint32_t>(bstart.size());
  std::vector<std::uint32_t> id(nb, UINT32_MAX), order;
  id[blk[init_]] = 0;
  order.push_back(blk[init_]);
  for (std::size_t i = 0; i < order.size(); ++i) {
    auto rep = elems[bstart[order[i]]];
    for (auto to : next_[rep]) {
      auto tb = blk[to];
      if (id[tb] == UINT32_MAX) {
        id[tb] = static_cast<std::uint32_t>(order.size());
        order.push_back(tb);
      }
    }
  }
  decltype(next_) nx(order.size());
  std::vector<std::uint32_t> ly(order.size());
  std::vector<char> ac(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    auto rep = elems[bstart[order[i]]];
    nx[i] = {id[blk[next_[rep][0]]], id[blk[next_[rep][1]]]};
    ly[i] = layer_[rep];
    ac[i] = accept_[rep];
  }
  next_ = std::move(nx);
  layer_ = std::move(ly);
  accept_ = std::move(ac);
  init_ = 0;
}

nlohmann::json PresAutomaton::to_json() const {
  if (dims_ > 16) throw std::invalid_argument("to_json: too many coordinates for a tuple table");
  const std::uint64_t letters = std::uint64_t{1} << dims_;
  std::vector<std::string> names;
  for (std::uint64_t t = 0; t < letters; ++t) {
    std::string s;
    for (std::size_t i = 0; i < dims_; ++i) s.push_back(((t >> i) & 1) ? '1' : '0');
    names.push_back(s);
  }
  std::map<std::uint32_t, std::uint32_t> id;
  std::vector<std::uint32_t> order{init_};
  id[init_] = 0;
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < order.size(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (std::uint64_t t = 0; t < letters; ++t) {
      auto to = run_round(order[i], t);
      auto [it, fresh] = id.emplace(to, static_cast<std::uint32_t>(order.size()));
      if (fresh) order.push_back(to);
      row.push_back(it->second);
    }
    rows.push_back(row);
  }
  nlohmann::json acc = nlohmann::json::array();
  for (auto q : order) acc.push_back(accept_[q] != 0);
  return {{"dims", dims_}, {"initial", 0}, {"letters", names}, {"accepting", acc}, {"transitions", rows}};
}

PresAutomaton PresAutomaton::from_json(const nlohmann::json& j) {
  const std::size_t d = j.at("dims").get<std::size_t>();
  if (d > 16) throw std::invalid_argument("from_json: too many coordinates");
  const auto& acc = j.at("accepting");
  const auto& rows = j.at("transitions");
  const std::size_t n = acc.size();
  if (rows.size() != n || n == 0) throw std::invalid_argument("from_json: malformed table");
  const std::uint64_t letters = std::uint64_t{1} << d;
  if (d == 0) return acc.at(j.at("initial").get<std::size_t>()).get<bool>() ? universal(0) : empty(0);
  AutomatonBuilder bld(d);
  // Round states first (ids 0..n-1), then a binary trie per round state.
  for (std::size_t q = 0; q < n; ++q) bld.add(0, acc[q].get<bool>());
  for (std::size_t q = 0; q < n; ++q) {
    if (rows[q].size() != letters) throw std::invalid_argument("from_json: row width mismatch");
    std::function<void(std::uint32_t, std::size_t, std::uint64_t)> grow = [&](std::uint32_t node, std::size_t l,
                                                                            std::uint64_t prefix) {
      for (int bit = 0; bit < 2; ++bit) {
        std::uint64_t p = prefix | (static_cast<std::uint64_t>(bit) << l);
        if (l + 1 == d) {
          auto to = rows[q][p].get<std::size_t>();
          if (to >= n) throw std::invalid_argument("from_json: target out of range");
          bld.set(node, bit, static_cast<std::uint32_t>(to));
        } else {
          auto child = bld.add(static_cast<std::uint32_t>(l + 1), false);
          bld.set(node, bit, child);
          grow(child, l + 1, p);
        }
      }
    };
    grow(static_cast<std::uint32_t>(q), 0, 0);
  }
  bld.set_init(static_cast<std::uint32_t>(j.at("initial").get<std::size_t>()));
  return bld.finish(true);
}

}  // namespace expoknap
