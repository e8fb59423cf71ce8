#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace expoknap {

/// A letter of Σ = Ω ∪ Ω⁻¹, stored as 2·generator + inverse-bit.
///
/// The code doubles as the Parikh coordinate: the fixed enumeration of Σ is
/// (g0, g0⁻¹, g1, g1⁻¹, ...).
struct Letter {
  std::uint32_t code = 0;

  static constexpr Letter make(std::uint32_t generator, bool inverted) {
    return Letter{generator * 2 + (inverted ? 1u : 0u)};
  }
  constexpr std::uint32_t generator() const { return code >> 1; }
  constexpr bool inverted() const { return (code & 1u) != 0; }
  constexpr Letter inverse() const { return Letter{code ^ 1u}; }

  friend constexpr bool operator==(Letter, Letter) = default;
  friend constexpr auto operator<=>(Letter, Letter) = default;
};

using Word = std::vector<Letter>;

enum class InverseStyle { Caret, Uppercase };

/// Ordered generator list Ω with implied formal inverses. Generators may be
/// flagged as stable letters of an HNN-extension.
class Alphabet {
 public:
  Alphabet() = default;
  explicit Alphabet(std::vector<std::string> generators);

  std::uint32_t add_generator(std::string name, bool stable = false);

  std::size_t generator_count() const { return names_.size(); }
  /// Number of letters |Σ| = 2|Ω|; also the Parikh dimension.
  std::size_t letter_count() const { return 2 * names_.size(); }

  const std::string& generator_name(std::uint32_t g) const { return names_.at(g); }
  bool is_stable(std::uint32_t g) const { return stable_.at(g); }
  bool is_stable(Letter a) const { return stable_.at(a.generator()); }

  /// Generator index by name, or -1.
  int find(std::string_view name) const;

  std::string letter_name(Letter a, InverseStyle style = InverseStyle::Caret) const;

  /// Parses space-separated tokens. `a^-1` always denotes an inverse; with
  /// InverseStyle::Uppercase an uppercase token `A` is the inverse of `a`
  /// when `A` itself is not a generator. `1` is the empty word.
  Word parse(std::string_view text, InverseStyle style = InverseStyle::Caret) const;
  std::string format(const Word& w, InverseStyle style = InverseStyle::Caret) const;

  /// Letters belonging to generators with the given stable flag.
  std::vector<bool> letters_where_stable(bool stable) const;

  friend bool operator==(const Alphabet&, const Alphabet&) = default;

 private:
  std::vector<std::string> names_;
  std::vector<bool> stable_;
};

Word invert(const Word& w);
Word free_reduce(const Word& w);
bool is_freely_reduced(const Word& w);
bool is_cyclically_reduced(const Word& w);

/// Concatenation helpers.
Word concat(const Word& u, const Word& v);
Word concat(std::initializer_list<Word> parts);
Word power(const Word& w, std::uint64_t n);

/// Deletes letters outside `keep` (indexed by letter code), preserving order.
Word project(const Word& w, const std::vector<bool>& keep);

/// red(u) = red(s c s⁻¹) with c cyclically reduced.
struct CyclicDecomposition {
  Word conjugator;  // s
  Word core;        // c
};
CyclicDecomposition cyclic_decompose(const Word& u);

/// Smallest r with c = r^k (c is expected cyclically reduced and nonempty).
Word primitive_root(const Word& c);

std::vector<std::uint64_t> parikh_vector(const Word& w, std::size_t letter_count);

/// e = v0 u1^x1 v1 ... uk^xk vk. Variables may repeat only in exponent
/// expressions; knapsack expressions have pairwise distinct variables.
struct KnapsackExpr {
  struct Power {
    Word base;
    std::string var;
  };
  std::vector<Word> constants{Word{}};  // k+1 entries
  std::vector<Power> powers;           // k entries

  /// Distinct variables in order of first occurrence.
  std::vector<std::string> variables() const;
  bool has_repeated_variables() const;
  /// σ(e) as an unreduced word.
  Word evaluate(const std::map<std::string, std::uint64_t>& sigma) const;
  std::string format(const Alphabet& al) const;
  /// Throws std::invalid_argument if the constant/power counts disagree.
  void validate() const;
};

}  // namespace expoknap
