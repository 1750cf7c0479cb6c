#ifndef GIBBSLAB_WORDS_HPP
#define GIBBSLAB_WORDS_HPP

#include <cstdint>
#include <initializer_list>
#include <limits>
#include <span>
#include <vector>

#include "gibbslab/profile.hpp"

namespace gibbslab {

using Symbol = std::uint8_t;

// Finite alphabet; symbols are 0..size-1. Size 1 is admitted only so that
// degenerate inputs can be exercised in tests; all dynamics assume size >= 2.
struct Alphabet {
  int size = 2;

  // |A|^n, guarding 64-bit overflow.
  std::uint64_t pow(int n) const;
};

struct MetricParams {
  double theta = 0.5;  // must lie in (0,1)
};

// A finite symbol string. Words are immutable in spirit: estimators treat
// them as read-only spans; the only mutation points are construction helpers.
class Word {
public:
  Word() = default;
  explicit Word(std::vector<Symbol> syms) : syms_(std::move(syms)) {}
  Word(std::initializer_list<int> syms) {
    syms_.reserve(syms.size());
    for (int s : syms) syms_.push_back(static_cast<Symbol>(s));
  }
  static Word zeros(std::size_t n) { return Word(std::vector<Symbol>(n, 0)); }

  std::size_t size() const { return syms_.size(); }
  bool empty() const { return syms_.empty(); }
  Symbol operator[](std::size_t i) const { return syms_[i]; }
  Symbol& operator[](std::size_t i) { return syms_[i]; }
  void push_back(Symbol s) { syms_.push_back(s); }

  std::span<const Symbol> span() const { return syms_; }
  operator std::span<const Symbol>() const { return syms_; }
  const std::vector<Symbol>& symbols() const { return syms_; }

  auto begin() const { return syms_.begin(); }
  auto end() const { return syms_.end(); }
  bool operator==(const Word&) const = default;

private:
  std::vector<Symbol> syms_;
};

// Sentinel for "the words agree on the whole compared range".
inline constexpr std::size_t no_separation = std::numeric_limits<std::size_t>::max();

// Lexicographic index of w in A^n (most significant symbol first) and its
// inverse. Mutually inverse bijections A^n <-> {0,...,|A|^n-1}.
std::uint64_t word_index(const Alphabet& a, std::span<const Symbol> w);
Word index_word(const Alphabet& a, std::uint64_t index, int length);

// Smallest k with x^k != y^k on the common prefix range (the shorter length
// is the comparison horizon); no_separation when equal on that range.
std::size_t separation_index(std::span<const Symbol> x, std::span<const Symbol> y);

// d_theta(x,y) = theta^{separation index}, 0 when the words agree.
double d_theta(std::span<const Symbol> x, std::span<const Symbol> y, MetricParams p);

// d_phi(x,y) = W_p at the separation index; 0 when the words agree.
// The profile must be strictly positive and non-increasing.
double d_phi(std::span<const Symbol> x, std::span<const Symbol> y, const VariationProfile& profile);

// Number of mismatching positions between equal-length words.
int hamming_n(std::span<const Symbol> x, std::span<const Symbol> y);

}  // namespace gibbslab

#endif
