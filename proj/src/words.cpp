#include "gibbslab/words.hpp"

#include <stdexcept>
#include <string>

#include "gibbslab/errors.hpp"

namespace gibbslab {

std::uint64_t Alphabet::pow(int n) const {
  if (size < 1) throw std::domain_error("alphabet size must be >= 1");
  if (n < 0) throw std::domain_error("negative word length");
  std::uint64_t r = 1;
  const std::uint64_t base = static_cast<std::uint64_t>(size);
  for (int i = 0; i < n; ++i) {
    if (r > (std::numeric_limits<std::uint64_t>::max() >> 1) / base)
      throw resource_error("|A|^n exceeds 64-bit index range", 0);
    r *= base;
  }
  return r;
}

std::uint64_t word_index(const Alphabet& a, std::span<const Symbol> w) {
  std::uint64_t idx = 0;
  const std::uint64_t base = static_cast<std::uint64_t>(a.size);
  for (Symbol s : w) {
    if (s >= a.size) throw std::domain_error("symbol " + std::to_string(int(s)) + " out of alphabet range");
    idx = idx * base + s;
  }
  return idx;
}

Word index_word(const Alphabet& a, std::uint64_t index, int length) {
  if (index >= a.pow(length)) throw std::domain_error("word index out of range");
  std::vector<Symbol> syms(static_cast<std::size_t>(length));
  const std::uint64_t base = static_cast<std::uint64_t>(a.size);
  for (int i = length - 1; i >= 0; --i) {
    syms[static_cast<std::size_t>(i)] = static_cast<Symbol>(index % base);
    index /= base;
  }
  return Word(std::move(syms));
}

std::size_t separation_index(std::span<const Symbol> x, std::span<const Symbol> y) {
  const std::size_t n = std::min(x.size(), y.size());
  for (std::size_t k = 0; k < n; ++k)
    if (x[k] != y[k]) return k;
  return no_separation;
}

double d_theta(std::span<const Symbol> x, std::span<const Symbol> y, MetricParams p) {
  if (!(p.theta > 0.0 && p.theta < 1.0)) throw std::domain_error("theta must lie in (0,1)");
  const std::size_t k = separation_index(x, y);
  if (k == no_separation) return 0.0;
  double d = 1.0;
  for (std::size_t i = 0; i < k; ++i) d *= p.theta;
  return d;
}

double d_phi(std::span<const Symbol> x, std::span<const Symbol> y, const VariationProfile& profile) {
  profile.validate();
  const std::size_t k = separation_index(x, y);
  if (k == no_separation) return 0.0;
  return profile.W_at(k);
}

int hamming_n(std::span<const Symbol> x, std::span<const Symbol> y) {
  if (x.size() != y.size()) throw std::domain_error("hamming distance needs equal lengths");
  int d = 0;
  for (std::size_t i = 0; i < x.size(); ++i) d += (x[i] != y[i]);
  return d;
}

void VariationProfile::validate() const {
  if (W.empty()) throw config_error("empty Walters profile");
  for (std::size_t p = 0; p < W.size(); ++p) {
    if (!(W[p] > 0.0)) throw config_error("Walters profile must be strictly positive");
    if (p > 0 && W[p] > W[p - 1] * (1.0 + 1e-12))
      throw config_error("Walters profile must be non-increasing");
  }
}

}  // namespace gibbslab
