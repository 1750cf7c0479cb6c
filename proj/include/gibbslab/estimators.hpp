#ifndef GIBBSLAB_ESTIMATORS_HPP
#define GIBBSLAB_ESTIMATORS_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gibbslab/markov.hpp"
#include "gibbslab/transfer.hpp"
#include "gibbslab/words.hpp"

namespace gibbslab {

// A d_theta-Lipschitz observable depending on the first `depth` symbols,
// tabulated on A^depth. The recorded Lipschitz constant is
// max_n var_n(f)/theta^n over adjacent-cylinder scales.
class ObservableSpec {
public:
  ObservableSpec(Alphabet a, int depth, std::vector<double> table, double theta = 0.5);

  // indicator of the cylinder [w]
  static ObservableSpec indicator(Alphabet a, const Word& w, double theta = 0.5);
  // depth-d tabulation of an arbitrary potential-like function
  static ObservableSpec from_potential(const Potential& phi, int depth);

  const Alphabet& alphabet() const { return alphabet_; }
  int depth() const { return depth_; }
  double theta() const { return theta_; }
  double lip_theta() const { return lip_theta_; }
  const std::vector<double>& table() const { return table_; }

  double operator()(std::span<const Symbol> window) const;  // first depth symbols
  // subtract c from every table entry
  ObservableSpec centered(double c) const;

  // Lip_phi(f) = max_n var_n(f)/W_n for a given Walters profile.
  double lip_phi(const VariationProfile& profile) const;

  // Sliding-window evaluation over a path: values[j] = f(x^{j..j+depth-1}).
  void sliding_values(std::span<const Symbol> path, std::vector<double>& out) const;

private:
  Alphabet alphabet_;
  int depth_;
  double theta_;
  std::vector<double> table_;
  std::vector<double> var_;  // var_n(f), n = 0..depth-1
  double lip_theta_;
};

// sum_{j=0}^{n-1} f(x^{j..j+d-1}); requires n + d <= length(x) + 1 windows,
// enforced as n + d <= length per the conservative contract.
double birkhoff_sum(const ObservableSpec& f, std::span<const Symbol> x, std::size_t n);

// Occurrences of w at positions 0..n-|w| divided by n-|w|+1.
double block_frequency(std::span<const Symbol> x, std::span<const Symbol> w, std::size_t n);

// max over w in A^k of |empirical frequency - mu_k[w]|.
double max_block_deviation(std::span<const Symbol> x, const SpectralData& s, int k, std::size_t n);

inline constexpr std::uint64_t default_hitting_cap = 1000000000ULL;

// First j >= 1 with y^{j..j+|w|-1} = w along a lazily sampled y; nullopt when
// the cap is exceeded (a value, not an error).
std::optional<std::uint64_t> hitting_time(std::span<const Symbol> w, const MarkovModel& model,
                                          std::uint64_t seed, std::uint64_t cap = default_hitting_cap);

struct EntropyEstimate {
  double point = 0.0;    // median of (1/n) log T
  double spread = 0.0;   // interquartile range
  std::size_t trials = 0;
  std::size_t censored = 0;  // trials that hit the cap
};

// Hitting-time entropy estimator over independent (x,y) pairs drawn from the
// model. Throws estimation_failure when every trial was censored.
EntropyEstimate entropy_from_hitting(const MarkovModel& model, int n, int trials,
                                     std::uint64_t seed, std::uint64_t cap = default_hitting_cap);

// Exact shadowing score for a cylinder set [a]: the best tracking orbit copies
// x beyond the cylinder, so S = (1/n) sum_{j<min(n,k)} theta^{delta_j} with
// delta_j the first in-cylinder disagreement offset and theta^infinity = 0.
double shadowing_score(std::span<const Symbol> x, std::span<const Symbol> cylinder, std::size_t n,
                       double theta);

// Normalized m-block occurrence counts along the first n symbols.
std::vector<double> empirical_block_measure(Alphabet a, std::span<const Symbol> x, int m,
                                            std::size_t n);

struct SigmaSquared {
  double value = 0.0;
  double last_term = 0.0;   // magnitude of the final correlation term
  bool truncation_warning = false;
  int terms = 0;
};

// Green-Kubo asymptotic variance sigma^2(f) = int f_c^2 dmu +
// 2 sum_{i>=1} int (P~^i f_c) f_c dmu, truncated at i_max. f is centered
// internally against mu.
SigmaSquared sigma_squared(const ObservableSpec& f, const SpectralData& s, const GFunction& g,
                           int i_max = 64, double tol = 1e-12);

// Weighted atoms of the log-averaged empirical law of S_n f / sqrt(n).
class ASCLTState {
public:
  void update(double birkhoff_n);  // append the atom for n = count()+1
  std::size_t count() const { return atoms_.size(); }
  double l_n() const { return l_n_; }
  const std::vector<double>& atoms() const { return atoms_; }
  std::vector<double> weights() const;  // 1/(n L_N), sums to 1

private:
  std::vector<double> atoms_;
  double l_n_ = 0.0;
};

// Accumulate all atoms for n = 1..N along a path.
ASCLTState asclt_accumulate(const ObservableSpec& f, std::span<const Symbol> x, std::size_t N);

}  // namespace gibbslab

#endif
