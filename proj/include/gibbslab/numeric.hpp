#ifndef GIBBSLAB_NUMERIC_HPP
#define GIBBSLAB_NUMERIC_HPP

#include <cmath>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace gibbslab {

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  std::size_t n = 0;
};

// Ordinary least squares y = slope*x + intercept with coefficient of
// determination. Ill-posed inputs (n < 2, constant x) give r2 = 0.
LinearFit linear_fit(std::span<const double> x, std::span<const double> y);

double mean(std::span<const double> v);
double sample_variance(std::span<const double> v);  // unbiased, 0 for n < 2

// Quantile of type 7 (linear interpolation of order statistics), q in [0,1].
double quantile(std::vector<double> values, double q);
double median(std::vector<double> values);

// Wilson 95% confidence interval for a binomial proportion.
std::pair<double, double> wilson_interval(std::size_t successes, std::size_t trials);

// log( (1/n) sum exp(z_i) ), overflow-safe.
double log_mean_exp(std::span<const double> z);

// Standard normal CDF / PDF and the scaled CDF Phi(t/sigma).
double normal_cdf(double z);
double normal_pdf(double z);

// Delete-one-block jackknife standard error of a statistic. `stat` is
// evaluated on the sample with one of `blocks` contiguous blocks removed.
template <typename Stat>
double jackknife_se(std::span<const double> sample, std::size_t blocks, Stat&& stat) {
  if (blocks < 2 || sample.size() < blocks) return 0.0;
  const std::size_t n = sample.size();
  std::vector<double> leave_out;
  std::vector<double> buf;
  buf.reserve(n);
  for (std::size_t b = 0; b < blocks; ++b) {
    const std::size_t lo = b * n / blocks, hi = (b + 1) * n / blocks;
    buf.clear();
    for (std::size_t i = 0; i < n; ++i)
      if (i < lo || i >= hi) buf.push_back(sample[i]);
    leave_out.push_back(stat(std::span<const double>(buf)));
  }
  const double m = mean(leave_out);
  double ss = 0.0;
  for (double v : leave_out) ss += (v - m) * (v - m);
  const double g = static_cast<double>(blocks);
  return std::sqrt((g - 1.0) / g * ss);
}

}  // namespace gibbslab

#endif
