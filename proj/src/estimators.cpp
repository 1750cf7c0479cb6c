#include "gibbslab/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>

#include "gibbslab/errors.hpp"
#include "gibbslab/numeric.hpp"

namespace gibbslab {

ObservableSpec::ObservableSpec(Alphabet a, int depth, std::vector<double> table, double theta)
    : alphabet_(a), depth_(depth), theta_(theta) {
  if (depth < 1) throw std::domain_error("observable depth must be >= 1");
  if (!(theta > 0.0 && theta < 1.0)) throw std::domain_error("theta must lie in (0,1)");
  if (table.size() != a.pow(depth)) throw std::domain_error("observable table must cover A^depth");
  table_ = std::move(table);

  // var_n(f) over prefix groups; Lip_theta = max var_n / theta^n
  var_.assign(static_cast<std::size_t>(depth), 0.0);
  lip_theta_ = 0.0;
  double scale = 1.0;
  for (int n = 0; n < depth; ++n) {
    const std::size_t group = static_cast<std::size_t>(a.pow(depth - n));
    double worst = 0.0;
    for (std::size_t start = 0; start < table_.size(); start += group) {
      double lo = table_[start], hi = table_[start];
      for (std::size_t j = 1; j < group; ++j) {
        lo = std::min(lo, table_[start + j]);
        hi = std::max(hi, table_[start + j]);
      }
      worst = std::max(worst, hi - lo);
    }
    var_[static_cast<std::size_t>(n)] = worst;
    lip_theta_ = std::max(lip_theta_, worst / scale);
    scale *= theta;
  }
}

ObservableSpec ObservableSpec::indicator(Alphabet a, const Word& w, double theta) {
  if (w.empty()) throw std::domain_error("indicator cylinder must be nonempty");
  const int depth = static_cast<int>(w.size());
  std::vector<double> table(a.pow(depth), 0.0);
  table[word_index(a, w)] = 1.0;
  return ObservableSpec(a, depth, std::move(table), theta);
}

ObservableSpec ObservableSpec::from_potential(const Potential& phi, int depth) {
  const Alphabet a = phi.alphabet();
  std::vector<double> table(a.pow(depth));
  for (std::uint64_t i = 0; i < table.size(); ++i)
    table[i] = phi.eval(index_word(a, i, depth).span());
  return ObservableSpec(a, depth, std::move(table), phi.theta());
}

double ObservableSpec::operator()(std::span<const Symbol> window) const {
  if (window.size() < static_cast<std::size_t>(depth_))
    throw std::domain_error("observable window shorter than its depth");
  std::uint64_t idx = 0;
  for (int i = 0; i < depth_; ++i)
    idx = idx * static_cast<std::uint64_t>(alphabet_.size) + window[static_cast<std::size_t>(i)];
  return table_[idx];
}

ObservableSpec ObservableSpec::centered(double c) const {
  std::vector<double> t = table_;
  for (double& v : t) v -= c;
  return ObservableSpec(alphabet_, depth_, std::move(t), theta_);
}

double ObservableSpec::lip_phi(const VariationProfile& profile) const {
  double lip = 0.0;
  for (std::size_t n = 0; n < var_.size(); ++n)
    lip = std::max(lip, var_[n] / profile.W_at(n));
  return lip;
}

void ObservableSpec::sliding_values(std::span<const Symbol> path, std::vector<double>& out) const {
  const std::size_t d = static_cast<std::size_t>(depth_);
  if (path.size() < d) throw std::domain_error("path shorter than observable depth");
  const std::uint64_t base = static_cast<std::uint64_t>(alphabet_.size);
  const std::uint64_t mod = alphabet_.pow(depth_ - 1);
  const std::size_t windows = path.size() - d + 1;
  out.resize(windows);
  std::uint64_t idx = 0;
  for (std::size_t i = 0; i < d; ++i) idx = idx * base + path[i];
  out[0] = table_[idx];
  for (std::size_t j = 1; j < windows; ++j) {
    idx = (idx % mod) * base + path[j + d - 1];
    out[j] = table_[idx];
  }
}

double birkhoff_sum(const ObservableSpec& f, std::span<const Symbol> x, std::size_t n) {
  if (n == 0) return 0.0;
  const std::size_t d = static_cast<std::size_t>(f.depth());
  if (n + d > x.size() + 1) throw std::domain_error("birkhoff window overruns the path");
  const std::uint64_t base = static_cast<std::uint64_t>(f.alphabet().size);
  const std::uint64_t mod = f.alphabet().pow(f.depth() - 1);
  std::uint64_t idx = 0;
  for (std::size_t i = 0; i < d; ++i) idx = idx * base + x[i];
  double s = f.table()[idx];
  for (std::size_t j = 1; j < n; ++j) {
    idx = (idx % mod) * base + x[j + d - 1];
    s += f.table()[idx];
  }
  return s;
}

double block_frequency(std::span<const Symbol> x, std::span<const Symbol> w, std::size_t n) {
  if (w.empty()) throw std::domain_error("block must be nonempty");
  if (w.size() > n) throw std::domain_error("block longer than the inspected range");
  if (n > x.size()) throw std::domain_error("inspected range longer than the path");
  const std::size_t positions = n - w.size() + 1;
  std::size_t count = 0;
  for (std::size_t j = 0; j < positions; ++j) {
    bool match = true;
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (x[j + i] != w[i]) {
        match = false;
        break;
      }
    }
    count += match;
  }
  return static_cast<double>(count) / static_cast<double>(positions);
}

double max_block_deviation(std::span<const Symbol> x, const SpectralData& s, int k, std::size_t n) {
  if (k < 1 || k > s.depth) throw std::domain_error("block depth must satisfy 1 <= k <= spectral depth");
  if (static_cast<std::size_t>(k) > n) throw std::domain_error("block longer than the inspected range");
  if (n > x.size()) throw std::domain_error("inspected range longer than the path");
  const std::vector<double> mu_k = s.marginal(k);
  std::vector<std::uint64_t> counts(mu_k.size(), 0);
  const std::uint64_t base = static_cast<std::uint64_t>(s.alphabet.size);
  const std::uint64_t mod = s.alphabet.pow(k - 1);
  std::uint64_t idx = 0;
  for (int i = 0; i < k; ++i) idx = idx * base + x[static_cast<std::size_t>(i)];
  ++counts[idx];
  const std::size_t positions = n - static_cast<std::size_t>(k) + 1;
  for (std::size_t j = 1; j < positions; ++j) {
    idx = (idx % mod) * base + x[j + static_cast<std::size_t>(k) - 1];
    ++counts[idx];
  }
  double dev = 0.0;
  for (std::size_t w = 0; w < counts.size(); ++w) {
    const double freq = static_cast<double>(counts[w]) / static_cast<double>(positions);
    dev = std::max(dev, std::abs(freq - mu_k[w]));
  }
  return dev;
}

std::optional<std::uint64_t> hitting_time(std::span<const Symbol> w, const MarkovModel& model,
                                          std::uint64_t seed, std::uint64_t cap) {
  if (w.empty()) throw std::domain_error("hitting pattern must be nonempty");
  const std::size_t n = w.size();
  PathSampler sampler(model, seed);
  std::deque<Symbol> window;
  // fill y^0..y^{n-1}
  for (std::size_t i = 0; i < n; ++i) window.push_back(sampler.next());
  for (std::uint64_t j = 1; j <= cap; ++j) {
    window.pop_front();
    window.push_back(sampler.next());  // window now holds y^{j..j+n-1}
    bool match = true;
    for (std::size_t i = 0; i < n; ++i) {
      if (window[i] != w[i]) {
        match = false;
        break;
      }
    }
    if (match) return j;
  }
  return std::nullopt;
}

EntropyEstimate entropy_from_hitting(const MarkovModel& model, int n, int trials,
                                     std::uint64_t seed, std::uint64_t cap) {
  if (trials < 30) throw std::domain_error("entropy estimate needs at least 30 trials");
  if (n < 1) throw std::domain_error("pattern length must be >= 1");
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(trials));
  EntropyEstimate est;
  est.trials = static_cast<std::size_t>(trials);
  for (int t = 0; t < trials; ++t) {
    const std::uint64_t seed_x = derive_stream(seed, 2 * static_cast<std::uint64_t>(t));
    const std::uint64_t seed_y = derive_stream(seed, 2 * static_cast<std::uint64_t>(t) + 1);
    const Trajectory x = sample_path(model, static_cast<std::size_t>(n), seed_x);
    const auto T = hitting_time(x.symbols, model, seed_y, cap);
    if (!T) {
      ++est.censored;
      continue;
    }
    values.push_back(std::log(static_cast<double>(*T)) / static_cast<double>(n));
  }
  if (values.empty()) throw estimation_failure("all hitting-time trials were censored at the cap");
  est.point = median(values);
  est.spread = quantile(values, 0.75) - quantile(values, 0.25);
  return est;
}

double shadowing_score(std::span<const Symbol> x, std::span<const Symbol> cylinder, std::size_t n,
                       double theta) {
  const std::size_t k = cylinder.size();
  if (k == 0) throw std::domain_error("shadowing cylinder must be nonempty");
  if (k > n) throw std::domain_error("shadowing needs |cylinder| <= n");
  if (x.size() < k) throw std::domain_error("path must cover the cylinder length");
  if (!(theta > 0.0 && theta < 1.0)) throw std::domain_error("theta must lie in (0,1)");
  double s = 0.0;
  for (std::size_t j = 0; j < std::min(n, k); ++j) {
    // first offset i with j+i < k and cylinder disagreeing with x; no such
    // offset means the optimal orbit tracks exactly (contribution 0)
    double contrib = 0.0;
    double scale = 1.0;
    for (std::size_t i = 0; j + i < k; ++i) {
      if (cylinder[j + i] != x[j + i]) {
        contrib = scale;
        break;
      }
      scale *= theta;
    }
    s += contrib;
  }
  return s / static_cast<double>(n);
}

std::vector<double> empirical_block_measure(Alphabet a, std::span<const Symbol> x, int m,
                                            std::size_t n) {
  if (m < 1) throw std::domain_error("block depth must be >= 1");
  if (static_cast<std::size_t>(m) > n) throw std::domain_error("block depth exceeds the range");
  if (n > x.size()) throw std::domain_error("range longer than the path");
  const std::uint64_t base = static_cast<std::uint64_t>(a.size);
  const std::uint64_t mod = a.pow(m - 1);
  std::vector<double> out(a.pow(m), 0.0);
  std::uint64_t idx = 0;
  for (int i = 0; i < m; ++i) idx = idx * base + x[static_cast<std::size_t>(i)];
  out[idx] += 1.0;
  const std::size_t positions = n - static_cast<std::size_t>(m) + 1;
  for (std::size_t j = 1; j < positions; ++j) {
    idx = (idx % mod) * base + x[j + static_cast<std::size_t>(m) - 1];
    out[idx] += 1.0;
  }
  for (double& v : out) v /= static_cast<double>(positions);
  return out;
}

SigmaSquared sigma_squared(const ObservableSpec& f, const SpectralData& s, const GFunction& g,
                           int i_max, double tol) {
  if (f.depth() > s.depth) throw std::domain_error("observable deeper than the spectral truncation");
  const std::size_t n = s.mu.size();
  // extend the depth-d table to A^k (value depends on the prefix)
  const std::size_t block = n / static_cast<std::size_t>(s.alphabet.pow(f.depth()));
  std::vector<double> fc(n);
  for (std::size_t w = 0; w < n; ++w) fc[w] = f.table()[w / block];
  double mean_f = 0.0;
  for (std::size_t w = 0; w < n; ++w) mean_f += fc[w] * s.mu[w];
  for (std::size_t w = 0; w < n; ++w) fc[w] -= mean_f;

  SigmaSquared out;
  double var0 = 0.0;
  for (std::size_t w = 0; w < n; ++w) var0 += fc[w] * fc[w] * s.mu[w];
  out.value = var0;

  std::vector<double> cur = fc, next(n);
  for (int i = 1; i <= i_max; ++i) {
    g.apply_normalized(cur, next);
    cur.swap(next);
    double corr = 0.0;
    for (std::size_t w = 0; w < n; ++w) corr += cur[w] * fc[w] * s.mu[w];
    out.value += 2.0 * corr;
    out.last_term = std::abs(corr);
    out.terms = i;
    if (out.last_term < tol) break;
  }
  out.truncation_warning = out.last_term >= tol;
  return out;
}

void ASCLTState::update(double birkhoff_n) {
  const double n = static_cast<double>(atoms_.size() + 1);
  atoms_.push_back(birkhoff_n / std::sqrt(n));
  l_n_ += 1.0 / n;
}

std::vector<double> ASCLTState::weights() const {
  std::vector<double> w(atoms_.size());
  for (std::size_t n = 1; n <= atoms_.size(); ++n)
    w[n - 1] = 1.0 / (static_cast<double>(n) * l_n_);
  return w;
}

ASCLTState asclt_accumulate(const ObservableSpec& f, std::span<const Symbol> x, std::size_t N) {
  const std::size_t d = static_cast<std::size_t>(f.depth());
  if (N + d > x.size() + 1) throw std::domain_error("path too short for N birkhoff prefixes");
  ASCLTState state;
  const std::uint64_t base = static_cast<std::uint64_t>(f.alphabet().size);
  const std::uint64_t mod = f.alphabet().pow(f.depth() - 1);
  std::uint64_t idx = 0;
  for (std::size_t i = 0; i < d; ++i) idx = idx * base + x[i];
  double s = f.table()[idx];
  state.update(s);
  for (std::size_t j = 1; j < N; ++j) {
    idx = (idx % mod) * base + x[j + d - 1];
    s += f.table()[idx];
    state.update(s);
  }
  return state;
}

}  // namespace gibbslab
