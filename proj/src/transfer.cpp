#include "gibbslab/transfer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "gibbslab/errors.hpp"
#include "gibbslab/rng.hpp"

namespace gibbslab {

namespace {

double linf_diff(std::span<const double> a, std::span<const double> b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

double l1_norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += std::abs(x);
  return s;
}

}  // namespace

void TransferMatrix::apply(std::span<const double> f, std::span<double> out) const {
  const std::size_t n = states();
  const std::size_t base = static_cast<std::size_t>(alphabet.size);
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t u = 0; u < weight.size(); ++u) out[u % n] += weight[u] * f[u / base];
}

void TransferMatrix::apply_adjoint(std::span<const double> m, std::span<double> out) const {
  const std::size_t n = states();
  const std::size_t base = static_cast<std::size_t>(alphabet.size);
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t u = 0; u < weight.size(); ++u) out[u / base] += weight[u] * m[u % n];
}

int default_depth(const Alphabet& a) {
  int k = 1;
  while (a.pow(k + 2) <= (1u << 20)) ++k;
  return k;
}

TransferMatrix build_transfer(const Potential& phi, int depth, std::size_t budget) {
  if (depth < 1) throw std::domain_error("transfer depth must be >= 1");
  const Alphabet a = phi.alphabet();
  const std::uint64_t size = a.pow(depth + 1);
  if (size > budget)
    throw resource_error("transfer truncation needs " + std::to_string(size) +
                             " entries, budget is " + std::to_string(budget),
                         size);
  TransferMatrix m;
  m.alphabet = a;
  m.depth = depth;
  m.weight.resize(size);
  for (std::uint64_t idx = 0; idx < size; ++idx) {
    m.weight[idx] = std::exp(phi.eval(index_word(a, idx, depth + 1).span()));
    if (!(m.weight[idx] > 0.0)) throw std::domain_error("transfer weight not strictly positive");
  }
  return m;
}

SpectralData spectral_solve(const TransferMatrix& m, double tol, int max_iter) {
  const std::size_t n = m.states();
  std::vector<double> h(n, 1.0 / static_cast<double>(n)), h_next(n);
  std::vector<double> nu(n, 1.0 / static_cast<double>(n)), nu_next(n);
  double lambda = 1.0;
  double diff = 1.0;
  int it = 0;
  for (; it < max_iter; ++it) {
    m.apply(h, h_next);
    m.apply_adjoint(nu, nu_next);
    const double lh = l1_norm(h_next);
    const double ln = l1_norm(nu_next);
    if (!(lh > 0.0) || !(ln > 0.0)) throw numeric_error("power iteration collapsed to zero", 1.0);
    for (std::size_t i = 0; i < n; ++i) {
      h_next[i] /= lh;
      nu_next[i] /= ln;
    }
    diff = std::max(linf_diff(h, h_next), linf_diff(nu, nu_next));
    lambda = lh;  // h was l1-normalized, so |P h|_1 estimates lambda
    h.swap(h_next);
    nu.swap(nu_next);
    if (diff < tol) break;
  }
  if (diff >= tol)
    throw numeric_error("power iteration did not converge within " + std::to_string(max_iter) +
                            " iterations",
                        diff);

  SpectralData s;
  s.alphabet = m.alphabet;
  s.depth = m.depth;
  s.theta = 0.5;
  // refine lambda with a Rayleigh-type quotient <nu, P h> / <nu, h>
  std::vector<double> ph(n);
  m.apply(h, ph);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    num += nu[i] * ph[i];
    den += nu[i] * h[i];
  }
  lambda = num / den;
  s.lambda = lambda;
  s.pressure = std::log(lambda);

  // normalize: nu a probability vector, sum h nu = 1
  const double nu_sum = l1_norm(nu);
  for (auto& x : nu) x /= nu_sum;
  double hnu = 0.0;
  for (std::size_t i = 0; i < n; ++i) hnu += h[i] * nu[i];
  for (auto& x : h) x /= hnu;

  s.h = std::move(h);
  s.nu = std::move(nu);
  s.mu.resize(n);
  double mu_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    s.mu[i] = s.h[i] * s.nu[i];
    mu_sum += s.mu[i];
  }
  for (auto& x : s.mu) x /= mu_sum;  // remove rounding drift

  // eigen-equation residuals in sup norm, relative to lambda scale
  m.apply(s.h, ph);
  double res_h = 0.0;
  for (std::size_t i = 0; i < n; ++i) res_h = std::max(res_h, std::abs(ph[i] - lambda * s.h[i]));
  std::vector<double> pnu(n);
  m.apply_adjoint(s.nu, pnu);
  double res_nu = 0.0;
  for (std::size_t i = 0; i < n; ++i) res_nu = std::max(res_nu, std::abs(pnu[i] - lambda * s.nu[i]));
  s.residual = std::max(res_h, res_nu) / lambda;
  s.iterations = it + 1;
  return s;
}

std::vector<double> SpectralData::marginal(int m) const {
  if (m < 0 || m > depth) throw std::domain_error("marginal depth out of range");
  const std::size_t nm = static_cast<std::size_t>(alphabet.pow(m));
  const std::size_t block = mu.size() / nm;  // words sharing an m-prefix are contiguous
  std::vector<double> out(nm, 0.0);
  for (std::size_t v = 0; v < nm; ++v)
    for (std::size_t j = 0; j < block; ++j) out[v] += mu[v * block + j];
  return out;
}

GFunction g_function(const SpectralData& s, const Potential& phi) {
  for (double v : s.h)
    if (!(v > 0.0)) throw std::invalid_argument("g_function needs strictly positive h");
  GFunction g;
  g.alphabet = s.alphabet;
  g.depth = s.depth;
  const std::size_t n = g.states();
  const std::size_t base = static_cast<std::size_t>(s.alphabet.size);
  const std::uint64_t size = s.alphabet.pow(s.depth + 1);
  g.g.resize(size);
  for (std::uint64_t u = 0; u < size; ++u) {
    const double w = std::exp(phi.eval(index_word(s.alphabet, u, s.depth + 1).span()));
    g.g[u] = s.h[u / base] * w / (s.lambda * s.h[u % n]);
  }
  return g;
}

void GFunction::apply_normalized(std::span<const double> f, std::span<double> out) const {
  const std::size_t n = states();
  const std::size_t base = static_cast<std::size_t>(alphabet.size);
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t u = 0; u < g.size(); ++u) out[u % n] += g[u] * f[u / base];
}

void GFunction::apply_adjoint_normalized(std::span<const double> m, std::span<double> out) const {
  const std::size_t n = states();
  const std::size_t base = static_cast<std::size_t>(alphabet.size);
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t u = 0; u < g.size(); ++u) out[u / base] += g[u] * m[u % n];
}

double GFunction::row_sum_error() const {
  const std::size_t n = states();
  std::vector<double> ones(n, 1.0), out(n);
  apply_normalized(ones, out);
  double e = 0.0;
  for (double v : out) e = std::max(e, std::abs(v - 1.0));
  return e;
}

namespace {

// var_n(f) for a tabulated f on A^k: max over n-prefix groups of (max - min).
std::vector<double> table_variations(std::span<const double> f, const Alphabet& a, int k) {
  std::vector<double> vars(static_cast<std::size_t>(k) + 1, 0.0);
  for (int n = 0; n <= k; ++n) {
    const std::size_t group = static_cast<std::size_t>(a.pow(k - n));
    double worst = 0.0;
    for (std::size_t start = 0; start < f.size(); start += group) {
      double lo = f[start], hi = f[start];
      for (std::size_t j = 1; j < group; ++j) {
        lo = std::min(lo, f[start + j]);
        hi = std::max(hi, f[start + j]);
      }
      worst = std::max(worst, hi - lo);
    }
    vars[static_cast<std::size_t>(n)] = worst;
  }
  return vars;
}

}  // namespace

std::vector<double> convergence_probe(const SpectralData& s, const TransferMatrix& m,
                                      std::span<const double> f, const VariationProfile& profile,
                                      int n_max) {
  if (f.size() != s.mu.size()) throw std::domain_error("probe function must live on A^k");
  // ||f||_{L_phi} = ||f||_inf + max_n var_n(f)/W_n
  double sup = 0.0;
  for (double v : f) sup = std::max(sup, std::abs(v));
  const std::vector<double> vars = table_variations(f, s.alphabet, s.depth);
  double lip = 0.0;
  for (std::size_t n = 0; n < vars.size(); ++n)
    lip = std::max(lip, vars[n] / profile.W_at(n));
  const double norm = sup + lip;

  double target = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) target += f[i] * s.mu[i];

  // P~ f = P(f h) / (lambda h)
  const std::size_t n = s.mu.size();
  std::vector<double> cur(f.begin(), f.end()), tmp(n);
  std::vector<double> eps;
  eps.reserve(static_cast<std::size_t>(n_max));
  for (int step = 1; step <= n_max; ++step) {
    for (std::size_t i = 0; i < n; ++i) tmp[i] = cur[i] * s.h[i];
    m.apply(tmp, cur);
    for (std::size_t i = 0; i < n; ++i) cur[i] /= s.lambda * s.h[i];
    double dev = 0.0;
    for (std::size_t i = 0; i < n; ++i) dev = std::max(dev, std::abs(cur[i] - target));
    eps.push_back(norm > 0.0 ? dev / norm : 0.0);
  }
  return eps;
}

double distortion_probe(const GFunction& g, const VariationProfile& profile, int max_order,
                        int pairs, std::uint64_t seed) {
  profile.validate();
  if (max_order < 1) throw std::domain_error("distortion probe needs max_order >= 1");
  const int k = g.depth;
  const int base = g.alphabet.size;
  if (base < 2) throw std::domain_error("distortion probe needs |A| >= 2");
  if (k < 2) throw std::domain_error("distortion probe needs depth >= 2");
  SplitMix64 rng(seed);
  double worst = 0.0;
  std::vector<Symbol> x(static_cast<std::size_t>(k)), y(static_cast<std::size_t>(k));
  std::vector<Symbol> cx, cy;
  for (int trial = 0; trial < pairs; ++trial) {
    // x, y agree on the first n symbols and differ at position n
    const int n = 1 + static_cast<int>(rng.uniform_below(static_cast<std::uint32_t>(k - 1)));
    for (int i = 0; i < k; ++i) x[static_cast<std::size_t>(i)] = static_cast<Symbol>(rng.uniform_below(static_cast<std::uint32_t>(base)));
    y = x;
    for (int i = n; i < k; ++i) y[static_cast<std::size_t>(i)] = static_cast<Symbol>(rng.uniform_below(static_cast<std::uint32_t>(base)));
    if (separation_index(x, y) != static_cast<std::size_t>(n)) {
      y[static_cast<std::size_t>(n)] =
          static_cast<Symbol>((x[static_cast<std::size_t>(n)] + 1 + rng.uniform_below(static_cast<std::uint32_t>(base - 1))) % base);
    }
    const int order = 1 + static_cast<int>(rng.uniform_below(static_cast<std::uint32_t>(max_order)));
    // shared preimage word of length `order` prepended to both
    cx.assign(static_cast<std::size_t>(order), 0);
    for (auto& s : cx) s = static_cast<Symbol>(rng.uniform_below(static_cast<std::uint32_t>(base)));
    cy = cx;
    cx.insert(cx.end(), x.begin(), x.end());
    cy.insert(cy.end(), y.begin(), y.end());
    // g^(order) = product of one-step g over the orbit windows (k+1 symbols each)
    double log_ratio = 0.0;
    bool usable = true;
    for (int i = 0; i < order; ++i) {
      if (static_cast<std::size_t>(i + k + 1) > cx.size()) { usable = false; break; }
      const std::span<const Symbol> wx(cx.data() + i, static_cast<std::size_t>(k) + 1);
      const std::span<const Symbol> wy(cy.data() + i, static_cast<std::size_t>(k) + 1);
      log_ratio += std::log(g.g[word_index(g.alphabet, wx)]) - std::log(g.g[word_index(g.alphabet, wy)]);
    }
    if (!usable) continue;
    const double ratio = std::abs(1.0 - std::exp(log_ratio)) / profile.W_at(static_cast<std::size_t>(n));
    worst = std::max(worst, ratio);
  }
  return worst;
}

std::pair<double, double> gibbs_ratio_check(const SpectralData& s, const Potential& phi, int n) {
  if (n < 1 || n > s.depth) throw std::domain_error("gibbs ratio depth out of range");
  const std::vector<double> mu_n = s.marginal(n);
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  std::vector<Symbol> rot(static_cast<std::size_t>(n));
  for (std::uint64_t idx = 0; idx < mu_n.size(); ++idx) {
    const Word w = index_word(s.alphabet, idx, n);
    // S_n phi at the periodic extension: rotations of w
    double birkhoff = 0.0;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) rot[static_cast<std::size_t>(j)] = w[static_cast<std::size_t>((i + j) % n)];
      birkhoff += phi.eval(rot);
    }
    const double gibbs = std::exp(-n * s.pressure + birkhoff);
    const double ratio = mu_n[idx] / gibbs;
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
  }
  return {lo, hi};
}

}  // namespace gibbslab
