#include "gibbslab/concentration.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "gibbslab/errors.hpp"
#include "gibbslab/numeric.hpp"
#include "gibbslab/parallel.hpp"
#include "gibbslab/transport.hpp"

namespace gibbslab {

double FunctionalSpec::sum_lip_sq() const {
  double s = 0.0;
  for (double l : lip) s += l * l;
  return s;
}

FunctionalSpec FunctionalSpec::birkhoff(const ObservableSpec& f, std::size_t n) {
  if (n < 1) throw std::domain_error("birkhoff functional needs n >= 1");
  FunctionalSpec k;
  k.id = "birkhoff";
  k.arity = n;
  k.context = static_cast<std::size_t>(f.depth()) - 1;
  k.lip.assign(n, f.lip_theta());
  k.eval = [f, n](std::span<const Symbol> path) { return birkhoff_sum(f, path, n); };
  return k;
}

FunctionalSpec FunctionalSpec::single_coordinate(const ObservableSpec& f) {
  FunctionalSpec k = birkhoff(f, 1);
  k.id = "single-coordinate";
  return k;
}

FunctionalSpec FunctionalSpec::kantorovich(const SpectralData& s, int proj, std::size_t n) {
  if (proj < 1 || proj > s.depth) throw std::domain_error("projection depth out of range");
  if (n < static_cast<std::size_t>(proj)) throw std::domain_error("kantorovich needs n >= projection depth");
  FunctionalSpec k;
  k.id = "kantorovich";
  k.arity = n;
  k.context = static_cast<std::size_t>(proj) - 1;
  k.lip.assign(n, 1.0 / static_cast<double>(n));
  const BlockMeasure ref = BlockMeasure::from_spectral(s, proj);
  const Alphabet a = s.alphabet;
  const double theta = s.theta;
  k.eval = [ref, a, proj, n, theta](std::span<const Symbol> path) {
    // empirical measure of the n orbit points, projected to proj-blocks;
    // the path carries proj-1 extra symbols so every point has a full block
    const std::vector<double> counts =
        empirical_block_measure(a, path, proj, n + static_cast<std::size_t>(proj) - 1);
    return w1_tree(BlockMeasure::from_masses(a, proj, counts), ref, theta);
  };
  return k;
}

FunctionalSpec FunctionalSpec::shadowing(const Word& cylinder, std::size_t n, double theta) {
  if (cylinder.empty()) throw std::domain_error("shadowing cylinder must be nonempty");
  if (n < cylinder.size()) throw std::domain_error("shadowing needs n >= |cylinder|");
  FunctionalSpec k;
  k.id = "shadowing";
  k.arity = n;
  k.context = 0;
  k.lip.assign(n, 1.0 / static_cast<double>(n));
  Word a = cylinder;
  k.eval = [a, n, theta](std::span<const Symbol> path) {
    return shadowing_score(path, a.span(), n, theta);
  };
  return k;
}

FunctionalSpec FunctionalSpec::block_deviation(const SpectralData& s, int k_depth, std::size_t n) {
  if (k_depth < 1 || k_depth > s.depth) throw std::domain_error("block depth out of range");
  if (n < static_cast<std::size_t>(k_depth)) throw std::domain_error("block deviation needs n >= k");
  FunctionalSpec k;
  k.id = "block-deviation";
  const std::size_t windows = n - static_cast<std::size_t>(k_depth) + 1;
  k.arity = windows;
  k.context = static_cast<std::size_t>(k_depth) - 1;
  const double lip = std::pow(s.theta, -k_depth) / static_cast<double>(windows);
  k.lip.assign(windows, lip);
  SpectralData ref = s;
  k.eval = [ref, k_depth, n](std::span<const Symbol> path) {
    return max_block_deviation(path, ref, k_depth, n);
  };
  return k;
}

FunctionalSpec FunctionalSpec::scaled(double c) const {
  FunctionalSpec k = *this;
  k.id = id + "-scaled";
  for (double& l : k.lip) l *= std::abs(c);
  auto base = eval;
  k.eval = [base, c](std::span<const Symbol> path) { return c * base(path); };
  return k;
}

namespace {

// evaluate K over `samples` independent paths; deterministic slot layout
std::vector<double> sample_functional(const FunctionalSpec& K, const MarkovModel& model,
                                      std::size_t samples, std::uint64_t stream, int threads) {
  std::vector<double> values(samples);
  const std::size_t len = K.path_length();
  parallel_for_slots(samples, threads, [&](std::size_t i) {
    PathSampler sampler(model, derive_stream(stream, i));
    std::vector<Symbol> path(len);
    for (std::size_t j = 0; j < len; ++j) path[j] = sampler.next();
    values[i] = K.eval(path);
  });
  return values;
}

double fit_from_centered(std::span<const double> centered, std::span<const double> t_grid,
                         double sum_lip_sq, std::size_t* dropped,
                         std::vector<double>* used_grid) {
  double c_hat = 0.0;
  for (double t : t_grid) {
    if (t == 0.0) continue;
    double extreme = 0.0;
    for (double v : centered) extreme = std::max(extreme, std::abs(t * v));
    if (extreme > 700.0) {  // exp overflow guard
      if (dropped) ++*dropped;
      continue;
    }
    std::vector<double> expo(centered.size());
    for (std::size_t i = 0; i < centered.size(); ++i) expo[i] = t * centered[i];
    const double lme = log_mean_exp(expo);
    c_hat = std::max(c_hat, lme / (t * t * sum_lip_sq));
    if (used_grid) used_grid->push_back(t);
  }
  return c_hat;
}

}  // namespace

MgfFit mgf_constant_fit(const FunctionalSpec& K, const MarkovModel& model, std::size_t samples,
                        std::span<const double> t_grid, std::uint64_t seed, int threads) {
  if (samples < 1000) throw std::domain_error("mgf fit needs at least 10^3 samples");
  const double slsq = K.sum_lip_sq();
  if (!(slsq > 0.0)) throw std::domain_error("mgf fit needs sum Lip^2 > 0");

  // independent batches: centering batch and fit batch
  const std::vector<double> batch_a =
      sample_functional(K, model, samples, derive_stream(seed, 0xA), threads);
  const std::vector<double> batch_b =
      sample_functional(K, model, samples, derive_stream(seed, 0xB), threads);
  const double ek = mean(batch_a);

  std::vector<double> grid(t_grid.begin(), t_grid.end());
  if (grid.empty()) {
    const double sigma = std::sqrt(std::max(sample_variance(batch_a), 1e-300));
    for (double c : {0.25, 0.5, 0.75, 1.0}) {
      grid.push_back(c / sigma);
      grid.push_back(-c / sigma);
    }
  }

  std::vector<double> centered(batch_b.size());
  for (std::size_t i = 0; i < batch_b.size(); ++i) centered[i] = batch_b[i] - ek;

  MgfFit fit;
  fit.mean_k = ek;
  fit.c_hat = fit_from_centered(centered, grid, slsq, &fit.dropped, &fit.t_grid);
  fit.se = jackknife_se(centered, 20, [&](std::span<const double> sub) {
    return fit_from_centered(sub, grid, slsq, nullptr, nullptr);
  });
  return fit;
}

bool ConcentrationReport::all_ok() const {
  for (const TailPoint& p : upper)
    if (!p.ok) return false;
  for (const TailPoint& p : two_sided)
    if (!p.ok) return false;
  return true;
}

ConcentrationReport tail_curve(const FunctionalSpec& K, const MarkovModel& model,
                               std::size_t samples, std::span<const double> u_grid,
                               std::uint64_t seed, std::optional<MgfFit> fit, int threads) {
  if (!fit) fit = mgf_constant_fit(K, model, samples, {}, seed, threads);
  const double slsq = K.sum_lip_sq();

  ConcentrationReport rep;
  rep.functional_id = K.id;
  rep.arity = K.arity;
  rep.samples = samples;
  rep.c_hat = fit->c_hat;
  rep.c_hat_se = fit->se;
  rep.sum_lip_sq = slsq;
  rep.mean_k = fit->mean_k;
  rep.sampler_order = model.order;
  rep.seed = seed;

  // tail batch independent of the centering/fit batches
  const std::vector<double> values =
      sample_functional(K, model, samples, derive_stream(seed, 0xC), threads);

  const double denom = 4.0 * std::max(rep.c_hat, 1e-300) * slsq;
  for (double u : u_grid) {
    std::size_t up = 0, abs_up = 0;
    for (double v : values) {
      const double d = v - rep.mean_k;
      up += (d >= u);
      abs_up += (std::abs(d) >= u);
    }
    const double bound = u <= 0.0 ? 1.0 : std::exp(-u * u / denom);
    TailPoint p1;
    p1.u = u;
    p1.p_hat = static_cast<double>(up) / static_cast<double>(samples);
    std::tie(p1.ci_lo, p1.ci_hi) = wilson_interval(up, samples);
    p1.bound = bound;
    p1.ok = p1.ci_lo <= p1.bound;
    rep.upper.push_back(p1);

    TailPoint p2;
    p2.u = u;
    p2.p_hat = static_cast<double>(abs_up) / static_cast<double>(samples);
    std::tie(p2.ci_lo, p2.ci_hi) = wilson_interval(abs_up, samples);
    p2.bound = std::min(1.0, 2.0 * bound);
    p2.ok = p2.ci_lo <= p2.bound;
    rep.two_sided.push_back(p2);
  }
  return rep;
}

VarianceCheck variance_check(const FunctionalSpec& K, const MarkovModel& model,
                             std::size_t samples, std::uint64_t seed,
                             std::optional<MgfFit> fit, int threads) {
  if (!fit) fit = mgf_constant_fit(K, model, samples, {}, seed, threads);
  const std::vector<double> values =
      sample_functional(K, model, samples, derive_stream(seed, 0xD), threads);
  VarianceCheck check;
  check.variance = sample_variance(values);
  check.bound = 2.0 * fit->c_hat * K.sum_lip_sq();
  check.se = jackknife_se(values, 20, [](std::span<const double> sub) {
    return sample_variance(sub);
  });
  check.ok = check.variance <= check.bound + 2.0 * check.se;
  return check;
}

ConcentrationReport birkhoff_potential_tail(const ObservableSpec& psi, double lip_phi,
                                            const MarkovModel& model, std::size_t n,
                                            std::size_t samples, std::span<const double> u_grid,
                                            std::uint64_t seed, int threads) {
  if (!(lip_phi > 0.0)) throw config_error("birkhoff potential tail needs a Lip_phi constant");
  FunctionalSpec K = FunctionalSpec::birkhoff(psi, n);
  K.id = "birkhoff-potential";
  K.lip.assign(n, lip_phi);  // d_phi normalization
  // the grid is in units of (1/n) S_n psi
  std::vector<double> scaled(u_grid.size());
  for (std::size_t i = 0; i < u_grid.size(); ++i) scaled[i] = u_grid[i] * static_cast<double>(n);
  ConcentrationReport rep = tail_curve(K, model, samples, scaled, seed, std::nullopt, threads);
  for (std::size_t i = 0; i < rep.upper.size(); ++i) {
    rep.upper[i].u = u_grid[i];
    rep.two_sided[i].u = u_grid[i];
  }
  return rep;
}

double constant_assembler(std::span<const double> eps, double c1, double c2, double theta) {
  if (!(theta > 0.0 && theta < 1.0)) throw std::domain_error("theta must lie in (0,1)");
  if (eps.empty()) throw std::domain_error("empty epsilon sequence");
  for (double e : eps)
    if (e < 0.0 || !std::isfinite(e)) throw std::domain_error("epsilon entries must be finite and >= 0");

  double partial = 0.0;
  for (double e : eps) partial += e;

  // tail beyond the horizon, if the sequence has not already decayed away
  double tail = 0.0;
  const double last = eps.back();
  if (last > 1e-12 * std::max(1.0, partial)) {
    // geometric ratio from the last stretch of the sequence
    std::vector<double> ratios;
    const std::size_t lo = eps.size() > 10 ? eps.size() - 10 : 1;
    for (std::size_t i = lo; i < eps.size(); ++i)
      if (eps[i - 1] > 0.0 && eps[i] > 0.0) ratios.push_back(eps[i] / eps[i - 1]);
    if (ratios.empty()) throw unsupported_regime_error("epsilon sequence has no usable tail");
    const double r = median(ratios);
    if (r < 0.995) {
      tail = last * r / (1.0 - r);
    } else {
      // power-law fallback on the second half
      std::vector<double> lx, ly;
      for (std::size_t i = eps.size() / 2; i < eps.size(); ++i) {
        if (eps[i] <= 0.0) continue;
        lx.push_back(std::log(static_cast<double>(i + 1)));
        ly.push_back(std::log(eps[i]));
      }
      const LinearFit f = linear_fit(lx, ly);
      if (f.n < 3 || f.slope >= -1.05)
        throw unsupported_regime_error("epsilon partial sums show no summable decay");
      const double s = -f.slope;
      tail = last * static_cast<double>(eps.size()) / (s - 1.0);
    }
  }

  const double total = partial + tail;
  const double lemma = c1 + 2.0 * c2;
  const double c = 1.0 + lemma * lemma * total * total / ((1.0 - theta) * (1.0 - theta));
  return c;
}

}  // namespace gibbslab
