#ifndef GIBBSLAB_CONCENTRATION_HPP
#define GIBBSLAB_CONCENTRATION_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gibbslab/estimators.hpp"
#include "gibbslab/markov.hpp"
#include "gibbslab/transfer.hpp"

namespace gibbslab {

// A separately Lipschitz functional of n orbit coordinates, realized over a
// sampled symbol path via sliding windows. `context` is how many symbols
// beyond the n coordinates the evaluator reads (observable depth - 1 etc.).
struct FunctionalSpec {
  std::string id;
  std::size_t arity = 1;
  std::size_t context = 0;
  std::vector<double> lip;  // per-coordinate Lipschitz constants, size arity
  std::function<double(std::span<const Symbol>)> eval;

  std::size_t path_length() const { return arity + context; }
  double sum_lip_sq() const;

  // K = sum of f over n sliding windows; Lip_i = Lip_theta(f).
  static FunctionalSpec birkhoff(const ObservableSpec& f, std::size_t n);
  // K = f(x_0).
  static FunctionalSpec single_coordinate(const ObservableSpec& f);
  // K = tree-metric Kantorovich distance between the depth-`proj` empirical
  // block measure of the path and the reference marginal; Lip_i = 1/n.
  static FunctionalSpec kantorovich(const SpectralData& s, int proj, std::size_t n);
  // K = shadowing score against the cylinder [a]; Lip_i = 1/n.
  static FunctionalSpec shadowing(const Word& cylinder, std::size_t n, double theta);
  // K = max block-frequency deviation over A^k against the spectral marginal;
  // Lip_i = theta^-k / (n-k+1), arity n-k+1.
  static FunctionalSpec block_deviation(const SpectralData& s, int k, std::size_t n);

  FunctionalSpec scaled(double c) const;  // c*K, |c|*Lip
};

struct MgfFit {
  double c_hat = 0.0;
  double se = 0.0;  // block-jackknife error bar
  double mean_k = 0.0;
  std::vector<double> t_grid;  // grid actually used
  std::size_t dropped = 0;     // grid points dropped for overflow
};

// Least C with log E exp(t(K-EK)) <= C t^2 sum Lip^2 over the grid; EK comes
// from an independent batch. Empty grid = automatic symmetric grid scaled by
// the batch standard deviation.
MgfFit mgf_constant_fit(const FunctionalSpec& K, const MarkovModel& model, std::size_t samples,
                        std::span<const double> t_grid, std::uint64_t seed, int threads = 1);

struct TailPoint {
  double u = 0.0;
  double p_hat = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  double bound = 1.0;
  bool ok = true;  // empirical tail consistent with the bound (ci_lo <= bound)
};

struct ConcentrationReport {
  std::string functional_id;
  std::size_t arity = 0;
  std::size_t samples = 0;
  double c_hat = 0.0;
  double c_hat_se = 0.0;
  double sum_lip_sq = 0.0;
  double mean_k = 0.0;
  int sampler_order = 0;
  std::uint64_t seed = 0;
  std::vector<TailPoint> upper;      // P(K - EK >= u) vs exp(-u^2/(4C sumLip^2))
  std::vector<TailPoint> two_sided;  // P(|K - EK| >= u) vs twice the bound

  bool all_ok() const;
};

// Empirical tails against the Gaussian bound on a u-grid. A prefitted
// constant can be supplied; otherwise it is fitted on the EK batch.
ConcentrationReport tail_curve(const FunctionalSpec& K, const MarkovModel& model,
                               std::size_t samples, std::span<const double> u_grid,
                               std::uint64_t seed, std::optional<MgfFit> fit = std::nullopt,
                               int threads = 1);

struct VarianceCheck {
  double variance = 0.0;
  double bound = 0.0;
  double se = 0.0;
  bool ok = true;  // variance <= bound within the confidence band
};

VarianceCheck variance_check(const FunctionalSpec& K, const MarkovModel& model,
                             std::size_t samples, std::uint64_t seed,
                             std::optional<MgfFit> fit = std::nullopt, int threads = 1);

// Birkhoff-sum tails in the d_phi normalization: the functional is S_n psi
// with per-coordinate constant Lip_phi(psi); the u-grid is in units of the
// time average (1/n) S_n psi.
ConcentrationReport birkhoff_potential_tail(const ObservableSpec& psi, double lip_phi,
                                            const MarkovModel& model, std::size_t n,
                                            std::size_t samples, std::span<const double> u_grid,
                                            std::uint64_t seed, int threads = 1);

// Proof-side diagnostic constant 1 + ((c1 + 2 c2) * sum eps)^2 / (1-theta)^2,
// where the epsilon sum starts at n = 1 and is extended by a fitted tail.
// Throws unsupported_regime_error when the sequence shows no decay.
double constant_assembler(std::span<const double> eps, double c1, double c2, double theta);

}  // namespace gibbslab

#endif
