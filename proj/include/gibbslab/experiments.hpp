#ifndef GIBBSLAB_EXPERIMENTS_HPP
#define GIBBSLAB_EXPERIMENTS_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "gibbslab/concentration.hpp"
#include "gibbslab/io.hpp"
#include "gibbslab/markov.hpp"
#include "gibbslab/potential.hpp"
#include "gibbslab/transfer.hpp"

namespace gibbslab {

// Resolved configuration of one experiment run. `params` carries the
// experiment-specific section; everything is echoed into the manifest so a
// run can be reproduced from it bit-identically.
struct ExperimentConfig {
  Potential potential = Potential::bernoulli({0.5, 0.5});
  int depth = 8;      // transfer truncation k
  int order = 4;      // markov sampler order m
  std::uint64_t seed = 1;
  int threads = 1;
  double spectral_tol = 1e-13;
  int spectral_max_iter = 200000;
  json params;        // experiment-specific section

  json resolved() const;  // full provenance block (potential, k, m, seeds)
};

struct ExperimentResult {
  std::string id;
  std::vector<Table> tables;
  json summary;
  bool flags_ok = true;
};

// Speed of Markov approximation: per order m, the d-bar_n lower bound
// against a high-order reference, var_m(phi) and their ratio.
ExperimentResult run_markov_approx_speed(const ExperimentConfig& cfg);

// Mean and concentration width of d_K(E_n, mu) over a grid of path lengths.
ExperimentResult run_empirical_measure_convergence(const ExperimentConfig& cfg);

// W1 between the log-averaged empirical law of S_n f / sqrt(n) and the
// Gaussian with the Green-Kubo variance, per seed and checkpoint.
ExperimentResult run_asclt(const ExperimentConfig& cfg);

// Shadowing-score quantiles against the (u_A + u)/sqrt(n) envelope.
ExperimentResult run_shadowing(const ExperimentConfig& cfg);

// Max block-frequency deviation quantiles against the concentration envelope,
// plus the k(n) = zeta log n trend.
ExperimentResult run_block_frequency(const ExperimentConfig& cfg);

// Orchestrates the hitting-time entropy estimator (logic lives in
// estimators).
ExperimentResult run_hitting(const ExperimentConfig& cfg);

// Tail-curve pipeline for a configured functional; writes a
// ConcentrationReport-shaped table.
ExperimentResult run_tail_curve(const ExperimentConfig& cfg);

// Dispatch by experiment id; throws config_error for unknown ids.
ExperimentResult run_experiment(const std::string& id, const ExperimentConfig& cfg);
std::vector<std::string> experiment_ids();

// Write tables + summary JSON under out_dir; returns the written CSV paths.
std::vector<std::filesystem::path> write_experiment_outputs(const ExperimentResult& result,
                                                            const ExperimentConfig& cfg,
                                                            const std::filesystem::path& out_dir);

}  // namespace gibbslab

#endif
