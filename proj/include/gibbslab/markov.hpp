#ifndef GIBBSLAB_MARKOV_HPP
#define GIBBSLAB_MARKOV_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "gibbslab/rng.hpp"
#include "gibbslab/transfer.hpp"
#include "gibbslab/words.hpp"

namespace gibbslab {

// Order-m Markov measure: the finite-memory approximation of the
// equilibrium state, and the sole source of randomness in the artifact.
// Immutable after construction; sampling uses caller-supplied seeds.
struct MarkovModel {
  Alphabet alphabet;
  int order = 0;                   // m; contexts are words in A^m
  std::vector<double> transition;  // t[ctx * |A| + a], rows sum to 1
  std::vector<double> initial;     // stationary distribution on A^m
  double stationary_residual = 0.0;
  std::string id;

  std::size_t contexts() const { return static_cast<std::size_t>(alphabet.pow(order)); }
  double prob(std::size_t ctx, Symbol a) const {
    return transition[ctx * static_cast<std::size_t>(alphabet.size) + a];
  }

  // Exact n-block distribution of the stationary chain.
  std::vector<double> block_distribution(int n) const;
  // Exact entropy rate -sum_ctx pi(ctx) sum_a t log t.
  double entropy_rate() const;
};

struct Trajectory {
  Word symbols;
  std::string model_id;
  std::uint64_t seed = 0;
};

// Conditional probabilities of the equilibrium measure at order m:
// t(w,a) = mu[w.a] / mu[w]. Requires m + 1 <= depth of s.
MarkovModel markov_from_equilibrium(const SpectralData& s, int order);

// Generic constructor from a transition table; computes the stationary law.
MarkovModel make_markov(Alphabet a, int order, std::vector<double> transition,
                        std::string id = "markov");

// Stationary distribution of the context chain (fixed point, power iteration).
std::vector<double> stationary_distribution(const MarkovModel& model, double tol = 1e-14,
                                            int max_iter = 100000);

// First `order` symbols from the stationary law, the rest from the kernel.
// Identical (model, seed, n) gives an identical path.
Trajectory sample_path(const MarkovModel& model, std::size_t n, std::uint64_t seed);

// Streaming sampler for long or lazily extended paths.
class PathSampler {
public:
  PathSampler(const MarkovModel& model, std::uint64_t seed);
  Symbol next();

private:
  const MarkovModel& model_;
  SplitMix64 rng_;
  std::size_t ctx_ = 0;
  std::size_t emitted_ = 0;
  std::vector<Symbol> pending_;  // initial context symbols not yet emitted
};

// Induced locally constant potential phi(x) = log t(x^{0..m-1}, x^m); the
// equilibrium state of this potential is the Markov measure itself.
Potential markov_potential(const MarkovModel& model);

}  // namespace gibbslab

#endif
