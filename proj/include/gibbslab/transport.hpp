#ifndef GIBBSLAB_TRANSPORT_HPP
#define GIBBSLAB_TRANSPORT_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "gibbslab/markov.hpp"
#include "gibbslab/transfer.hpp"
#include "gibbslab/words.hpp"

namespace gibbslab {

// Probability vector on A^depth.
struct BlockMeasure {
  Alphabet alphabet;
  int depth = 1;
  std::vector<double> masses;

  static BlockMeasure from_spectral(const SpectralData& s, int depth);
  static BlockMeasure from_markov(const MarkovModel& m, int depth);
  static BlockMeasure from_masses(Alphabet a, int depth, std::vector<double> masses);

  BlockMeasure marginal(int m) const;  // prefix marginal, m <= depth
  void validate() const;               // nonnegative, sums to 1 within 1e-12
};

struct PlanEntry {
  std::uint64_t from = 0;
  std::uint64_t to = 0;
  double mass = 0.0;
};

// Joint masses on A^n x A^n realizing a transport value.
struct TransportPlan {
  int depth = 1;
  double cost = 0.0;
  std::vector<PlanEntry> entries;

  // max deviation of the plan's marginals from the given measures
  double marginal_error(const BlockMeasure& mu, const BlockMeasure& nu) const;
};

struct OTResult {
  double value = 0.0;
  TransportPlan plan;
};

// Closed-form W1 on the cylinder tree: sum over levels j of
// (theta^{j-1}-theta^j)/2 times the l1 distance of the depth-j marginals.
// Exact for the tree metric with leaves at depth m; within theta^m of the
// sequence-space W1.
double w1_tree(const BlockMeasure& mu, const BlockMeasure& nu, double theta);

// Exact optimum of the transport LP with pairwise cost d_theta on A^m,
// solved by successive shortest paths (small instances; oracle use).
OTResult w1_lp(const BlockMeasure& mu, const BlockMeasure& nu, double theta);

inline constexpr std::uint64_t default_dbar_guard = 1u << 10;  // states per side

// Minimum expected (non-normalized) Hamming cost over unconstrained
// couplings: a lower bound of the shift-invariant-coupling d-bar_n.
OTResult dbar_n(const BlockMeasure& mu, const BlockMeasure& nu,
                std::uint64_t size_guard = default_dbar_guard);

// n-block relative entropy H_n(nu|mu) = sum nu log(nu/mu); +infinity when nu
// charges a mu-null word.
double relative_entropy_n(const BlockMeasure& nu, const BlockMeasure& mu);

// h(nu|mu_phi) = P(phi) - int phi dnu - h(nu) for a Markov nu. The potential
// integral is evaluated at the smallest depth whose variation bound meets
// tol; throws resource_error when no affordable depth does.
double relative_entropy_rate(const MarkovModel& nu, const SpectralData& s, const Potential& phi,
                             double tol = 1e-4, int max_depth = 22);

struct PinskerGap {
  double dbar = 0.0;        // lhs (coupling lower bound)
  double rhs_factor = 0.0;  // sqrt(n H_n)
  double ratio = 0.0;       // dbar / rhs_factor, 0 when both vanish
};

// Both sides of the Pinsker-type inequality at block depth n.
PinskerGap pinsker_gap(const MarkovModel& nu, const SpectralData& s, int n);

// Reference laws on the real line for w1_real.
struct RealLaw {
  enum class Kind { gaussian, atoms, dirac0 };
  Kind kind = Kind::dirac0;
  double sigma2 = 0.0;
  std::vector<double> atoms;
  std::vector<double> weights;

  static RealLaw gaussian(double sigma2);  // sigma2 = 0 degenerates to dirac0
  static RealLaw dirac0_law();
  static RealLaw from_atoms(std::vector<double> atoms, std::vector<double> weights);
};

// 1-D Wasserstein distance between a weighted atom list and a reference law,
// via integrated |CDF difference|.
double w1_real(std::span<const double> atoms, std::span<const double> weights, const RealLaw& ref);

}  // namespace gibbslab

#endif
