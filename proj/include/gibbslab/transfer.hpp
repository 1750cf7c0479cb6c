#ifndef GIBBSLAB_TRANSFER_HPP
#define GIBBSLAB_TRANSFER_HPP

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "gibbslab/potential.hpp"
#include "gibbslab/words.hpp"

namespace gibbslab {

// Cylinder truncation of Ruelle's transfer operator at depth k. Functions on
// A^k are vectors indexed by word_index; the operator weight of the one-step
// extension u = a.w in A^{k+1} is exp(phi(u)) at the periodic extension.
//
// Index conventions for u in A^{k+1}:
//   suffix(u)  = u mod |A|^k   (the target word w: u = a.w)
//   prefix(u)  = u div |A|     (the preimage cylinder the mass comes from)
struct TransferMatrix {
  Alphabet alphabet;
  int depth = 1;                // k
  std::vector<double> weight;   // |A|^{k+1} entries, strictly positive

  std::size_t states() const { return static_cast<std::size_t>(alphabet.pow(depth)); }

  // (P f)(w) = sum_a exp(phi(a.w)) f(prefix(a.w))
  void apply(std::span<const double> f, std::span<double> out) const;
  // adjoint action on measures: (P* m)(v) = sum_b weight(v.b) m(suffix(v.b))
  void apply_adjoint(std::span<const double> m, std::span<double> out) const;
};

// Dominant eigendata of the truncated operator: P h = lambda h, P* nu =
// lambda nu, normalized so that nu is a probability vector and sum h nu = 1.
// The equilibrium cylinder measure is mu = h nu.
struct SpectralData {
  Alphabet alphabet;
  int depth = 1;
  double theta = 0.5;
  double lambda = 1.0;
  double pressure = 0.0;  // log lambda
  std::vector<double> h;   // strictly positive on A^k
  std::vector<double> nu;  // probability vector on A^k
  std::vector<double> mu;  // h * nu, probability vector on A^k
  double residual = 0.0;   // max of the two eigen-equation residuals (sup norm)
  int iterations = 0;

  // mu marginalized to A^m (prefix marginal), m <= depth.
  std::vector<double> marginal(int m) const;
};

// Normalized one-step weights g(a.w) = h(prefix) exp(phi(a.w)) / (lambda h(w)).
// Rows sum to 1 over the leading symbol a for every w.
struct GFunction {
  Alphabet alphabet;
  int depth = 1;              // k; g lives on A^{k+1}
  std::vector<double> g;

  std::size_t states() const { return static_cast<std::size_t>(alphabet.pow(depth)); }

  // (P~ f)(w) = sum_a g(a.w) f(prefix(a.w)); preserves constants.
  void apply_normalized(std::span<const double> f, std::span<double> out) const;
  // adjoint action on measures; fixes mu = h nu.
  void apply_adjoint_normalized(std::span<const double> m, std::span<double> out) const;

  // max_w |sum_a g(a.w) - 1|
  double row_sum_error() const;
};

inline constexpr std::size_t default_transfer_budget = std::size_t(1) << 24;

// Largest depth k with |A|^{k+1} <= 2^20.
int default_depth(const Alphabet& a);

TransferMatrix build_transfer(const Potential& phi, int depth,
                              std::size_t budget = default_transfer_budget);

// Power iteration on the operator and its adjoint with l1 renormalization.
// Convergence is declared when successive normalized iterates differ by less
// than tol in sup norm; throws numeric_error (with the last residual) on
// non-convergence.
SpectralData spectral_solve(const TransferMatrix& m, double tol = 1e-13, int max_iter = 200000);

GFunction g_function(const SpectralData& s, const Potential& phi);

// eps_hat_n = ||P~^n f - sum f mu||_inf / ||f||_{L_phi} for n = 1..n_max.
// The L_phi norm is computed from the tabulated f and the potential's W
// profile. f is a vector on A^k.
std::vector<double> convergence_probe(const SpectralData& s, const TransferMatrix& m,
                                      std::span<const double> f, const VariationProfile& profile,
                                      int n_max);

// Empirical sup over sampled pairs of |1 - g^(j)(x')/g^(j)(y')| / d_phi(x,y),
// j <= max_order; a lower bound of the distortion constant.
double distortion_probe(const GFunction& g, const VariationProfile& profile, int max_order,
                        int pairs, std::uint64_t seed);

// Extremes over w in A^n of mu[w] / exp(-n P(phi) + S_n phi(x_w)) with x_w
// the periodic extension of w.
std::pair<double, double> gibbs_ratio_check(const SpectralData& s, const Potential& phi, int n);

}  // namespace gibbslab

#endif
