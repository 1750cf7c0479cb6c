#ifndef GIBBSLAB_PROFILE_HPP
#define GIBBSLAB_PROFILE_HPP

#include <cstddef>
#include <string>
#include <vector>

namespace gibbslab {

// Regularity classes of the Walters sequence W_p, numbered 1-4; `unsupported`
// covers everything the concentration machinery makes no claim about.
enum class Regime {
  unsupported = 0,
  geometric = 1,      // W_p = O(eta^p)
  polynomial = 2,     // W_p = O(p^-alpha), alpha > 1
  log_power = 3,      // W_p = O(theta^{(log p)^alpha}), alpha > 1
  stretched_exp = 4,  // W_p = O(exp(-c p^alpha)), 0 < alpha < 1
};

enum class Provenance { analytic, numeric, upper_bound };

// Analytic description of the variation tail, used for closed-form Walters
// bounds beyond the tabulated horizon.
struct VarTail {
  enum class Kind { none, zero_beyond, geometric, power, ising_series };
  Kind kind = Kind::none;
  double scale = 0.0;     // c in c*rate^n or c*n^-exponent
  double rate = 0.0;      // geometric ratio
  double exponent = 0.0;  // power exponent q, or the Ising decay power
  int depth = 0;          // zero_beyond: var_n = 0 for n >= depth
};

// var_n and W_p sequences of a potential over a finite horizon, with per-entry
// provenance and the analytic tail when known. W is the sequence used as the
// d_phi metric scale; it is kept strictly positive (surrogate floor for
// locally constant potentials).
struct VariationProfile {
  std::vector<double> var;  // var[n], n = 0..horizon
  std::vector<double> W;    // W[p],  p = 0..horizon
  std::vector<Provenance> var_prov;
  std::vector<Provenance> W_prov;
  VarTail tail;
  Regime regime = Regime::unsupported;

  std::size_t horizon() const { return W.empty() ? 0 : W.size() - 1; }

  // W_p, clamped to the last tabulated entry beyond the horizon (entries
  // decrease, so this is an upper bound there).
  double W_at(std::size_t p) const {
    if (W.empty()) return 0.0;
    return W[p < W.size() ? p : W.size() - 1];
  }

  // Throws config_error unless W is strictly positive and non-increasing.
  void validate() const;
};

struct RegimeFit {
  Regime regime = Regime::unsupported;
  double alpha = 0.0;  // decay ratio (regime 1) or exponent (regimes 2-4)
  double r2 = 0.0;
  std::size_t samples = 0;
  std::string transform;  // which fit was selected, for diagnostics
};

}  // namespace gibbslab

#endif
