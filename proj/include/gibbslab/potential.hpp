#ifndef GIBBSLAB_POTENTIAL_HPP
#define GIBBSLAB_POTENTIAL_HPP

#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <vector>

#include "gibbslab/profile.hpp"
#include "gibbslab/words.hpp"

namespace gibbslab {

// An evaluable potential on one-sided sequence space, truncated to finite
// words by evaluating at the periodic extension www... of the given word.
// Immutable after construction; evaluation is pure and thread-safe.
class Potential {
public:
  enum class Kind { constant, depth1, markov, long_range_ising, pollicott, custom };

  static Potential constant(Alphabet a, double value);
  // phi(x) = values[x^0]
  static Potential depth1(Alphabet a, std::vector<double> values);
  // depth-1 potential log p_{x^0}; probs must be a probability vector
  static Potential bernoulli(std::vector<double> probs);
  // phi(x) = table[word_index(x^{0..depth-1})]
  static Potential markov(Alphabet a, int depth, std::vector<double> table);
  // phi(x) = -sum_{m>=2} s(x^0) s(x^{m-1}) / m^power on A={0,1}, s(b)=2b-1
  static Potential long_range_ising(double power);
  // phi(x) = v_k on [0^k 1] with v_0 given and v_k = k^-exponent for k>=1;
  // phi = 0 on the all-zeros point
  static Potential pollicott(double exponent = 2.0, double v0 = 2.0);
  static Potential custom(Alphabet a, int depth, std::vector<double> table);

  Kind kind() const { return kind_; }
  const Alphabet& alphabet() const { return alphabet_; }
  double theta() const { return theta_; }
  Potential& set_theta(double theta);

  // phi at the periodic extension of w; exact (no truncation error) for
  // locally constant kinds once w covers their depth. Throws on empty w.
  double eval(std::span<const Symbol> w) const;

  // Smallest d with phi depending on the first d symbols only; -1 for the
  // infinite-range kinds.
  int locally_constant_depth() const;

  double sup_bound() const;  // recorded ||phi||_inf estimate

  // var_n and W_p up to `horizon`, with analytic entries where available,
  // the analytic tail family, a strictly positive W (theta^p surrogate floor
  // for locally constant potentials) and the classified regime.
  VariationProfile profile(int horizon = 64) const;

  // Parameter access for serialization.
  double ising_power() const { return ising_power_; }
  double pollicott_exponent() const { return pollicott_exponent_; }
  double pollicott_v0() const { return pollicott_v0_; }
  int table_depth() const { return table_depth_; }
  const std::vector<double>& table() const { return table_; }
  std::string kind_name() const;

private:
  Potential() = default;

  double eval_ising(std::span<const Symbol> w) const;
  double eval_pollicott(std::span<const Symbol> w) const;
  std::shared_ptr<const std::vector<double>> ising_residue_coeffs(std::size_t period) const;

  Kind kind_ = Kind::constant;
  Alphabet alphabet_{2};
  double theta_ = 0.5;
  double constant_value_ = 0.0;
  int table_depth_ = 0;
  std::vector<double> table_;
  double ising_power_ = 4.0;
  double pollicott_exponent_ = 2.0;
  double pollicott_v0_ = 2.0;

  // residue-class coefficient cache for the Ising series, keyed by period;
  // shared across copies (the series parameters are fixed at construction)
  struct IsingCache {
    std::mutex mutex;
    std::map<std::size_t, std::shared_ptr<const std::vector<double>>> by_period;
  };
  std::shared_ptr<IsingCache> ising_cache_ = std::make_shared<IsingCache>();
};

// Finite-depth surrogate of var_n(phi): max over word pairs in A^k agreeing
// on the first n symbols of |phi difference|. A lower bound of the true sup.
double variation_numeric(const Potential& phi, int n, int k);

// Upper bound for W_p via the variation tail sum, closed form per family.
// Throws unsupported_regime_error when the variation is not summable.
double walters_bound(const VariationProfile& profile, int p);

// Best-fit regularity class from the tabulated W samples.
RegimeFit regime_classify(const VariationProfile& profile);

}  // namespace gibbslab

#endif
