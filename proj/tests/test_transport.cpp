#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "gibbslab/errors.hpp"
#include "gibbslab/io.hpp"
#include "gibbslab/numeric.hpp"
#include "gibbslab/rng.hpp"
#include "gibbslab/transport.hpp"

using namespace gibbslab;

namespace {

const Alphabet a2{2};

BlockMeasure random_measure(int depth, SplitMix64& rng) {
  std::vector<double> masses(a2.pow(depth));
  double sum = 0.0;
  for (double& m : masses) {
    m = rng.uniform01() + 1e-6;
    sum += m;
  }
  for (double& m : masses) m /= sum;
  return BlockMeasure::from_masses(a2, depth, std::move(masses));
}

BlockMeasure point_mass(int depth, std::uint64_t word) {
  std::vector<double> masses(a2.pow(depth), 0.0);
  masses[word] = 1.0;
  return BlockMeasure::from_masses(a2, depth, std::move(masses));
}

BlockMeasure product_bernoulli(int depth, double p) {
  std::vector<double> masses(a2.pow(depth));
  for (std::uint64_t w = 0; w < masses.size(); ++w) {
    double m = 1.0;
    for (int i = 0; i < depth; ++i) m *= ((w >> i) & 1) ? p : (1.0 - p);
    masses[w] = m;
  }
  return BlockMeasure::from_masses(a2, depth, std::move(masses));
}

}  // namespace

TEST_CASE("w1_tree basics") {
  SplitMix64 rng(5);
  const BlockMeasure mu = random_measure(3, rng);
  CHECK(w1_tree(mu, mu, 0.5) == 0.0);

  // point masses separating at index 0: matches d_theta = 1 up to theta^m
  const BlockMeasure d0 = point_mass(3, 0);       // 000
  const BlockMeasure d4 = point_mass(3, 4);       // 100
  const double v = w1_tree(d0, d4, 0.5);
  CHECK(v <= 1.0);
  CHECK(v >= 1.0 - std::pow(0.5, 3) - 1e-12);

  CHECK_THROWS_AS(w1_tree(point_mass(2, 0), point_mass(3, 0), 0.5), std::domain_error);
}

TEST_CASE("w1_lp exact optimum on tiny instances") {
  // identical measures: zero with the diagonal plan
  SplitMix64 rng(6);
  const BlockMeasure mu = random_measure(2, rng);
  const OTResult same = w1_lp(mu, mu, 0.5);
  CHECK(same.value == doctest::Approx(0.0));
  for (const PlanEntry& e : same.plan.entries) CHECK(e.from == e.to);

  // bernoulli(p) vs bernoulli(q) at depth 1: |p - q|
  const BlockMeasure bp = product_bernoulli(1, 0.3);
  const BlockMeasure bq = product_bernoulli(1, 0.55);
  CHECK(w1_lp(bp, bq, 0.5).value == doctest::Approx(0.25).epsilon(1e-10));

  // any instance is dominated by the independent-coupling cost
  const BlockMeasure nu = random_measure(2, rng);
  double indep = 0.0;
  for (std::uint64_t x = 0; x < 4; ++x)
    for (std::uint64_t y = 0; y < 4; ++y) {
      double theta_sep = 0.0;
      if (x != y) {
        const int sep = ((x >> 1) != (y >> 1)) ? 0 : 1;
        theta_sep = std::pow(0.5, sep);
      }
      indep += mu.masses[x] * nu.masses[y] * theta_sep;
    }
  const OTResult r = w1_lp(mu, nu, 0.5);
  CHECK(r.value <= indep + 1e-12);
  CHECK(r.plan.marginal_error(mu, nu) < 1e-9);
}

TEST_CASE("tree formula brackets the LP optimum") {
  // |w1_tree - w1_lp| <= theta^m (+ fp slack) on 200 random pairs per depth
  SplitMix64 rng(7);
  for (int m : {2, 3, 4}) {
    const double slack = std::pow(0.5, m) + 1e-9;
    for (int trial = 0; trial < 200; ++trial) {
      const BlockMeasure mu = random_measure(m, rng);
      const BlockMeasure nu = random_measure(m, rng);
      const double tree = w1_tree(mu, nu, 0.5);
      const OTResult lp = w1_lp(mu, nu, 0.5);
      CHECK(lp.value <= tree + slack);
      CHECK(tree <= lp.value + slack);
      CHECK(lp.plan.marginal_error(mu, nu) < 1e-9);
    }
  }
}

TEST_CASE("w1_tree is a metric on block measures") {
  SplitMix64 rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    const BlockMeasure x = random_measure(3, rng);
    const BlockMeasure y = random_measure(3, rng);
    const BlockMeasure z = random_measure(3, rng);
    CHECK(w1_tree(x, y, 0.5) == w1_tree(y, x, 0.5));
    CHECK(w1_tree(x, z, 0.5) <= w1_tree(x, y, 0.5) + w1_tree(y, z, 0.5) + 1e-9);
  }
}

TEST_CASE("dbar_n couplings") {
  SplitMix64 rng(9);
  const BlockMeasure mu = random_measure(3, rng);
  CHECK(dbar_n(mu, mu).value == doctest::Approx(0.0));

  // product bernoulli pairs: n |p - q| via coordinatewise maximal coupling
  for (int n : {1, 2, 3}) {
    const BlockMeasure bp = product_bernoulli(n, 0.3);
    const BlockMeasure bq = product_bernoulli(n, 0.55);
    CHECK(dbar_n(bp, bq).value == doctest::Approx(n * 0.25).epsilon(1e-9));
  }

  // disjoint point masses: the hamming distance of the supports
  const BlockMeasure da = point_mass(3, 0b010);
  const BlockMeasure db = point_mass(3, 0b111);
  CHECK(dbar_n(da, db).value == doctest::Approx(2.0));

  // normalized value lies in [0,1]; depth-1 equals half the l1 distance
  const BlockMeasure x = random_measure(1, rng);
  const BlockMeasure y = random_measure(1, rng);
  double l1 = 0.0;
  for (std::size_t i = 0; i < 2; ++i) l1 += std::abs(x.masses[i] - y.masses[i]);
  CHECK(dbar_n(x, y).value == doctest::Approx(l1 / 2.0).epsilon(1e-12));
  CHECK(dbar_n(x, y).value <= 1.0);

  CHECK_THROWS_AS(dbar_n(random_measure(3, rng), random_measure(3, rng), /*guard=*/4),
                  resource_error);
}

TEST_CASE("relative entropy of blocks") {
  SplitMix64 rng(10);
  const BlockMeasure mu = random_measure(3, rng);
  CHECK(relative_entropy_n(mu, mu) == 0.0);

  // KL additivity for products, checked numerically at n <= 4
  const double p = 0.3, q = 0.6;
  const double kl1 = p * std::log(p / q) + (1 - p) * std::log((1 - p) / (1 - q));
  for (int n : {1, 2, 3, 4}) {
    const BlockMeasure bp = product_bernoulli(n, p);
    const BlockMeasure bq = product_bernoulli(n, q);
    CHECK(relative_entropy_n(bp, bq) == doctest::Approx(n * kl1).epsilon(1e-10));
  }

  // point mass: -log mu[w]
  const BlockMeasure pm = point_mass(3, 5);
  CHECK(relative_entropy_n(pm, mu) == doctest::Approx(-std::log(mu.masses[5])).epsilon(1e-12));

  // nu charging a mu-null word diverges
  const BlockMeasure other = point_mass(3, 2);
  CHECK(std::isinf(relative_entropy_n(other, pm)));

  // nonnegative, zero only at equality
  for (int trial = 0; trial < 20; ++trial) {
    const BlockMeasure x = random_measure(3, rng);
    const BlockMeasure y = random_measure(3, rng);
    CHECK(relative_entropy_n(x, y) >= 0.0);
    CHECK(relative_entropy_n(x, y) > 0.0);
  }
}

TEST_CASE("relative entropy rate") {
  // nu equal to the equilibrium state of a markov potential: rate 0
  const MarkovModel chain = make_markov(a2, 1, {0.8, 0.2, 0.3, 0.7});
  const Potential induced = markov_potential(chain);
  const SpectralData s = spectral_solve(build_transfer(induced, 6));
  CHECK(relative_entropy_rate(chain, s, induced) == doctest::Approx(0.0).epsilon(1e-8));

  // uniform nu against the zero potential
  const MarkovModel uniform = make_markov(a2, 0, {0.5, 0.5});
  const Potential zero = Potential::constant(Alphabet{2}, 0.0);
  const SpectralData sz = spectral_solve(build_transfer(zero, 6));
  CHECK(relative_entropy_rate(uniform, sz, zero) == doctest::Approx(0.0).epsilon(1e-10));

  // bernoulli(q) against a bernoulli(p) potential: the KL rate, which also
  // matches H_n/n as n grows
  const double p = 0.3, q = 0.45;
  const MarkovModel nu_q = make_markov(a2, 0, {1 - q, q});
  const Potential phi_p = Potential::bernoulli({1 - p, p});
  const SpectralData sp = spectral_solve(build_transfer(phi_p, 8));
  const double kl = q * std::log(q / p) + (1 - q) * std::log((1 - q) / (1 - p));
  const double rate = relative_entropy_rate(nu_q, sp, phi_p);
  CHECK(rate == doctest::Approx(kl).epsilon(1e-9));
  const double h8 = relative_entropy_n(BlockMeasure::from_markov(nu_q, 8),
                                       BlockMeasure::from_spectral(sp, 8));
  CHECK(h8 / 8.0 == doctest::Approx(rate).epsilon(1e-9));
}

TEST_CASE("pinsker gap") {
  // nu equal to the equilibrium: both sides vanish, ratio defined as 0
  const Potential phi = Potential::markov(a2, 2, {0.2, -0.5, 0.4, -0.1});
  const SpectralData s = spectral_solve(build_transfer(phi, 6));
  const MarkovModel self = markov_from_equilibrium(s, 3);
  const PinskerGap self_gap = pinsker_gap(self, s, 4);
  CHECK(self_gap.dbar <= 2e-5);  // order-3 approximation of a depth-2 potential is exact
  CHECK(self_gap.ratio <= 0.51);  // ratio stays under the pinsker constant

  // bernoulli p vs q at n = 3: closed forms on both sides
  const double p = 0.4, q = 0.45;
  const Potential phi_p = Potential::bernoulli({1 - p, p});
  const SpectralData sp = spectral_solve(build_transfer(phi_p, 5));
  const MarkovModel nu_q = make_markov(a2, 0, {1 - q, q});
  const PinskerGap gap = pinsker_gap(nu_q, sp, 3);
  const double kl = q * std::log(q / p) + (1 - q) * std::log((1 - q) / (1 - p));
  CHECK(gap.dbar == doctest::Approx(3.0 * std::abs(p - q)).epsilon(1e-8));
  CHECK(gap.rhs_factor == doctest::Approx(std::sqrt(3.0 * 3.0 * kl)).epsilon(1e-8));
  CHECK(gap.ratio < 1.0);

  // sweep of random markov nu against a fixed lipschitz-potential
  // equilibrium: the fitted constant is finite and holds up on held-out
  // instances within 10%
  SplitMix64 rng(11);
  auto batch_max = [&](int trials) {
    double b = 0.0;
    for (int trial = 0; trial < trials; ++trial) {
      std::vector<double> rows(4);
      rows[0] = 0.05 + 0.9 * rng.uniform01();
      rows[1] = 1.0 - rows[0];
      rows[2] = 0.05 + 0.9 * rng.uniform01();
      rows[3] = 1.0 - rows[2];
      const MarkovModel nu = make_markov(a2, 1, rows);
      const PinskerGap g = pinsker_gap(nu, s, 4);
      CHECK(std::isfinite(g.ratio));
      b = std::max(b, g.ratio);
    }
    return b;
  };
  const double b_hat = batch_max(200);
  const double b_holdout = batch_max(100);
  CHECK(b_hat > 0.0);
  CHECK(b_hat < 10.0);
  CHECK(b_holdout <= 1.1 * b_hat);
}

TEST_CASE("w1_real") {
  // identical atom lists
  const std::vector<double> atoms{0.5, -1.0, 2.0};
  const std::vector<double> weights{0.25, 0.5, 0.25};
  CHECK(w1_real(atoms, weights, RealLaw::from_atoms(atoms, weights)) == doctest::Approx(0.0));

  // dirac vs dirac: |a - b|
  const std::vector<double> one_atom{1.5}, unit{1.0};
  CHECK(w1_real(one_atom, unit, RealLaw::from_atoms({-0.5}, {1.0})) == doctest::Approx(2.0));

  // dirac0 reference: weighted absolute first moment
  CHECK(w1_real(atoms, weights, RealLaw::dirac0_law()) ==
        doctest::Approx(0.25 * 0.5 + 0.5 * 1.0 + 0.25 * 2.0));

  // sigma^2 = 0 degenerates to dirac0
  const std::vector<double> zero_atom{0.0};
  CHECK(w1_real(zero_atom, unit, RealLaw::gaussian(0.0)) == doctest::Approx(0.0));

  // point mass at a vs gaussian: E|sigma Z - a| closed form
  const double a = 0.5, sigma = 0.5;
  const double z = a / sigma;
  const double closed = sigma * (2.0 * normal_pdf(z) + z * (2.0 * normal_cdf(z) - 1.0));
  const std::vector<double> a_atom{a};
  CHECK(w1_real(a_atom, unit, RealLaw::gaussian(sigma * sigma)) ==
        doctest::Approx(closed).epsilon(1e-9));

  const std::vector<double> neg_weight{-0.5};
  CHECK_THROWS_AS(w1_real(one_atom, neg_weight, RealLaw::dirac0_law()), std::domain_error);
}

TEST_CASE("transport plan triplet export round-trips") {
  SplitMix64 rng(13);
  const BlockMeasure mu = random_measure(3, rng);
  const BlockMeasure nu = random_measure(3, rng);
  const OTResult r = w1_lp(mu, nu, 0.5);
  const auto path = std::filesystem::temp_directory_path() / "gibbslab-plan.csv";
  write_plan_csv(path, r.plan, json{{"test", "plan"}});
  const CsvFile csv = read_table_csv(path);
  CHECK(csv.columns == std::vector<std::string>{"from", "to", "mass"});
  REQUIRE(csv.rows.size() == r.plan.entries.size());
  double mass = 0.0;
  for (const auto& row : csv.rows) mass += row[2];
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-9));
  std::filesystem::remove(path);
}

TEST_CASE("w1_real: monte carlo gaussian sample") {
  // 10^5 standard-normal pseudo-samples against G(0,1): small, and matching
  // a trapezoid empirical-CDF integration oracle
  SplitMix64 rng(12);
  const std::size_t n = 100000;
  std::vector<double> sample(n), weights(n, 1.0 / double(n));
  for (double& v : sample) v = rng.normal();
  const double w1 = w1_real(sample, weights, RealLaw::gaussian(1.0));
  CHECK(w1 < 0.02);

  // oracle: integrate |F_hat - Phi| on a fine grid
  std::sort(sample.begin(), sample.end());
  double oracle = 0.0;
  const double lo = -6.0, hi = 6.0;
  const int grid = 200000;
  double prev_f = 0.0, prev_t = lo;
  std::size_t idx = 0;
  for (int i = 1; i <= grid; ++i) {
    const double t = lo + (hi - lo) * i / grid;
    while (idx < n && sample[idx] <= t) ++idx;
    const double f_hat = double(idx) / double(n);
    const double mid = 0.5 * (prev_t + t);
    oracle += std::abs(0.5 * (prev_f + f_hat) - normal_cdf(mid)) * (t - prev_t);
    prev_f = f_hat;
    prev_t = t;
  }
  CHECK(w1 == doctest::Approx(oracle).epsilon(0.02));
}
