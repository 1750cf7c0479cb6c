#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gibbslab/concentration.hpp"
#include "gibbslab/errors.hpp"

using namespace gibbslab;

namespace {

const Alphabet a2{2};

MarkovModel fair_coin() { return make_markov(a2, 0, {0.5, 0.5}); }

ObservableSpec centered_indicator(double p) {
  return ObservableSpec::indicator(a2, Word{1}).centered(p);
}

}  // namespace

TEST_CASE("functional specs") {
  const ObservableSpec f = centered_indicator(0.5);
  const FunctionalSpec k = FunctionalSpec::birkhoff(f, 8);
  CHECK(k.arity == 8);
  CHECK(k.sum_lip_sq() == doctest::Approx(8.0));  // Lip_theta(f) = 1
  const Word path{1, 1, 0, 0, 1, 0, 1, 0};
  CHECK(k.eval(path.span()) == doctest::Approx(4.0 - 4.0));

  const FunctionalSpec k2 = k.scaled(2.0);
  CHECK(k2.sum_lip_sq() == doctest::Approx(32.0));
  CHECK(k2.eval(path.span()) == doctest::Approx(0.0));

  const FunctionalSpec sh = FunctionalSpec::shadowing(Word{0}, 4, 0.5);
  CHECK(sh.sum_lip_sq() == doctest::Approx(4.0 / 16.0));
  const Word p2{1, 0, 1, 1};
  CHECK(sh.eval(p2.span()) == doctest::Approx(0.25));
}

TEST_CASE("mgf fit: constant functional reports zero") {
  // K constant after centering: log MGF identically zero
  FunctionalSpec k;
  k.id = "constant";
  k.arity = 2;
  k.context = 0;
  k.lip = {1.0, 1.0};
  k.eval = [](std::span<const Symbol>) { return 3.25; };
  const MgfFit fit = mgf_constant_fit(k, fair_coin(), 2000, {}, 5);
  CHECK(fit.c_hat == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("mgf fit: hoeffding oracle for a bounded coordinate") {
  // single-coordinate indicator under the fair coin: sub-gaussian constant
  // bounded by range^2/8 (attained for the fair coin at small t)
  const FunctionalSpec k = FunctionalSpec::single_coordinate(centered_indicator(0.5));
  const MgfFit fit = mgf_constant_fit(k, fair_coin(), 20000, {}, 6);
  CHECK(fit.c_hat <= 0.125 * 1.15);
  CHECK(fit.c_hat >= 0.125 * 0.8);
}

TEST_CASE("mgf fit: stability across a decade of n") {
  // i.i.d. birkhoff sums: the fitted constant is n-free within 30%
  double c64 = 0.0;
  std::vector<double> cs;
  for (std::size_t n : {64, 256, 1024}) {
    const FunctionalSpec k = FunctionalSpec::birkhoff(centered_indicator(0.5), n);
    const MgfFit fit = mgf_constant_fit(k, fair_coin(), 8000, {}, 7);
    cs.push_back(fit.c_hat);
    if (n == 64) c64 = fit.c_hat;
  }
  for (double c : cs) CHECK(c == doctest::Approx(c64).epsilon(0.30));
}

TEST_CASE("mgf fit: scale covariance") {
  const FunctionalSpec k = FunctionalSpec::birkhoff(centered_indicator(0.5), 128);
  const MgfFit fit1 = mgf_constant_fit(k, fair_coin(), 8000, {}, 8);
  const MgfFit fit2 = mgf_constant_fit(k.scaled(2.0), fair_coin(), 8000, {}, 8);
  CHECK(fit2.c_hat ==
        doctest::Approx(fit1.c_hat).epsilon(0.01 + 3.0 * (fit1.se + fit2.se) / fit1.c_hat));
}

TEST_CASE("tail curve flags and monotonicity") {
  const FunctionalSpec k = FunctionalSpec::birkhoff(centered_indicator(0.5), 256);
  std::vector<double> u_grid;
  const double sigma = std::sqrt(256.0) * 0.5;
  for (double c : {0.5, 1.0, 1.5, 2.0, 3.0}) u_grid.push_back(c * sigma);
  const ConcentrationReport rep = tail_curve(k, fair_coin(), 20000, u_grid, 9);
  CHECK(rep.all_ok());
  // empirical tails and bounds both non-increasing in u
  for (std::size_t i = 1; i < rep.upper.size(); ++i) {
    CHECK(rep.upper[i].p_hat <= rep.upper[i - 1].p_hat);
    CHECK(rep.upper[i].bound <= rep.upper[i - 1].bound);
  }
  // two-sided events contain the one-sided ones; the bound doubles exactly
  for (std::size_t i = 0; i < rep.upper.size(); ++i) {
    CHECK(rep.two_sided[i].p_hat >= rep.upper[i].p_hat);
    CHECK(rep.two_sided[i].bound == doctest::Approx(std::min(1.0, 2.0 * rep.upper[i].bound)));
  }
  // u = 0: bound is 1, trivially satisfied
  const std::vector<double> zero{0.0};
  const ConcentrationReport rep0 = tail_curve(k, fair_coin(), 2000, zero, 10);
  CHECK(rep0.upper[0].bound == 1.0);
  CHECK(rep0.upper[0].ok);

  // deterministic sampler: all tails vanish for u > 0
  const MarkovModel det = make_markov(a2, 1, {1.0, 0.0, 1.0, 0.0});
  const std::vector<double> some{0.1, 0.5};
  const ConcentrationReport repd = tail_curve(k, det, 2000, some, 11);
  for (const TailPoint& p : repd.upper) CHECK(p.p_hat == 0.0);
}

TEST_CASE("variance check") {
  // constant functional: zero variance under any bound
  FunctionalSpec k;
  k.id = "constant";
  k.arity = 1;
  k.context = 0;
  k.lip = {1.0};
  k.eval = [](std::span<const Symbol>) { return 2.0; };
  const VarianceCheck vc = variance_check(k, fair_coin(), 2000, 12);
  CHECK(vc.variance == doctest::Approx(0.0));
  CHECK(vc.ok);

  // single coordinate indicator under bernoulli(p): variance p(1-p)
  const double p = 0.3;
  const MarkovModel bp = make_markov(a2, 0, {1 - p, p});
  const FunctionalSpec single = FunctionalSpec::single_coordinate(centered_indicator(p));
  const VarianceCheck vs = variance_check(single, bp, 40000, 13);
  CHECK(vs.variance == doctest::Approx(p * (1 - p)).epsilon(0.05));
  CHECK(vs.ok);
}

TEST_CASE("birkhoff potential tail pipeline") {
  // psi constant: degenerate, everything concentrates at zero deviation
  const ObservableSpec cst(a2, 1, {1.0, 1.0});
  const std::vector<double> u_grid{0.05, 0.1};
  const ConcentrationReport rep =
      birkhoff_potential_tail(cst, /*lip_phi=*/1.0, fair_coin(), 64, 2000, u_grid, 14);
  for (const TailPoint& pt : rep.upper) CHECK(pt.p_hat == 0.0);
  CHECK(rep.all_ok());

  // psi = -phi for bernoulli(p): S_n psi / n concentrates at the entropy
  const double p = 0.3;
  const MarkovModel bp = make_markov(a2, 0, {1 - p, p});
  const ObservableSpec psi(a2, 1, {-std::log(1 - p), -std::log(p)});
  const double h = -p * std::log(p) - (1 - p) * std::log(1 - p);
  std::vector<double> grid;
  const double sigma_mean = std::sqrt(p * (1 - p)) * std::abs(std::log(p / (1 - p))) / std::sqrt(256.0);
  for (double c : {0.5, 1.0, 2.0, 3.0}) grid.push_back(c * sigma_mean);
  const ConcentrationReport re =
      birkhoff_potential_tail(psi, 1.0, bp, 256, 20000, grid, 15);
  CHECK(re.mean_k / 256.0 == doctest::Approx(h).epsilon(0.02));
  CHECK(re.all_ok());

  CHECK_THROWS_AS(birkhoff_potential_tail(psi, 0.0, bp, 16, 2000, grid, 16), config_error);
}

TEST_CASE("constant assembler") {
  // eps identically zero: the formula floor
  const std::vector<double> zeros(16, 0.0);
  CHECK(constant_assembler(zeros, 1.0, 1.0, 0.5) == doctest::Approx(1.0));

  // eps_k = 2^-k with unit lemma constants and theta = 1/2:
  // 1 + (1*3)^2 * 4 * 1^2 = 37
  std::vector<double> geo;
  for (int k = 1; k <= 40; ++k) geo.push_back(std::pow(2.0, -k));
  CHECK(constant_assembler(geo, 1.0, 1.0, 0.5) == doctest::Approx(37.0).epsilon(1e-6));

  // always at least 1
  CHECK(constant_assembler(geo, 0.1, 0.2, 0.3) >= 1.0);

  // no decay: unsupported
  const std::vector<double> flat(20, 0.7);
  CHECK_THROWS_AS(constant_assembler(flat, 1.0, 1.0, 0.5), unsupported_regime_error);
}

TEST_CASE("proof constant dominates the fitted constant for bernoulli") {
  // cross-module comparison: C_proof from the probe chain is a crude upper
  // diagnostic and lands above the monte carlo fit
  const Potential b = Potential::bernoulli({0.5, 0.5});
  const TransferMatrix tm = build_transfer(b, 6);
  const SpectralData s = spectral_solve(tm);
  const VariationProfile prof = b.profile(32);
  std::vector<double> f(s.mu.size());
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = (i >> 5) & 1 ? 1.0 : 0.0;
  const std::vector<double> eps = convergence_probe(s, tm, f, prof, 16);
  const GFunction g = g_function(s, b);
  const double c1 = std::max(distortion_probe(g, prof, 4, 4000, 17), 1e-6);
  double c2 = 0.0;
  double theta_n = 1.0;
  for (std::size_t n = 0; n <= 32; ++n) {
    c2 = std::max(c2, theta_n / prof.W_at(n));
    theta_n *= 0.5;
  }
  const double c_proof = constant_assembler(eps, c1, c2, 0.5);
  const FunctionalSpec k = FunctionalSpec::birkhoff(centered_indicator(0.5), 128);
  const MgfFit fit = mgf_constant_fit(k, fair_coin(), 8000, {}, 18);
  CHECK(c_proof >= 1.0);
  CHECK(c_proof >= fit.c_hat);
}
