#include "gibbslab/experiments.hpp"

#include <algorithm>
#include <cmath>

#include "gibbslab/errors.hpp"
#include "gibbslab/numeric.hpp"
#include "gibbslab/parallel.hpp"
#include "gibbslab/transport.hpp"

namespace gibbslab {

namespace {

SpectralData solve_spectral(const ExperimentConfig& cfg) {
  const TransferMatrix m = build_transfer(cfg.potential, cfg.depth);
  SpectralData s = spectral_solve(m, cfg.spectral_tol, cfg.spectral_max_iter);
  s.theta = cfg.potential.theta();
  return s;
}

ObservableSpec observable_from_params(const json& spec, const SpectralData& s,
                                      const Potential& phi) {
  if (spec.is_null()) {
    // default: indicator of [1], centered against mu
    ObservableSpec f = ObservableSpec::indicator(s.alphabet, Word{1}, phi.theta());
    const std::vector<double> mu1 = s.marginal(1);
    return f.centered(mu1[1]);
  }
  check_keys(spec, {"kind", "word", "depth", "center"}, "observable");
  const std::string kind = spec.value("kind", "indicator");
  ObservableSpec f = [&]() {
    if (kind == "indicator") {
      std::vector<Symbol> syms;
      for (int v : spec.value("word", std::vector<int>{1})) syms.push_back(static_cast<Symbol>(v));
      return ObservableSpec::indicator(s.alphabet, Word(std::move(syms)), phi.theta());
    }
    if (kind == "potential")
      return ObservableSpec::from_potential(phi, spec.value("depth", std::min(s.depth, 10)));
    throw config_error("unknown observable kind '" + kind + "'");
  }();
  if (spec.value("center", true)) {
    // center against mu at the observable's depth
    const std::vector<double> mu_d = s.marginal(f.depth());
    double mean_f = 0.0;
    for (std::size_t w = 0; w < mu_d.size(); ++w) mean_f += f.table()[w] * mu_d[w];
    f = f.centered(mean_f);
  }
  return f;
}

}  // namespace

json ExperimentConfig::resolved() const {
  json j;
  j["potential"] = potential_to_json(potential);
  j["depth"] = depth;
  j["order"] = order;
  j["seed"] = seed;
  j["threads"] = threads;
  j["spectral"] = {{"tol", spectral_tol}, {"max_iter", spectral_max_iter}};
  j["params"] = params.is_null() ? json::object() : params;
  return j;
}

ExperimentResult run_markov_approx_speed(const ExperimentConfig& cfg) {
  check_keys(cfg.params, {"orders", "reference_order", "block_depth"}, "markov-approx params");
  std::vector<int> orders = cfg.params.value("orders", std::vector<int>{2, 3, 4, 5, 6});
  std::sort(orders.begin(), orders.end());
  const int reference = cfg.params.value("reference_order", orders.back() + 2);
  const int block_depth = cfg.params.value("block_depth", 6);
  if (reference + 1 > cfg.depth)
    throw config_error("markov-approx needs depth >= reference_order + 1");
  if (orders.front() < 0 || orders.back() >= reference)
    throw config_error("markov-approx orders must lie in [0, reference_order)");

  const SpectralData s = solve_spectral(cfg);
  const MarkovModel ref_model = markov_from_equilibrium(s, reference);
  const BlockMeasure ref_blocks = BlockMeasure::from_markov(ref_model, block_depth);
  const VariationProfile prof = cfg.potential.profile(std::max(64, orders.back() + 2));

  ExperimentResult out;
  out.id = "markov-approx";
  Table t;
  t.name = "speed";
  t.columns = {"m", "dbar_n", "dbar_per_n", "var_m", "ratio", "ok"};
  double rho_hat = 0.0;
  double prev = std::numeric_limits<double>::infinity();
  bool mono = true;
  std::vector<std::vector<double>> rows;
  for (int m : orders) {
    const MarkovModel approx = markov_from_equilibrium(s, m);
    const BlockMeasure blocks = BlockMeasure::from_markov(approx, block_depth);
    const double dbar = dbar_n(blocks, ref_blocks).value;
    const double per_n = dbar / static_cast<double>(block_depth);
    const double var_m = prof.var[static_cast<std::size_t>(m)];
    const double ratio = var_m > 0.0 ? per_n / var_m : 0.0;
    rho_hat = std::max(rho_hat, ratio);
    if (per_n > prev + 1e-9) mono = false;
    prev = per_n;
    rows.push_back({static_cast<double>(m), dbar, per_n, var_m, ratio, 1.0});
  }
  // bound flags: dbar/n <= rho_hat * var_m, with exact zero expected when
  // var_m vanishes (the approximation is exact beyond the potential depth)
  for (auto& row : rows) {
    const double per_n = row[2], var_m = row[3];
    const bool ok = var_m > 0.0 ? per_n <= rho_hat * var_m + 1e-12 : per_n <= 1e-9;
    row[5] = ok ? 1.0 : 0.0;
    if (!ok) out.flags_ok = false;
  }
  if (!mono) out.flags_ok = false;
  t.rows = std::move(rows);
  out.tables.push_back(std::move(t));
  out.summary = {{"rho_hat", rho_hat},
                 {"reference_order", reference},
                 {"block_depth", block_depth},
                 {"monotone", mono}};
  return out;
}

ExperimentResult run_empirical_measure_convergence(const ExperimentConfig& cfg) {
  check_keys(cfg.params, {"lengths", "samples", "projection_depth"}, "empirical-measure params");
  const std::vector<std::size_t> lengths =
      cfg.params.value("lengths", std::vector<std::size_t>{100, 1000, 10000, 100000});
  const std::size_t samples = cfg.params.value("samples", std::size_t{200});
  const int proj = cfg.params.value("projection_depth", 4);

  const SpectralData s = solve_spectral(cfg);
  const BlockMeasure ref = BlockMeasure::from_spectral(s, proj);
  const MarkovModel model = markov_from_equilibrium(s, cfg.order);
  const double theta = cfg.potential.theta();

  ExperimentResult out;
  out.id = "empirical-measure";
  Table t;
  t.name = "convergence";
  t.columns = {"n", "mean_dk", "width", "samples"};
  std::vector<double> log_n, log_width;
  std::vector<double> means;
  for (std::size_t li = 0; li < lengths.size(); ++li) {
    const std::size_t n = lengths[li];
    std::vector<double> dks(samples);
    parallel_for_slots(samples, cfg.threads, [&](std::size_t i) {
      PathSampler sampler(model, derive_stream(cfg.seed, 1000 * (li + 1) + i));
      std::vector<Symbol> path(n + static_cast<std::size_t>(proj) - 1);
      for (auto& sym : path) sym = sampler.next();
      const std::vector<double> counts = empirical_block_measure(s.alphabet, path, proj, path.size());
      dks[i] = w1_tree(BlockMeasure::from_masses(s.alphabet, proj, counts), ref, theta);
    });
    const double m = mean(dks);
    const double width = std::sqrt(sample_variance(dks));
    means.push_back(m);
    log_n.push_back(std::log(static_cast<double>(n)));
    log_width.push_back(std::log(std::max(width, 1e-300)));
    t.rows.push_back({static_cast<double>(n), m, width, static_cast<double>(samples)});
  }
  const LinearFit fit = linear_fit(log_n, log_width);
  const bool slope_ok = std::abs(fit.slope + 0.5) <= 0.15;
  const bool mean_ok = means.back() < means.front();
  out.flags_ok = slope_ok && mean_ok;
  out.tables.push_back(std::move(t));
  out.summary = {{"width_slope", fit.slope},
                 {"width_slope_r2", fit.r2},
                 {"slope_ok", slope_ok},
                 {"mean_decreasing", mean_ok},
                 {"projection_depth", proj}};
  return out;
}

ExperimentResult run_asclt(const ExperimentConfig& cfg) {
  check_keys(cfg.params, {"lengths", "seeds", "observable", "i_max"}, "asclt params");
  std::vector<std::size_t> lengths =
      cfg.params.value("lengths", std::vector<std::size_t>{1000, 10000, 100000});
  std::sort(lengths.begin(), lengths.end());
  const std::vector<std::uint64_t> seeds =
      cfg.params.value("seeds", std::vector<std::uint64_t>{1, 2, 3});
  const int i_max = cfg.params.value("i_max", 64);

  const SpectralData s = solve_spectral(cfg);
  const GFunction g = g_function(s, cfg.potential);
  const ObservableSpec f =
      observable_from_params(cfg.params.contains("observable") ? cfg.params["observable"] : json(),
                             s, cfg.potential);
  const SigmaSquared sigma2 = sigma_squared(f, s, g, i_max);
  const RealLaw target = RealLaw::gaussian(std::max(0.0, sigma2.value));
  const MarkovModel model = markov_from_equilibrium(s, cfg.order);

  ExperimentResult out;
  out.id = "asclt";
  Table t;
  t.name = "w1";
  t.columns = {"seed", "N", "w1", "ok"};
  bool all_decreasing = true;
  const std::size_t n_max = lengths.back();
  for (std::uint64_t seed : seeds) {
    PathSampler sampler(model, derive_stream(cfg.seed, 0xA5C17 + seed));
    std::vector<Symbol> path(n_max + static_cast<std::size_t>(f.depth()) - 1);
    for (auto& sym : path) sym = sampler.next();
    const ASCLTState state = asclt_accumulate(f, path, n_max);
    double prev = std::numeric_limits<double>::infinity();
    bool decreasing = true;
    for (std::size_t N : lengths) {
      double l_n = 0.0;
      for (std::size_t n = 1; n <= N; ++n) l_n += 1.0 / static_cast<double>(n);
      std::vector<double> weights(N);
      for (std::size_t n = 1; n <= N; ++n) weights[n - 1] = 1.0 / (static_cast<double>(n) * l_n);
      const std::span<const double> atoms(state.atoms().data(), N);
      const double w1 = w1_real(atoms, weights, target);
      decreasing = decreasing && (w1 < prev);
      prev = w1;
      t.rows.push_back({static_cast<double>(seed), static_cast<double>(N), w1, 0.0});
    }
    for (std::size_t i = t.rows.size() - lengths.size(); i < t.rows.size(); ++i)
      t.rows[i][3] = decreasing ? 1.0 : 0.0;
    all_decreasing = all_decreasing && decreasing;
  }
  out.flags_ok = all_decreasing;
  out.tables.push_back(std::move(t));
  out.summary = {{"sigma2_hat", sigma2.value},
                 {"sigma2_last_term", sigma2.last_term},
                 {"sigma2_truncation_warning", sigma2.truncation_warning},
                 {"decreasing_all_seeds", all_decreasing}};
  return out;
}

ExperimentResult run_shadowing(const ExperimentConfig& cfg) {
  check_keys(cfg.params, {"cylinder", "n", "samples", "u_grid", "fit_samples"}, "shadowing params");
  std::vector<Symbol> cyl_syms;
  for (int v : cfg.params.value("cylinder", std::vector<int>{0}))
    cyl_syms.push_back(static_cast<Symbol>(v));
  const Word cylinder(std::move(cyl_syms));
  const std::size_t n = cfg.params.value("n", std::size_t{10000});
  const std::size_t samples = cfg.params.value("samples", std::size_t{10000});
  const std::size_t fit_samples = cfg.params.value("fit_samples", std::size_t{5000});
  const std::vector<double> u_grid =
      cfg.params.value("u_grid", std::vector<double>{0.5, 1.0, 1.5, 2.0, 2.5, 3.0});

  const SpectralData s = solve_spectral(cfg);
  const MarkovModel model = markov_from_equilibrium(s, cfg.order);
  const double theta = cfg.potential.theta();
  const FunctionalSpec K = FunctionalSpec::shadowing(cylinder, n, theta);
  const MgfFit fit = mgf_constant_fit(K, model, fit_samples, {}, derive_stream(cfg.seed, 0x5AD), cfg.threads);

  const std::vector<double> mu_k = s.marginal(static_cast<int>(cylinder.size()));
  const double mu_a = mu_k[word_index(s.alphabet, cylinder)];
  const double u_a = 2.0 * std::sqrt(std::max(0.0, -fit.c_hat * std::log(mu_a)));

  std::vector<double> scores(samples);
  parallel_for_slots(samples, cfg.threads, [&](std::size_t i) {
    PathSampler sampler(model, derive_stream(cfg.seed, 0x5AD00 + i));
    std::vector<Symbol> path(K.path_length());
    for (auto& sym : path) sym = sampler.next();
    scores[i] = K.eval(path);
  });

  ExperimentResult out;
  out.id = "shadowing";
  Table t;
  t.name = "quantiles";
  t.columns = {"u", "level", "empirical_q", "bound", "ok"};
  const double sqrt_n = std::sqrt(static_cast<double>(n));
  for (double u : u_grid) {
    const double level = 1.0 - std::exp(-u * u / (4.0 * std::max(fit.c_hat, 1e-300)));
    const double q = quantile(scores, level);
    const double bound = (u_a + u) / sqrt_n;
    const bool ok = q <= bound + 1e-12;
    if (!ok) out.flags_ok = false;
    t.rows.push_back({u, level, q, bound, ok ? 1.0 : 0.0});
  }
  out.tables.push_back(std::move(t));
  out.summary = {{"c_hat", fit.c_hat},
                 {"c_hat_se", fit.se},
                 {"u_a", u_a},
                 {"mu_a", mu_a},
                 {"n", n},
                 {"samples", samples}};
  return out;
}

ExperimentResult run_block_frequency(const ExperimentConfig& cfg) {
  check_keys(cfg.params,
             {"k_values", "n", "samples", "u_grid", "zeta", "lengths", "trend_samples",
              "fit_samples"},
             "block-frequency params");
  const std::vector<int> k_values = cfg.params.value("k_values", std::vector<int>{1, 2, 3});
  const std::size_t n = cfg.params.value("n", std::size_t{10000});
  const std::size_t samples = cfg.params.value("samples", std::size_t{2000});
  const std::size_t fit_samples = cfg.params.value("fit_samples", std::size_t{2000});
  const std::size_t trend_samples = cfg.params.value("trend_samples", std::size_t{200});
  const double zeta = cfg.params.value("zeta", 0.4);
  const std::vector<std::size_t> lengths =
      cfg.params.value("lengths", std::vector<std::size_t>{1000, 10000, 100000});
  const std::vector<double> u_grid =
      cfg.params.value("u_grid", std::vector<double>{0.5, 1.0, 1.5, 2.0, 2.5});

  const SpectralData s = solve_spectral(cfg);
  const MarkovModel model = markov_from_equilibrium(s, cfg.order);
  const double theta = cfg.potential.theta();
  const double log_a = std::log(static_cast<double>(s.alphabet.size));

  ExperimentResult out;
  out.id = "block-frequency";

  Table tq;
  tq.name = "quantiles";
  tq.columns = {"k", "n", "u", "level", "empirical_q", "envelope", "ok"};
  for (std::size_t ki = 0; ki < k_values.size(); ++ki) {
    const int k = k_values[ki];
    const FunctionalSpec K = FunctionalSpec::block_deviation(s, k, n);
    const MgfFit fit =
        mgf_constant_fit(K, model, fit_samples, {}, derive_stream(cfg.seed, 0xB10C + ki), cfg.threads);
    const double c = 2.0 * std::sqrt(2.0 * std::max(fit.c_hat, 0.0) * log_a);
    std::vector<double> devs(samples);
    parallel_for_slots(samples, cfg.threads, [&](std::size_t i) {
      PathSampler sampler(model, derive_stream(cfg.seed, 0xB10C00 * (ki + 1) + i));
      std::vector<Symbol> path(K.path_length());
      for (auto& sym : path) sym = sampler.next();
      devs[i] = K.eval(path);
    });
    const double windows = static_cast<double>(n - static_cast<std::size_t>(k) + 1);
    for (double u : u_grid) {
      const double level = 1.0 - std::exp(-u * u / (4.0 * std::max(fit.c_hat, 1e-300)));
      const double q = quantile(devs, level);
      const double envelope =
          (u + c * std::sqrt(static_cast<double>(k))) * std::pow(theta, -k) / std::sqrt(windows);
      const bool ok = q <= envelope + 1e-12;
      if (!ok) out.flags_ok = false;
      tq.rows.push_back({static_cast<double>(k), static_cast<double>(n), u, level, q, envelope,
                         ok ? 1.0 : 0.0});
    }
  }
  out.tables.push_back(std::move(tq));

  // k(n) = zeta log n growth regime
  Table tt;
  tt.name = "trend";
  tt.columns = {"n", "k", "median_dev"};
  std::vector<double> medians;
  for (std::size_t li = 0; li < lengths.size(); ++li) {
    const std::size_t len = lengths[li];
    const int k = std::max(1, std::min(s.depth, static_cast<int>(std::lround(
                                                    zeta * std::log(static_cast<double>(len))))));
    std::vector<double> devs(trend_samples);
    parallel_for_slots(trend_samples, cfg.threads, [&](std::size_t i) {
      PathSampler sampler(model, derive_stream(cfg.seed, 0x7E4D00 * (li + 1) + i));
      std::vector<Symbol> path(len + static_cast<std::size_t>(k) - 1);
      for (auto& sym : path) sym = sampler.next();
      devs[i] = max_block_deviation(path, s, k, len);
    });
    const double med = median(devs);
    medians.push_back(med);
    tt.rows.push_back({static_cast<double>(len), static_cast<double>(k), med});
  }
  const bool trend_ok = medians.back() < medians.front();
  if (!trend_ok) out.flags_ok = false;
  out.tables.push_back(std::move(tt));
  out.summary = {{"zeta", zeta},
                 {"zeta_log_theta", zeta * std::abs(std::log(theta))},
                 {"trend_decreasing", trend_ok}};
  return out;
}

ExperimentResult run_hitting(const ExperimentConfig& cfg) {
  check_keys(cfg.params, {"n", "trials", "cap"}, "hitting params");
  const int n = cfg.params.value("n", 12);
  const int trials = cfg.params.value("trials", 500);
  const std::uint64_t cap = cfg.params.value("cap", default_hitting_cap);

  const SpectralData s = solve_spectral(cfg);
  const MarkovModel model = markov_from_equilibrium(s, cfg.order);
  const EntropyEstimate est = entropy_from_hitting(model, n, trials, derive_stream(cfg.seed, 0x417), cap);
  const double h_ref = model.entropy_rate();
  const bool ok = h_ref > 0.0 && std::abs(est.point - h_ref) <= 0.15 * h_ref;

  ExperimentResult out;
  out.id = "hitting";
  Table t;
  t.name = "entropy";
  t.columns = {"n", "trials", "estimate", "iqr", "censored", "reference_entropy", "ok"};
  t.rows.push_back({static_cast<double>(n), static_cast<double>(trials), est.point, est.spread,
                    static_cast<double>(est.censored), h_ref, ok ? 1.0 : 0.0});
  out.flags_ok = ok;
  out.tables.push_back(std::move(t));
  out.summary = {{"estimate", est.point}, {"iqr", est.spread}, {"reference_entropy", h_ref}};
  return out;
}

ExperimentResult run_tail_curve(const ExperimentConfig& cfg) {
  check_keys(cfg.params, {"functional", "n", "samples", "u_sigmas", "observable", "psi_depth"},
             "tail-curve params");
  const std::string functional = cfg.params.value("functional", "birkhoff");
  const std::size_t n = cfg.params.value("n", std::size_t{1024});
  const std::size_t samples = cfg.params.value("samples", std::size_t{20000});
  const std::vector<double> u_sigmas =
      cfg.params.value("u_sigmas", std::vector<double>{0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 4.0});

  const SpectralData s = solve_spectral(cfg);
  const MarkovModel model = markov_from_equilibrium(s, cfg.order);
  const ObservableSpec f =
      observable_from_params(cfg.params.contains("observable") ? cfg.params["observable"] : json(),
                             s, cfg.potential);

  ExperimentResult out;
  out.id = "tail-curve";
  ConcentrationReport rep;
  if (functional == "birkhoff-potential") {
    const int psi_depth = cfg.params.value("psi_depth", std::min(cfg.depth, 12));
    // psi = -phi per the entropy application
    ObservableSpec psi = ObservableSpec::from_potential(cfg.potential, psi_depth);
    std::vector<double> neg(psi.table().size());
    for (std::size_t i = 0; i < neg.size(); ++i) neg[i] = -psi.table()[i];
    psi = ObservableSpec(s.alphabet, psi_depth, std::move(neg), cfg.potential.theta());
    const VariationProfile prof = cfg.potential.profile();
    const double lip_phi = std::max(psi.lip_phi(prof), 1e-12);
    // sigma scale of the time average for the grid
    std::vector<double> probe(2000);
    parallel_for_slots(probe.size(), cfg.threads, [&](std::size_t i) {
      PathSampler sampler(model, derive_stream(cfg.seed, 0x9990 + i));
      std::vector<Symbol> path(n + static_cast<std::size_t>(psi.depth()) - 1);
      for (auto& sym : path) sym = sampler.next();
      probe[i] = birkhoff_sum(psi, path, n) / static_cast<double>(n);
    });
    const double sigma = std::sqrt(std::max(sample_variance(probe), 1e-300));
    std::vector<double> u_grid(u_sigmas.size());
    for (std::size_t i = 0; i < u_sigmas.size(); ++i) u_grid[i] = u_sigmas[i] * sigma;
    rep = birkhoff_potential_tail(psi, lip_phi, model, n, samples, u_grid,
                                  derive_stream(cfg.seed, 0x7A11), cfg.threads);
  } else {
    FunctionalSpec K = [&]() {
      if (functional == "birkhoff") return FunctionalSpec::birkhoff(f, n);
      if (functional == "single-coordinate") return FunctionalSpec::single_coordinate(f);
      if (functional == "kantorovich")
        return FunctionalSpec::kantorovich(s, cfg.params.value("psi_depth", 4), n);
      if (functional == "shadowing") return FunctionalSpec::shadowing(Word{0}, n, cfg.potential.theta());
      throw config_error("unknown functional '" + functional + "'");
    }();
    // grid in units of the functional's standard deviation
    std::vector<double> probe(2000);
    parallel_for_slots(probe.size(), cfg.threads, [&](std::size_t i) {
      PathSampler sampler(model, derive_stream(cfg.seed, 0x9990 + i));
      std::vector<Symbol> path(K.path_length());
      for (auto& sym : path) sym = sampler.next();
      probe[i] = K.eval(path);
    });
    const double sigma = std::sqrt(std::max(sample_variance(probe), 1e-300));
    std::vector<double> u_grid(u_sigmas.size());
    for (std::size_t i = 0; i < u_sigmas.size(); ++i) u_grid[i] = u_sigmas[i] * sigma;
    rep = tail_curve(K, model, samples, u_grid, derive_stream(cfg.seed, 0x7A11), std::nullopt,
                     cfg.threads);
  }

  Table tu;
  tu.name = "upper";
  tu.columns = {"u", "p_hat", "ci_lo", "ci_hi", "bound", "flag"};
  for (const TailPoint& p : rep.upper)
    tu.rows.push_back({p.u, p.p_hat, p.ci_lo, p.ci_hi, p.bound, p.ok ? 1.0 : 0.0});
  Table tt;
  tt.name = "two-sided";
  tt.columns = {"u", "p_hat", "ci_lo", "ci_hi", "bound", "flag"};
  for (const TailPoint& p : rep.two_sided)
    tt.rows.push_back({p.u, p.p_hat, p.ci_lo, p.ci_hi, p.bound, p.ok ? 1.0 : 0.0});
  out.tables.push_back(std::move(tu));
  out.tables.push_back(std::move(tt));
  out.flags_ok = rep.all_ok();
  out.summary = {{"functional", rep.functional_id},
                 {"c_hat", rep.c_hat},
                 {"c_hat_se", rep.c_hat_se},
                 {"sum_lip_sq", rep.sum_lip_sq},
                 {"mean_k", rep.mean_k},
                 {"samples", rep.samples}};
  return out;
}

std::vector<std::string> experiment_ids() {
  return {"markov-approx", "empirical-measure", "asclt",     "shadowing",
          "block-frequency", "hitting",          "tail-curve"};
}

ExperimentResult run_experiment(const std::string& id, const ExperimentConfig& cfg) {
  if (id == "markov-approx") return run_markov_approx_speed(cfg);
  if (id == "empirical-measure") return run_empirical_measure_convergence(cfg);
  if (id == "asclt") return run_asclt(cfg);
  if (id == "shadowing") return run_shadowing(cfg);
  if (id == "block-frequency") return run_block_frequency(cfg);
  if (id == "hitting") return run_hitting(cfg);
  if (id == "tail-curve") return run_tail_curve(cfg);
  throw config_error("unknown experiment id '" + id + "'");
}

std::vector<std::filesystem::path> write_experiment_outputs(const ExperimentResult& result,
                                                            const ExperimentConfig& cfg,
                                                            const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  json provenance = cfg.resolved();
  provenance["experiment"] = result.id;
  std::vector<std::filesystem::path> written;
  for (const Table& t : result.tables) {
    const auto path = out_dir / (result.id + "-" + t.name + ".csv");
    write_table_csv(path, t, provenance);
    written.push_back(path);
  }
  json summary;
  summary["experiment"] = result.id;
  summary["flags_ok"] = result.flags_ok;
  summary["summary"] = result.summary;
  summary["provenance"] = provenance;
  write_json_file(out_dir / (result.id + "-summary.json"), summary);
  return written;
}

}  // namespace gibbslab
