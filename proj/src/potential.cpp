#include "gibbslab/potential.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "gibbslab/errors.hpp"
#include "gibbslab/numeric.hpp"

namespace gibbslab {

namespace {

void check_alphabet(const Alphabet& a) {
  if (a.size < 1) throw std::domain_error("alphabet size must be >= 1");
}

// Sum_{m > M} m^-q <= M^{1-q}/(q-1) for q > 1.
double ptail_bound(double M, double q) { return std::pow(M, 1.0 - q) / (q - 1.0); }

}  // namespace

Potential Potential::constant(Alphabet a, double value) {
  check_alphabet(a);
  Potential p;
  p.kind_ = Kind::constant;
  p.alphabet_ = a;
  p.constant_value_ = value;
  return p;
}

Potential Potential::depth1(Alphabet a, std::vector<double> values) {
  check_alphabet(a);
  if (static_cast<int>(values.size()) != a.size)
    throw std::domain_error("depth-1 potential needs |A| values");
  Potential p;
  p.kind_ = Kind::depth1;
  p.alphabet_ = a;
  p.table_depth_ = 1;
  p.table_ = std::move(values);
  return p;
}

Potential Potential::bernoulli(std::vector<double> probs) {
  double sum = 0.0;
  for (double q : probs) {
    if (!(q > 0.0 && q < 1.0)) throw std::domain_error("bernoulli probabilities must lie in (0,1)");
    sum += q;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw std::domain_error("bernoulli probabilities must sum to 1");
  std::vector<double> values(probs.size());
  for (std::size_t i = 0; i < probs.size(); ++i) values[i] = std::log(probs[i]);
  Potential p = depth1(Alphabet{static_cast<int>(probs.size())}, std::move(values));
  return p;
}

Potential Potential::markov(Alphabet a, int depth, std::vector<double> table) {
  check_alphabet(a);
  if (depth < 1) throw std::domain_error("markov potential depth must be >= 1");
  if (table.size() != a.pow(depth)) throw std::domain_error("markov potential table must cover A^depth");
  Potential p;
  p.kind_ = Kind::markov;
  p.alphabet_ = a;
  p.table_depth_ = depth;
  p.table_ = std::move(table);
  return p;
}

Potential Potential::long_range_ising(double power) {
  if (!(power > 2.0))
    throw unsupported_regime_error("long-range ising needs power > 2 for summable variation");
  Potential p;
  p.kind_ = Kind::long_range_ising;
  p.alphabet_ = Alphabet{2};
  p.ising_power_ = power;
  return p;
}

Potential Potential::pollicott(double exponent, double v0) {
  if (!(exponent > 0.0)) throw std::domain_error("pollicott exponent must be positive");
  if (!(v0 >= 1.0)) throw std::domain_error("pollicott v0 must dominate v_1 = 1");
  Potential p;
  p.kind_ = Kind::pollicott;
  p.alphabet_ = Alphabet{2};
  p.pollicott_exponent_ = exponent;
  p.pollicott_v0_ = v0;
  return p;
}

Potential Potential::custom(Alphabet a, int depth, std::vector<double> table) {
  Potential p = markov(a, depth, std::move(table));
  p.kind_ = Kind::custom;
  return p;
}

Potential& Potential::set_theta(double theta) {
  if (!(theta > 0.0 && theta < 1.0)) throw std::domain_error("theta must lie in (0,1)");
  theta_ = theta;
  return *this;
}

int Potential::locally_constant_depth() const {
  switch (kind_) {
    case Kind::constant: return 0;
    case Kind::depth1: return 1;
    case Kind::markov:
    case Kind::custom: return table_depth_;
    default: return -1;
  }
}

double Potential::sup_bound() const {
  switch (kind_) {
    case Kind::constant: return std::abs(constant_value_);
    case Kind::depth1:
    case Kind::markov:
    case Kind::custom: {
      double m = 0.0;
      for (double v : table_) m = std::max(m, std::abs(v));
      return m;
    }
    case Kind::long_range_ising: {
      // |phi| <= sum_{m>=2} m^-power
      double s = 0.0;
      double m = 2.0;
      while (true) {
        const double t = std::pow(m, -ising_power_);
        s += t;
        if (ptail_bound(m, ising_power_) < 1e-14) break;
        m += 1.0;
      }
      return s;
    }
    case Kind::pollicott: return pollicott_v0_;
  }
  return 0.0;
}

std::shared_ptr<const std::vector<double>> Potential::ising_residue_coeffs(std::size_t period) const {
  {
    std::lock_guard<std::mutex> lock(ising_cache_->mutex);
    auto it = ising_cache_->by_period.find(period);
    if (it != ising_cache_->by_period.end()) return it->second;
  }
  // coeff[r] = sum over m >= 2 with (m-1) mod period == r of m^-power,
  // truncated once the analytic remainder drops below 1e-12.
  auto coeffs = std::make_shared<std::vector<double>>(period, 0.0);
  const double q = ising_power_;
  std::size_t r = 1 % period;  // residue of m-1 for m = 2
  double m = 2.0;
  while (true) {
    (*coeffs)[r] += std::pow(m, -q);
    if (ptail_bound(m, q) < 1e-12) break;
    m += 1.0;
    r = (r + 1) % period;
  }
  std::lock_guard<std::mutex> lock(ising_cache_->mutex);
  auto [it, inserted] = ising_cache_->by_period.emplace(period, coeffs);
  return it->second;
}

double Potential::eval_ising(std::span<const Symbol> w) const {
  const auto coeffs = ising_residue_coeffs(w.size());
  const double s0 = 2.0 * w[0] - 1.0;
  double acc = 0.0;
  for (std::size_t r = 0; r < w.size(); ++r) acc += (2.0 * w[r] - 1.0) * (*coeffs)[r];
  return -s0 * acc;
}

double Potential::eval_pollicott(std::span<const Symbol> w) const {
  // position of the first 1 in the periodic extension = first 1 in w
  for (std::size_t k = 0; k < w.size(); ++k) {
    if (w[k] == 1) {
      if (k == 0) return pollicott_v0_;
      return std::pow(static_cast<double>(k), -pollicott_exponent_);
    }
  }
  return 0.0;  // all-zeros extension
}

double Potential::eval(std::span<const Symbol> w) const {
  if (w.empty()) throw std::domain_error("potential evaluated at empty word");
  for (Symbol s : w)
    if (s >= alphabet_.size) throw std::domain_error("symbol out of alphabet range");
  switch (kind_) {
    case Kind::constant: return constant_value_;
    case Kind::depth1: return table_[w[0]];
    case Kind::markov:
    case Kind::custom: {
      // table index over the first depth symbols of the periodic extension
      std::uint64_t idx = 0;
      for (int i = 0; i < table_depth_; ++i)
        idx = idx * static_cast<std::uint64_t>(alphabet_.size) + w[static_cast<std::size_t>(i) % w.size()];
      return table_[idx];
    }
    case Kind::long_range_ising: return eval_ising(w);
    case Kind::pollicott: return eval_pollicott(w);
  }
  throw std::logic_error("unreachable potential kind");
}

double variation_numeric(const Potential& phi, int n, int k) {
  if (n < 0 || k < n) throw std::domain_error("variation_numeric needs k >= n >= 0");
  if (k < 1) throw std::domain_error("variation_numeric needs k >= 1");
  const Alphabet& a = phi.alphabet();
  const std::uint64_t total = a.pow(k);
  if (total > (1ULL << 26)) throw resource_error("variation_numeric enumeration too large", total);
  const std::uint64_t group = a.pow(k - n);  // words sharing an n-prefix are contiguous
  double worst = 0.0;
  std::vector<Symbol> w(static_cast<std::size_t>(k), 0);
  std::uint64_t idx = 0;
  while (idx < total) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::uint64_t j = 0; j < group; ++j, ++idx) {
      const double v = phi.eval(index_word(a, idx, k).span());
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    worst = std::max(worst, hi - lo);
  }
  return worst;
}

double walters_bound(const VariationProfile& profile, int p) {
  if (p < 0) throw std::domain_error("walters_bound needs p >= 0");
  const VarTail& t = profile.tail;
  switch (t.kind) {
    case VarTail::Kind::zero_beyond: {
      double s = 0.0;
      for (int kk = p + 1; kk < t.depth && kk < static_cast<int>(profile.var.size()); ++kk)
        s += profile.var[static_cast<std::size_t>(kk)];
      return s;
    }
    case VarTail::Kind::geometric:
      return t.scale * std::pow(t.rate, p + 1) / (1.0 - t.rate);
    case VarTail::Kind::power: {
      // integral bound: sum_{k>p} c k^-q <= c p^{1-q}/(q-1)
      if (!(t.exponent > 1.0))
        throw unsupported_regime_error("power-law variation not summable (exponent <= 1)");
      if (p == 0) return t.scale * (1.0 + 1.0 / (t.exponent - 1.0));
      return t.scale * std::pow(static_cast<double>(p), 1.0 - t.exponent) / (t.exponent - 1.0);
    }
    case VarTail::Kind::ising_series: {
      // W_p <= sum_{k>p} var_k = 2 sum_{m>=p+2} (m-1-p) m^-q, q > 2
      const double q = t.exponent;
      if (!(q > 2.0)) throw unsupported_regime_error("ising variation not summable (power <= 2)");
      double s = 0.0;
      double m = static_cast<double>(p) + 2.0;
      while (true) {
        s += (m - 1.0 - p) * std::pow(m, -q);
        // remainder sum_{m'>m} (m'-1-p) m'^-q <= integral of t^{1-q}; adding
        // it keeps the result an upper bound, so an early stop is safe
        const double rem = std::pow(m, 2.0 - q) / (q - 2.0);
        if (rem < 1e-9 * s || m > 1e7) {
          s += rem;
          break;
        }
        m += 1.0;
      }
      return 2.0 * s;
    }
    case VarTail::Kind::none:
      throw unsupported_regime_error("variation tail unknown; cannot bound W_p");
  }
  throw std::logic_error("unreachable tail kind");
}

VariationProfile Potential::profile(int horizon) const {
  if (horizon < 1) throw std::domain_error("profile horizon must be >= 1");
  VariationProfile prof;
  const std::size_t H = static_cast<std::size_t>(horizon);
  prof.var.assign(H + 1, 0.0);
  prof.var_prov.assign(H + 1, Provenance::analytic);

  switch (kind_) {
    case Kind::constant:
      prof.tail = {VarTail::Kind::zero_beyond, 0, 0, 0, 0};
      break;
    case Kind::depth1: {
      double lo = table_[0], hi = table_[0];
      for (double v : table_) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      prof.var[0] = hi - lo;
      prof.tail = {VarTail::Kind::zero_beyond, 0, 0, 0, 1};
      break;
    }
    case Kind::markov:
    case Kind::custom: {
      // exact enumeration at the table depth
      for (int n = 0; n < table_depth_ && n <= horizon; ++n) {
        prof.var[static_cast<std::size_t>(n)] = variation_numeric(*this, n, table_depth_);
        prof.var_prov[static_cast<std::size_t>(n)] = Provenance::numeric;
      }
      prof.tail = {VarTail::Kind::zero_beyond, 0, 0, 0, table_depth_};
      break;
    }
    case Kind::long_range_ising: {
      // var_n = 2 sum_{m >= max(n+1,2)} m^-power
      const double q = ising_power_;
      for (std::size_t n = 0; n <= H; ++n) {
        double s = 0.0;
        double m = std::max<double>(static_cast<double>(n) + 1.0, 2.0);
        while (true) {
          s += std::pow(m, -q);
          if (ptail_bound(m, q) < 1e-14) break;
          m += 1.0;
        }
        prof.var[n] = 2.0 * s;
      }
      prof.tail = {VarTail::Kind::ising_series, 0, 0, q, 0};
      break;
    }
    case Kind::pollicott: {
      prof.var[0] = pollicott_v0_;
      for (std::size_t n = 1; n <= H; ++n)
        prof.var[n] = std::pow(static_cast<double>(n), -pollicott_exponent_);
      prof.tail = {VarTail::Kind::power, 1.0, 0, pollicott_exponent_, 0};
      break;
    }
  }

  prof.W.assign(H + 1, 0.0);
  prof.W_prov.assign(H + 1, Provenance::upper_bound);
  bool summable = true;
  const bool locally_constant = prof.tail.kind == VarTail::Kind::zero_beyond;
  for (std::size_t p = 0; p <= H; ++p) {
    double tail = 0.0;
    try {
      tail = walters_bound(prof, static_cast<int>(p));
    } catch (const unsupported_regime_error&) {
      summable = false;
    }
    // locally constant potentials hit W_p = 0; they get the strictly
    // positive surrogate max(W_p, theta^p)
    prof.W[p] = locally_constant ? std::max(tail, std::pow(theta_, static_cast<double>(p))) : tail;
    if (!(prof.W[p] > 0.0)) summable = false;
  }
  prof.regime = summable ? regime_classify(prof).regime : Regime::unsupported;
  return prof;
}

RegimeFit regime_classify(const VariationProfile& profile) {
  const std::size_t H = profile.horizon();
  if (H < 8) throw insufficient_data_error("regime classification needs at least 8 W samples");
  for (std::size_t p = 1; p <= H; ++p)
    if (!std::isfinite(profile.W[p]) || profile.W[p] <= 0.0)
      return {Regime::unsupported, 0, 0, 0, "non-finite W"};

  // fit window p in [4, H] (falls back to [1, H] on short profiles)
  const std::size_t p0 = H >= 12 ? 4 : 1;
  std::vector<double> ps, logw;
  for (std::size_t p = p0; p <= H; ++p) {
    ps.push_back(static_cast<double>(p));
    logw.push_back(std::log(profile.W[p]));
  }
  const std::size_t n = ps.size();

  RegimeFit out;
  out.samples = n;

  // regime 1: log W linear in p
  const LinearFit f1 = linear_fit(ps, logw);
  if (f1.r2 >= 0.9995 && f1.slope < 0) {
    out.regime = Regime::geometric;
    out.alpha = std::exp(f1.slope);
    out.r2 = f1.r2;
    out.transform = "log W ~ p";
    return out;
  }

  // regime 2: log W linear in log p
  std::vector<double> logp(n);
  for (std::size_t i = 0; i < n; ++i) logp[i] = std::log(ps[i]);
  const LinearFit f2 = linear_fit(logp, logw);
  if (f2.r2 >= 0.998) {
    out.r2 = f2.r2;
    out.alpha = -f2.slope;
    out.transform = "log W ~ log p";
    // polynomial decay slower than 1/p supports no claim here
    out.regime = (out.alpha > 1.05) ? Regime::polynomial : Regime::unsupported;
    return out;
  }

  // regime 3: log W linear in (log p)^alpha over an alpha grid
  double best3_r2 = -1.0, best3_alpha = 0.0;
  for (double a = 1.25; a <= 3.001; a += 0.25) {
    std::vector<double> x, y;
    for (std::size_t i = 0; i < n; ++i) {
      if (ps[i] < 2.0) continue;
      x.push_back(std::pow(std::log(ps[i]), a));
      y.push_back(logw[i]);
    }
    const LinearFit f = linear_fit(x, y);
    if (f.slope < 0 && f.r2 > best3_r2) {
      best3_r2 = f.r2;
      best3_alpha = a;
    }
  }
  if (best3_r2 >= 0.9999) {
    out.regime = Regime::log_power;
    out.alpha = best3_alpha;
    out.r2 = best3_r2;
    out.transform = "log W ~ (log p)^alpha";
    return out;
  }

  // regime 4: log W linear in p^alpha, alpha in (0,1)
  double best4_r2 = -1.0, best4_alpha = 0.0;
  for (double a = 0.05; a <= 0.951; a += 0.05) {
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = std::pow(ps[i], a);
    const LinearFit f = linear_fit(x, logw);
    if (f.slope < 0 && f.r2 > best4_r2) {
      best4_r2 = f.r2;
      best4_alpha = a;
    }
  }
  if (best4_r2 >= 0.998 && best4_alpha >= 0.05 && best4_alpha <= 0.95) {
    out.regime = Regime::stretched_exp;
    out.alpha = best4_alpha;
    out.r2 = best4_r2;
    out.transform = "log W ~ p^alpha";
    return out;
  }

  out.regime = Regime::unsupported;
  out.r2 = std::max({f1.r2, f2.r2, best3_r2, best4_r2});
  out.transform = "none";
  return out;
}

std::string Potential::kind_name() const {
  switch (kind_) {
    case Kind::constant: return "constant";
    case Kind::depth1: return "depth-1";
    case Kind::markov: return "markov";
    case Kind::long_range_ising: return "long-range-ising";
    case Kind::pollicott: return "pollicott";
    case Kind::custom: return "custom";
  }
  return "?";
}

}  // namespace gibbslab
