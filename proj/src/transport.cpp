#include "gibbslab/transport.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <queue>
#include <stdexcept>

#include "gibbslab/errors.hpp"
#include "gibbslab/numeric.hpp"

namespace gibbslab {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

// exact min-cost transport between residual supplies and demands by
// successive shortest paths with Johnson potentials
struct TransportSolver {
  std::vector<double> supply, demand;
  std::function<double(std::size_t, std::size_t)> cost;
  std::vector<std::vector<double>> flow;

  TransportSolver(std::vector<double> s, std::vector<double> d,
                  std::function<double(std::size_t, std::size_t)> c)
      : supply(std::move(s)), demand(std::move(d)), cost(std::move(c)),
        flow(supply.size(), std::vector<double>(demand.size(), 0.0)) {}

  double solve() {
    const std::size_t S = supply.size(), D = demand.size();
    std::vector<double> pot_s(S, 0.0), pot_d(D, 0.0);
    // supply and demand totals agree up to rounding; ship the smaller one
    const double total = std::min(std::accumulate(supply.begin(), supply.end(), 0.0),
                                  std::accumulate(demand.begin(), demand.end(), 0.0));
    double remaining = total;
    const double eps = 1e-12 * std::max(1.0, total);
    long guard = static_cast<long>(16 * (S + D) * (S + D) + 64);

    while (remaining > eps) {
      if (--guard < 0) throw numeric_error("transport solver exceeded its iteration guard", remaining);
      // multi-source Dijkstra over the bipartite residual graph
      std::vector<double> dist_s(S, inf), dist_d(D, inf);
      std::vector<int> par_d(D, -1);    // source feeding each sink
      std::vector<int> par_s(S, -1);    // sink feeding each source (backward arc)
      using Node = std::pair<double, std::size_t>;  // (dist, id); id < S source else sink
      std::priority_queue<Node, std::vector<Node>, std::greater<Node>> pq;
      for (std::size_t s = 0; s < S; ++s)
        if (supply[s] > eps) {
          dist_s[s] = 0.0;
          pq.push({0.0, s});
        }
      while (!pq.empty()) {
        auto [d, id] = pq.top();
        pq.pop();
        if (id < S) {
          if (d > dist_s[id] + 1e-18) continue;
          for (std::size_t t = 0; t < D; ++t) {
            const double rc = cost(id, t) + pot_s[id] - pot_d[t];
            const double nd = d + std::max(0.0, rc);
            if (nd + 1e-18 < dist_d[t]) {
              dist_d[t] = nd;
              par_d[t] = static_cast<int>(id);
              pq.push({nd, S + t});
            }
          }
        } else {
          const std::size_t t = id - S;
          if (d > dist_d[t] + 1e-18) continue;
          for (std::size_t s = 0; s < S; ++s) {
            if (flow[s][t] <= eps) continue;
            const double rc = -cost(s, t) - pot_s[s] + pot_d[t];
            const double nd = d + std::max(0.0, rc);
            if (nd + 1e-18 < dist_s[s]) {
              dist_s[s] = nd;
              par_s[s] = static_cast<int>(t);
              pq.push({nd, s});
            }
          }
        }
      }
      // cheapest sink with remaining demand
      std::size_t best = D;
      for (std::size_t t = 0; t < D; ++t)
        if (demand[t] > eps && dist_d[t] < (best == D ? inf : dist_d[best])) best = t;
      if (best == D) throw numeric_error("transport solver found no augmenting path", remaining);

      // bottleneck along the alternating path
      double bottleneck = demand[best];
      {
        std::size_t t = best;
        while (true) {
          const std::size_t s = static_cast<std::size_t>(par_d[t]);
          if (par_s[s] < 0) {
            bottleneck = std::min(bottleneck, supply[s]);
            break;
          }
          const std::size_t t2 = static_cast<std::size_t>(par_s[s]);
          bottleneck = std::min(bottleneck, flow[s][t2]);
          t = t2;
        }
      }
      // augment
      {
        std::size_t t = best;
        while (true) {
          const std::size_t s = static_cast<std::size_t>(par_d[t]);
          flow[s][t] += bottleneck;
          if (par_s[s] < 0) {
            supply[s] -= bottleneck;
            break;
          }
          const std::size_t t2 = static_cast<std::size_t>(par_s[s]);
          flow[s][t2] -= bottleneck;
          t = t2;
        }
        demand[best] -= bottleneck;
      }
      remaining -= bottleneck;
      // potential update keeps reduced costs nonnegative
      for (std::size_t s = 0; s < S; ++s)
        if (dist_s[s] < inf) pot_s[s] += dist_s[s];
      for (std::size_t t = 0; t < D; ++t)
        if (dist_d[t] < inf) pot_d[t] += dist_d[t];
    }
    double value = 0.0;
    for (std::size_t s = 0; s < S; ++s)
      for (std::size_t t = 0; t < D; ++t)
        if (flow[s][t] > 0.0) value += flow[s][t] * cost(s, t);
    return value;
  }
};

// Transport between two probability vectors with a metric cost: the common
// part stays in place (valid for metric costs), residuals go to the solver.
OTResult metric_transport(const BlockMeasure& mu, const BlockMeasure& nu,
                          const std::function<double(std::size_t, std::size_t)>& cost) {
  mu.validate();
  nu.validate();
  if (mu.depth != nu.depth || mu.alphabet.size != nu.alphabet.size)
    throw std::domain_error("transport between measures of different depths");
  const std::size_t n = mu.masses.size();

  OTResult out;
  out.plan.depth = mu.depth;
  std::vector<double> res_mu, res_nu;
  std::vector<std::size_t> idx_mu, idx_nu;
  for (std::size_t w = 0; w < n; ++w) {
    const double common = std::min(mu.masses[w], nu.masses[w]);
    if (common > 0.0) out.plan.entries.push_back({w, w, common});
    const double sm = mu.masses[w] - common;
    const double sn = nu.masses[w] - common;
    if (sm > 1e-300) {
      res_mu.push_back(sm);
      idx_mu.push_back(w);
    }
    if (sn > 1e-300) {
      res_nu.push_back(sn);
      idx_nu.push_back(w);
    }
  }
  const double res_total = std::min(std::accumulate(res_mu.begin(), res_mu.end(), 0.0),
                                    std::accumulate(res_nu.begin(), res_nu.end(), 0.0));
  if (!res_mu.empty() && !res_nu.empty() && res_total > 1e-12) {
    TransportSolver solver(res_mu, res_nu, [&](std::size_t s, std::size_t t) {
      return cost(idx_mu[s], idx_nu[t]);
    });
    out.value = solver.solve();
    for (std::size_t s = 0; s < res_mu.size(); ++s)
      for (std::size_t t = 0; t < res_nu.size(); ++t)
        if (solver.flow[s][t] > 0.0)
          out.plan.entries.push_back({idx_mu[s], idx_nu[t], solver.flow[s][t]});
  }
  out.plan.cost = out.value;
  return out;
}

int word_separation(std::uint64_t a, std::uint64_t b, int depth, int base) {
  // index of the first differing symbol (most significant digit first)
  for (int k = 0; k < depth; ++k) {
    std::uint64_t div = 1;
    for (int j = 0; j < depth - 1 - k; ++j) div *= static_cast<std::uint64_t>(base);
    if ((a / div) % static_cast<std::uint64_t>(base) != (b / div) % static_cast<std::uint64_t>(base))
      return k;
  }
  return depth;  // equal
}

int hamming_indices(std::uint64_t a, std::uint64_t b, int depth, int base) {
  int d = 0;
  for (int k = 0; k < depth; ++k) {
    if (a % static_cast<std::uint64_t>(base) != b % static_cast<std::uint64_t>(base)) ++d;
    a /= static_cast<std::uint64_t>(base);
    b /= static_cast<std::uint64_t>(base);
  }
  return d;
}

}  // namespace

BlockMeasure BlockMeasure::from_spectral(const SpectralData& s, int depth) {
  if (depth < 1 || depth > s.depth) throw std::domain_error("block depth out of spectral range");
  BlockMeasure b;
  b.alphabet = s.alphabet;
  b.depth = depth;
  b.masses = s.marginal(depth);
  return b;
}

BlockMeasure BlockMeasure::from_markov(const MarkovModel& m, int depth) {
  if (depth < 1) throw std::domain_error("block depth must be >= 1");
  BlockMeasure b;
  b.alphabet = m.alphabet;
  b.depth = depth;
  b.masses = m.block_distribution(depth);
  return b;
}

BlockMeasure BlockMeasure::from_masses(Alphabet a, int depth, std::vector<double> masses) {
  BlockMeasure b;
  b.alphabet = a;
  b.depth = depth;
  b.masses = std::move(masses);
  b.validate();
  return b;
}

BlockMeasure BlockMeasure::marginal(int m) const {
  if (m < 0 || m > depth) throw std::domain_error("marginal depth out of range");
  BlockMeasure out;
  out.alphabet = alphabet;
  out.depth = m;
  const std::size_t nm = static_cast<std::size_t>(alphabet.pow(m));
  const std::size_t block = masses.size() / nm;
  out.masses.assign(nm, 0.0);
  for (std::size_t v = 0; v < nm; ++v)
    for (std::size_t j = 0; j < block; ++j) out.masses[v] += masses[v * block + j];
  return out;
}

void BlockMeasure::validate() const {
  if (masses.size() != alphabet.pow(depth))
    throw std::domain_error("block measure must cover A^depth");
  double sum = 0.0;
  for (double m : masses) {
    if (m < -1e-15) throw std::domain_error("block measure has negative mass");
    sum += m;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw std::domain_error("block measure does not sum to 1");
}

double TransportPlan::marginal_error(const BlockMeasure& mu, const BlockMeasure& nu) const {
  std::vector<double> m_from(mu.masses.size(), 0.0), m_to(nu.masses.size(), 0.0);
  for (const PlanEntry& e : entries) {
    m_from[e.from] += e.mass;
    m_to[e.to] += e.mass;
  }
  double err = 0.0;
  for (std::size_t i = 0; i < m_from.size(); ++i) err = std::max(err, std::abs(m_from[i] - mu.masses[i]));
  for (std::size_t i = 0; i < m_to.size(); ++i) err = std::max(err, std::abs(m_to[i] - nu.masses[i]));
  return err;
}

double w1_tree(const BlockMeasure& mu, const BlockMeasure& nu, double theta) {
  mu.validate();
  nu.validate();
  if (mu.depth != nu.depth || mu.alphabet.size != nu.alphabet.size)
    throw std::domain_error("w1_tree needs equal depths");
  if (!(theta > 0.0 && theta < 1.0)) throw std::domain_error("theta must lie in (0,1)");
  double value = 0.0;
  double level_weight = (1.0 - theta) / 2.0;  // (theta^{j-1} - theta^j)/2 at j = 1
  for (int j = 1; j <= mu.depth; ++j) {
    const BlockMeasure mj = mu.marginal(j);
    const BlockMeasure nj = nu.marginal(j);
    double l1 = 0.0;
    for (std::size_t w = 0; w < mj.masses.size(); ++w) l1 += std::abs(mj.masses[w] - nj.masses[w]);
    value += level_weight * l1;
    level_weight *= theta;
  }
  return value;
}

OTResult w1_lp(const BlockMeasure& mu, const BlockMeasure& nu, double theta) {
  if (!(theta > 0.0 && theta < 1.0)) throw std::domain_error("theta must lie in (0,1)");
  const int depth = mu.depth;
  const int base = mu.alphabet.size;
  std::vector<double> theta_pow(static_cast<std::size_t>(depth) + 1, 1.0);
  for (int k = 1; k <= depth; ++k)
    theta_pow[static_cast<std::size_t>(k)] = theta_pow[static_cast<std::size_t>(k - 1)] * theta;
  return metric_transport(mu, nu, [&, depth, base](std::size_t a, std::size_t b) {
    const int sep = word_separation(a, b, depth, base);
    return sep >= depth ? 0.0 : theta_pow[static_cast<std::size_t>(sep)];
  });
}

OTResult dbar_n(const BlockMeasure& mu, const BlockMeasure& nu, std::uint64_t size_guard) {
  if (mu.masses.size() > size_guard)
    throw resource_error("dbar_n instance exceeds its size guard", mu.masses.size());
  const int depth = mu.depth;
  const int base = mu.alphabet.size;
  return metric_transport(mu, nu, [depth, base](std::size_t a, std::size_t b) {
    return static_cast<double>(hamming_indices(a, b, depth, base));
  });
}

double relative_entropy_n(const BlockMeasure& nu, const BlockMeasure& mu) {
  nu.validate();
  mu.validate();
  if (nu.depth != mu.depth) throw std::domain_error("relative entropy needs equal depths");
  double h = 0.0;
  for (std::size_t w = 0; w < nu.masses.size(); ++w) {
    const double p = nu.masses[w];
    if (p <= 0.0) continue;
    if (mu.masses[w] <= 0.0) return inf;
    h += p * std::log(p / mu.masses[w]);
  }
  return std::max(0.0, h);
}

double relative_entropy_rate(const MarkovModel& nu, const SpectralData& s, const Potential& phi,
                             double tol, int max_depth) {
  // depth for the potential integral: exact for locally constant kinds,
  // otherwise the smallest depth whose variation bound meets tol
  int depth = std::max(nu.order, 1);
  const int lc = phi.locally_constant_depth();
  if (lc >= 0) {
    depth = std::max(depth, std::max(lc, 1));
  } else {
    const VariationProfile prof = phi.profile(std::max(max_depth, 8));
    int d = depth;
    while (d <= max_depth && prof.var[static_cast<std::size_t>(d)] > tol) ++d;
    if (d > max_depth)
      throw resource_error("potential integral cannot reach tolerance within the depth budget",
                           static_cast<std::size_t>(d));
    depth = d;
  }
  const std::vector<double> blocks = nu.block_distribution(depth);
  double phi_mean = 0.0;
  for (std::uint64_t w = 0; w < blocks.size(); ++w) {
    if (blocks[w] == 0.0) continue;
    phi_mean += blocks[w] * phi.eval(index_word(nu.alphabet, w, depth).span());
  }
  return s.pressure - phi_mean - nu.entropy_rate();
}

PinskerGap pinsker_gap(const MarkovModel& nu, const SpectralData& s, int n) {
  const BlockMeasure nu_n = BlockMeasure::from_markov(nu, n);
  const BlockMeasure mu_n = BlockMeasure::from_spectral(s, n);
  PinskerGap gap;
  gap.dbar = dbar_n(nu_n, mu_n).value;
  const double h_n = relative_entropy_n(nu_n, mu_n);
  gap.rhs_factor = std::sqrt(static_cast<double>(n) * h_n);
  gap.ratio = gap.rhs_factor > 0.0 ? gap.dbar / gap.rhs_factor : 0.0;
  return gap;
}

RealLaw RealLaw::gaussian(double sigma2) {
  if (sigma2 < 0.0) throw std::domain_error("negative variance");
  RealLaw law;
  law.kind = sigma2 == 0.0 ? Kind::dirac0 : Kind::gaussian;
  law.sigma2 = sigma2;
  return law;
}

RealLaw RealLaw::dirac0_law() { return RealLaw{}; }

RealLaw RealLaw::from_atoms(std::vector<double> atoms, std::vector<double> weights) {
  RealLaw law;
  law.kind = Kind::atoms;
  law.atoms = std::move(atoms);
  law.weights = std::move(weights);
  return law;
}

namespace {

struct SortedAtoms {
  std::vector<double> pos;
  std::vector<double> cum;  // cumulative weight strictly after pos[i] is cum[i]
};

SortedAtoms sort_atoms(std::span<const double> atoms, std::span<const double> weights) {
  if (atoms.size() != weights.size()) throw std::domain_error("atoms and weights differ in length");
  if (atoms.empty()) throw std::domain_error("empty atom list");
  double total = 0.0;
  for (double w : weights) {
    if (w < 0.0) throw std::domain_error("negative atom weight");
    total += w;
  }
  if (!(total > 0.0)) throw std::domain_error("atom weights sum to zero");
  std::vector<std::size_t> order(atoms.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return atoms[a] < atoms[b]; });
  SortedAtoms out;
  double acc = 0.0;
  for (std::size_t i : order) {
    acc += weights[i] / total;
    if (!out.pos.empty() && atoms[i] == out.pos.back()) {
      out.cum.back() = acc;
    } else {
      out.pos.push_back(atoms[i]);
      out.cum.push_back(acc);
    }
  }
  out.cum.back() = 1.0;
  return out;
}

// integral of Phi(t/sigma) from -infinity to t
double gaussian_cdf_integral(double t, double sigma) {
  const double z = t / sigma;
  return t * normal_cdf(z) + sigma * normal_pdf(z);
}

double w1_vs_gaussian(const SortedAtoms& a, double sigma) {
  double total = gaussian_cdf_integral(a.pos.front(), sigma);  // F_hat = 0 below
  for (std::size_t i = 0; i + 1 < a.pos.size(); ++i) {
    const double lo = a.pos[i], hi = a.pos[i + 1];
    const double c = a.cum[i];
    auto seg = [&](double x0, double x1) {
      return std::abs(c * (x1 - x0) - (gaussian_cdf_integral(x1, sigma) - gaussian_cdf_integral(x0, sigma)));
    };
    const double g_lo = normal_cdf(lo / sigma), g_hi = normal_cdf(hi / sigma);
    if ((g_lo - c) * (g_hi - c) >= 0.0) {
      total += seg(lo, hi);
    } else {
      // bisect the crossing of Phi(t/sigma) = c
      double a0 = lo, b0 = hi;
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (a0 + b0);
        if (normal_cdf(mid / sigma) < c)
          a0 = mid;
        else
          b0 = mid;
        if (b0 - a0 < 1e-15 * (1.0 + std::abs(lo) + std::abs(hi))) break;
      }
      const double t_star = 0.5 * (a0 + b0);
      total += seg(lo, t_star) + seg(t_star, hi);
    }
  }
  // F_hat = 1 above the last atom: integral of the gaussian upper tail
  const double z = a.pos.back() / sigma;
  total += sigma * (normal_pdf(z) - z * (1.0 - normal_cdf(z)));
  return total;
}

double w1_vs_atoms(const SortedAtoms& a, const SortedAtoms& b) {
  // integrate |F_a - F_b| between consecutive breakpoints
  double total = 0.0;
  std::size_t ia = 0, ib = 0;
  double fa = 0.0, fb = 0.0;
  double prev = std::min(a.pos.front(), b.pos.front());
  while (ia < a.pos.size() || ib < b.pos.size()) {
    double t;
    if (ib >= b.pos.size() || (ia < a.pos.size() && a.pos[ia] <= b.pos[ib])) {
      t = a.pos[ia];
    } else {
      t = b.pos[ib];
    }
    total += std::abs(fa - fb) * (t - prev);
    while (ia < a.pos.size() && a.pos[ia] == t) fa = a.cum[ia++];
    while (ib < b.pos.size() && b.pos[ib] == t) fb = b.cum[ib++];
    prev = t;
  }
  return total;
}

}  // namespace

double w1_real(std::span<const double> atoms, std::span<const double> weights, const RealLaw& ref) {
  const SortedAtoms a = sort_atoms(atoms, weights);
  switch (ref.kind) {
    case RealLaw::Kind::dirac0: {
      double s = 0.0;
      double prev = 0.0;
      for (std::size_t i = 0; i < a.pos.size(); ++i) {
        s += (a.cum[i] - prev) * std::abs(a.pos[i]);
        prev = a.cum[i];
      }
      return s;
    }
    case RealLaw::Kind::gaussian:
      return w1_vs_gaussian(a, std::sqrt(ref.sigma2));
    case RealLaw::Kind::atoms: {
      const SortedAtoms b = sort_atoms(ref.atoms, ref.weights);
      return w1_vs_atoms(a, b);
    }
  }
  throw std::logic_error("unreachable reference law");
}

}  // namespace gibbslab
