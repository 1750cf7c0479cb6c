#include "gibbslab/markov.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "gibbslab/errors.hpp"

namespace gibbslab {

namespace {

void validate_transition(const Alphabet& a, int order, const std::vector<double>& t) {
  const std::size_t nctx = static_cast<std::size_t>(a.pow(order));
  if (t.size() != nctx * static_cast<std::size_t>(a.size))
    throw std::domain_error("transition table size must be |A|^order * |A|");
  for (std::size_t c = 0; c < nctx; ++c) {
    double row = 0.0;
    for (int s = 0; s < a.size; ++s) {
      const double p = t[c * static_cast<std::size_t>(a.size) + static_cast<std::size_t>(s)];
      if (p < -1e-15 || p > 1.0 + 1e-12) throw std::domain_error("transition probability out of [0,1]");
      row += p;
    }
    if (std::abs(row - 1.0) > 1e-9) throw std::domain_error("transition row does not sum to 1");
  }
}

}  // namespace

std::vector<double> stationary_distribution(const MarkovModel& model, double tol, int max_iter) {
  const std::size_t nctx = model.contexts();
  const std::size_t base = static_cast<std::size_t>(model.alphabet.size);
  if (model.order == 0) return {1.0};
  const std::size_t suffix_mod = nctx / base;  // |A|^{m-1}
  std::vector<double> pi(nctx, 1.0 / static_cast<double>(nctx)), next(nctx);
  double diff = 1.0;
  for (int it = 0; it < max_iter; ++it) {
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t c = 0; c < nctx; ++c) {
      const std::size_t shifted = (c % suffix_mod) * base;
      for (std::size_t s = 0; s < base; ++s)
        next[shifted + s] += pi[c] * model.transition[c * base + s];
    }
    diff = 0.0;
    for (std::size_t c = 0; c < nctx; ++c) diff = std::max(diff, std::abs(next[c] - pi[c]));
    pi.swap(next);
    if (diff < tol) break;
  }
  if (diff >= tol) throw numeric_error("stationary distribution iteration did not converge", diff);
  double sum = 0.0;
  for (double p : pi) sum += p;
  for (double& p : pi) p /= sum;
  return pi;
}

MarkovModel make_markov(Alphabet a, int order, std::vector<double> transition, std::string id) {
  if (order < 0) throw std::domain_error("markov order must be >= 0");
  validate_transition(a, order, transition);
  MarkovModel m;
  m.alphabet = a;
  m.order = order;
  m.transition = std::move(transition);
  m.id = std::move(id);
  m.initial = stationary_distribution(m);
  // fixed-point residual of the recorded initial law
  const std::size_t base = static_cast<std::size_t>(a.size);
  if (order > 0) {
    const std::size_t nctx = m.contexts();
    const std::size_t suffix_mod = nctx / base;
    std::vector<double> image(nctx, 0.0);
    for (std::size_t c = 0; c < nctx; ++c) {
      const std::size_t shifted = (c % suffix_mod) * base;
      for (std::size_t s = 0; s < base; ++s) image[shifted + s] += m.initial[c] * m.transition[c * base + s];
    }
    double res = 0.0;
    for (std::size_t c = 0; c < nctx; ++c) res = std::max(res, std::abs(image[c] - m.initial[c]));
    m.stationary_residual = res;
  }
  return m;
}

MarkovModel markov_from_equilibrium(const SpectralData& s, int order) {
  if (order < 0) throw std::domain_error("markov order must be >= 0");
  if (order + 1 > s.depth) throw std::domain_error("markov order needs order + 1 <= spectral depth");
  const std::size_t base = static_cast<std::size_t>(s.alphabet.size);
  const std::vector<double> mu_ctx = s.marginal(order);
  const std::vector<double> mu_ext = s.marginal(order + 1);
  std::vector<double> t(mu_ext.size());
  for (std::size_t c = 0; c < mu_ctx.size(); ++c) {
    if (!(mu_ctx[c] > 0.0)) throw std::domain_error("zero-mass context in equilibrium marginal");
    double row = 0.0;
    for (std::size_t a = 0; a < base; ++a) {
      t[c * base + a] = mu_ext[c * base + a] / mu_ctx[c];
      row += t[c * base + a];
    }
    for (std::size_t a = 0; a < base; ++a) t[c * base + a] /= row;  // remove rounding drift
  }
  MarkovModel m = make_markov(s.alphabet, order, std::move(t),
                              "equilibrium-order-" + std::to_string(order));
  return m;
}

std::vector<double> MarkovModel::block_distribution(int n) const {
  if (n < 0) throw std::domain_error("block depth must be >= 0");
  const std::size_t base = static_cast<std::size_t>(alphabet.size);
  if (n <= order) {
    // prefix marginal of the stationary context law
    const std::size_t nm = static_cast<std::size_t>(alphabet.pow(n));
    const std::size_t block = contexts() / nm;
    std::vector<double> out(nm, 0.0);
    for (std::size_t v = 0; v < nm; ++v)
      for (std::size_t j = 0; j < block; ++j) out[v] += initial[v * block + j];
    return out;
  }
  std::vector<double> p = initial;
  const std::size_t ctx_mod = contexts();
  for (int j = order; j < n; ++j) {
    std::vector<double> q(p.size() * base, 0.0);
    for (std::size_t w = 0; w < p.size(); ++w) {
      if (p[w] == 0.0) continue;
      const std::size_t ctx = w % ctx_mod;
      for (std::size_t a = 0; a < base; ++a) q[w * base + a] = p[w] * transition[ctx * base + a];
    }
    p.swap(q);
  }
  return p;
}

double MarkovModel::entropy_rate() const {
  const std::size_t base = static_cast<std::size_t>(alphabet.size);
  double h = 0.0;
  for (std::size_t c = 0; c < contexts(); ++c) {
    double row = 0.0;
    for (std::size_t a = 0; a < base; ++a) {
      const double p = transition[c * base + a];
      if (p > 0.0) row -= p * std::log(p);
    }
    h += initial[c] * row;
  }
  return h;
}

PathSampler::PathSampler(const MarkovModel& model, std::uint64_t seed)
    : model_(model), rng_(seed) {
  ctx_ = rng_.categorical(model_.initial);
  if (model_.order > 0) {
    const Word w = index_word(model_.alphabet, ctx_, model_.order);
    pending_.assign(w.begin(), w.end());
  }
}

Symbol PathSampler::next() {
  const std::size_t base = static_cast<std::size_t>(model_.alphabet.size);
  if (emitted_ < pending_.size()) return pending_[emitted_++];
  const std::size_t row = ctx_ * base;
  const std::span<const double> probs(model_.transition.data() + row, base);
  const Symbol a = static_cast<Symbol>(rng_.categorical(probs));
  if (model_.order > 0) {
    const std::size_t suffix_mod = model_.contexts() / base;
    ctx_ = (ctx_ % suffix_mod) * base + a;
  }
  return a;
}

Trajectory sample_path(const MarkovModel& model, std::size_t n, std::uint64_t seed) {
  if (n < 1) throw std::domain_error("path length must be >= 1");
  PathSampler sampler(model, seed);
  std::vector<Symbol> syms(n);
  for (std::size_t i = 0; i < n; ++i) syms[i] = sampler.next();
  Trajectory t;
  t.symbols = Word(std::move(syms));
  t.model_id = model.id;
  t.seed = seed;
  return t;
}

Potential markov_potential(const MarkovModel& model) {
  const std::size_t base = static_cast<std::size_t>(model.alphabet.size);
  std::vector<double> table(model.contexts() * base);
  for (std::size_t u = 0; u < table.size(); ++u) {
    const double p = model.transition[u];  // u = ctx * |A| + a, same layout
    if (!(p > 0.0)) throw std::domain_error("markov potential needs strictly positive transitions");
    table[u] = std::log(p);
  }
  return Potential::markov(model.alphabet, model.order + 1, std::move(table));
}

}  // namespace gibbslab
