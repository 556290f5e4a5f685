#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "edpp/dpp_kernels.hpp"
#include "edpp/errors.hpp"
#include "edpp/numerics.hpp"

namespace edpp {

namespace {

struct ChainOutput {
  std::vector<Configuration> samples;
  double acceptance = 0.0;
};

ChainOutput run_chain(const DppModel& model, const ChainConfig& cfg, int chain) {
  const int N = model.N();
  const double L = model.L();
  const double sd = cfg.proposal_sd > 0.0 ? cfg.proposal_sd : L / (8.0 * N);

  std::seed_seq seq{static_cast<std::uint64_t>(cfg.seed), static_cast<std::uint64_t>(chain)};
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> step(0.0, sd);
  std::uniform_int_distribution<int> pick(0, N - 1);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  Configuration xs(N);
  for (int k = 0; k < N; ++k) xs[k] = L * (k + 0.5) / N;
  double lw = model.log_weight(xs);

  ChainOutput out;
  long accepted = 0;
  const long total = cfg.burn_in + cfg.steps;
  for (long it = 0; it < total; ++it) {
    const int k = pick(rng);
    const double prop = xs[k] + step(rng);
    const double lo = k == 0 ? 0.0 : xs[k - 1];
    const double hi = k == N - 1 ? L : xs[k + 1];
    const double u = unif(rng);
    if (prop > lo && prop < hi) {
      const double old = xs[k];
      xs[k] = prop;
      const double lw_new = model.log_weight(xs);
      if (std::isfinite(lw_new) && std::log(u) < lw_new - lw) {
        lw = lw_new;
        if (it >= cfg.burn_in) ++accepted;
      } else {
        xs[k] = old;
      }
    }
    if (it >= cfg.burn_in && (it - cfg.burn_in + 1) % cfg.thin == 0) out.samples.push_back(xs);
  }
  out.acceptance = cfg.steps > 0 ? static_cast<double>(accepted) / static_cast<double>(cfg.steps) : 0.0;
  return out;
}

}  // namespace

SampleSet mcmc_sample(const KernelSpec& ks, const ChainConfig& chain) {
  validate(ks);
  if (chain.steps < 0 || chain.burn_in < 0 || chain.thin < 1 || chain.chains < 1 || chain.proposal_sd < 0.0) {
    throw DomainError("invalid chain configuration");
  }
  const DppModel model(ks);
  std::vector<ChainOutput> outs(chain.chains);
  num::parallel_for(outs.size(), num::resolve_workers(chain.workers),
                    [&](std::size_t c) { outs[c] = run_chain(model, chain, static_cast<int>(c)); });
  SampleSet set;
  for (int c = 0; c < chain.chains; ++c) {
    for (auto& s : outs[c].samples) {
      set.samples.push_back(std::move(s));
      set.chain_of.push_back(c);
    }
    set.acceptance.push_back(outs[c].acceptance);
    if (outs[c].acceptance < 0.05 || outs[c].acceptance > 0.95) {
      set.warnings.push_back("chain " + std::to_string(c) + ": acceptance rate " +
                             std::to_string(outs[c].acceptance) + " outside [0.05, 0.95]");
    }
  }
  return set;
}

Histogram empirical_density(const std::vector<Configuration>& samples, int bins, double L, int batches) {
  if (samples.empty()) throw DomainError("empirical_density needs at least one sample");
  if (bins < 1 || !(L > 0.0) || batches < 1) throw DomainError("invalid histogram parameters");
  const double width = L / bins;
  auto bin_of = [&](double x) {
    if (x < 0.0 || x > L) throw DomainError("sample point outside [0, L]");
    return std::min(bins - 1, static_cast<int>(x / width));
  };
  const std::size_t S = samples.size();
  const int B = static_cast<int>(std::min<std::size_t>(batches, S));
  std::vector<std::vector<long>> per_batch(B, std::vector<long>(bins, 0));
  std::vector<std::size_t> batch_size(B, 0);
  Histogram h;
  h.count.assign(bins, 0);
  for (std::size_t s = 0; s < S; ++s) {
    const int b = static_cast<int>(s * B / S);
    ++batch_size[b];
    for (double x : samples[s]) {
      const int k = bin_of(x);
      ++h.count[k];
      ++per_batch[b][k];
    }
  }
  for (int k = 0; k < bins; ++k) {
    h.left.push_back(k * width);
    h.right.push_back(k + 1 == bins ? L : (k + 1) * width);
    h.density.push_back(static_cast<double>(h.count[k]) / (static_cast<double>(S) * width));
    double se = 0.0;
    if (B > 1) {
      double mean = 0.0, var = 0.0;
      std::vector<double> d(B);
      for (int b = 0; b < B; ++b) {
        d[b] = static_cast<double>(per_batch[b][k]) / (static_cast<double>(batch_size[b]) * width);
        mean += d[b];
      }
      mean /= B;
      for (int b = 0; b < B; ++b) var += (d[b] - mean) * (d[b] - mean);
      se = std::sqrt(var / (B - 1) / B);
    }
    h.stderr_.push_back(se);
  }
  return h;
}

std::vector<double> bin_averaged_kernel(const DppModel& model, const Histogram& h) {
  const num::GaussRule g = num::gauss_legendre(8);
  std::vector<double> out;
  for (std::size_t k = 0; k < h.left.size(); ++k) {
    const double c = 0.5 * (h.left[k] + h.right[k]);
    const double hw = 0.5 * (h.right[k] - h.left[k]);
    double acc = 0.0;
    for (std::size_t i = 0; i < g.x.size(); ++i) acc += 0.5 * g.w[i] * model.kernel(c + hw * g.x[i], c + hw * g.x[i]).real();
    out.push_back(acc);
  }
  return out;
}

}  // namespace edpp
