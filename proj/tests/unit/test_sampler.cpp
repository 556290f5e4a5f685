#include <cmath>

#include "doctest.h"
#include "edpp/dpp_kernels.hpp"

using namespace edpp;

TEST_CASE("chains are deterministic and stay in the alcove") {
  const KernelSpec ks{{RootType::C, 2, 1.0}, 0.5, 1.0};
  ChainConfig cfg;
  cfg.steps = 20000;
  cfg.burn_in = 2000;
  cfg.chains = 3;
  cfg.seed = 11;
  const SampleSet a = mcmc_sample(ks, cfg);
  cfg.workers = 1;
  const SampleSet b = mcmc_sample(ks, cfg);
  REQUIRE(a.samples.size() == 3 * 20000 / 20);
  CHECK(a.samples == b.samples);
  CHECK(a.chain_of == b.chain_of);
  for (const auto& xs : a.samples) CHECK_NOTHROW(check_alcove(ks.spec, xs));
  for (double acc : a.acceptance) CHECK((acc > 0.05 && acc < 0.95));
}

TEST_CASE("different seeds give different chains") {
  const KernelSpec ks{{RootType::A, 2, 1.0}, 0.5, 1.0};
  ChainConfig cfg;
  cfg.steps = 2000;
  cfg.seed = 1;
  const SampleSet a = mcmc_sample(ks, cfg);
  cfg.seed = 2;
  CHECK(a.samples != mcmc_sample(ks, cfg).samples);
}

TEST_CASE("histogram normalization") {
  std::vector<Configuration> s;
  for (int k = 0; k < 1000; ++k) s.push_back({0.1 + 0.0007 * k, 2.0 + 0.0009 * k});
  const Histogram h = empirical_density(s, 10, 4.0, 10);
  double total = 0.0;
  long count = 0;
  for (std::size_t k = 0; k < h.density.size(); ++k) {
    total += h.density[k] * (h.right[k] - h.left[k]);
    count += h.count[k];
  }
  CHECK(total == doctest::Approx(2.0));
  CHECK(count == 2000);
}

TEST_CASE("bin-averaged kernel integrates to N") {
  const DppModel model({{RootType::BC, 2, 1.0}, 0.5, 1.0});
  Histogram h = empirical_density({{0.5, 1.0}}, 20, model.L(), 1);
  const std::vector<double> k = bin_averaged_kernel(model, h);
  double total = 0.0;
  for (std::size_t i = 0; i < k.size(); ++i) total += k[i] * (h.right[i] - h.left[i]);
  CHECK(total == doctest::Approx(2.0).epsilon(1e-8));
}

TEST_CASE("single configuration gives N unit masses") {
  const Histogram h = empirical_density({{0.5, 1.5, 2.5}}, 4, 4.0, 1);
  CHECK(h.count == std::vector<long>{1, 1, 1, 0});
  for (int k = 0; k < 3; ++k) CHECK(h.density[k] == doctest::Approx(1.0));
}
