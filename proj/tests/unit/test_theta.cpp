#include <cmath>
#include <numbers>

#include "doctest.h"
#include "edpp/theta.hpp"

using edpp::cplx;
using edpp::DomainError;
using edpp::Scaled;
using namespace edpp::theta;

namespace {
double rel(cplx a, cplx b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }
}  // namespace

TEST_CASE("theta agrees with the raw series") {
  for (cplx tau : {cplx{0.0, 0.8}, cplx{0.25, 1.3}, cplx{-0.4, 0.5}})
    for (cplx v : {cplx{0.1, 0.0}, cplx{0.37, 0.2}, cplx{-0.8, -0.1}})
      for (int i = 0; i < 4; ++i) {
        const Modular m(tau);
        CHECK(rel(theta(index_from_int(i), v, m), theta_series(index_from_int(i), v, m)) < 1e-13);
      }
}

TEST_CASE("theta_1 vanishes at the origin and the others do not") {
  const Modular m(cplx{0.0, 1.0});
  CHECK(std::abs(theta(Index::T1, 0.0, m)) < 1e-300);
  CHECK(std::abs(theta(Index::T0, 0.0, m)) > 0.5);
  CHECK(std::abs(theta(Index::T2, 0.0, m)) > 0.5);
  CHECK(std::abs(theta(Index::T3, 0.0, m)) > 0.5);
}

TEST_CASE("Jacobi quartic identity") {
  for (double y : {0.3, 1.0, 2.2}) {
    const Modular m(cplx{0.0, y});
    const cplx t0 = theta(Index::T0, 0.0, m), t2 = theta(Index::T2, 0.0, m), t3 = theta(Index::T3, 0.0, m);
    CHECK(rel(std::pow(t3, 4), std::pow(t2, 4) + std::pow(t0, 4)) < 1e-13);
  }
}

TEST_CASE("theta_1 derivative is pi times the product of the other three") {
  const Modular m(cplx{0.1, 0.9});
  const double h = 1e-4;
  const cplx d = (-theta(Index::T1, 2 * h, m) + 8.0 * theta(Index::T1, h, m) - 8.0 * theta(Index::T1, -h, m) +
                  theta(Index::T1, -2 * h, m)) /
                 (12.0 * h);
  const cplx rhs = std::numbers::pi * theta(Index::T0, 0.0, m) * theta(Index::T2, 0.0, m) * theta(Index::T3, 0.0, m);
  CHECK(rel(d, rhs) < 1e-10);
}

TEST_CASE("scaled theta below the double range") {
  const double eps = 1e-4, v = 0.3;
  const Scaled s = theta_scaled(Index::T3, v, Modular(cplx{0.0, eps}));
  CHECK(s.log_abs() == doctest::Approx(0.5 * std::log(1.0 / eps) - std::numbers::pi * v * v / eps).epsilon(1e-14));
}

TEST_CASE("eta modular relation on the imaginary axis") {
  for (double y : {0.2, 0.7, 1.0, 3.0}) {
    CHECK(std::abs(log_eta_imag(1.0 / y) - (log_eta_imag(y) + 0.5 * std::log(y))) < 1e-12);
  }
  const EtaQ e = eta_and_q(Modular(cplx{0.0, 1.5}));
  CHECK(std::abs(std::log(std::abs(e.eta)) - log_eta_imag(1.5)) < 1e-13);
}

TEST_CASE("invalid arguments") {
  CHECK_THROWS_AS(Modular(cplx{0.3, 0.0}), DomainError);
  CHECK_THROWS_AS(Modular(cplx{0.3, -1.0}), DomainError);
  CHECK_THROWS_AS(index_from_int(4), DomainError);
  CHECK_THROWS_AS(theta_series(Index::T3, 0.1, Modular(cplx{0.0, 0.01})), edpp::AccuracyError);
}

TEST_CASE("reference values") {
  CHECK(std::abs(theta(Index::T1, 0.0, Modular(cplx{0.0, 0.5}))) < 1e-15);
  CHECK(std::abs(theta(Index::T2, 0.5, Modular(cplx{0.0, 1.0}))) < 1e-15);
  CHECK(std::abs(theta(Index::T3, 0.0, Modular(cplx{0.0, 1.0})) - 1.0864348112133080) < 1e-12);
  CHECK(std::abs(theta_series(Index::T2, 0.0, Modular(cplx{0.0, 1.0})) - 0.91357913815612) < 1e-11);
  const cplx t1 = theta_series(Index::T1, 0.25, Modular(cplx{0.0, 1.0}));
  CHECK(std::abs(t1.imag()) < 1e-15);
  CHECK(t1.real() > 0.0);
  CHECK(rel(theta_series(Index::T3, 0.0, Modular(cplx{0.0, 0.3})), theta(Index::T3, 0.0, Modular(cplx{0.0, 0.3}))) <
        1e-11);
}

TEST_CASE("nome and eta at tau = i") {
  const EtaQ e = eta_and_q(Modular(cplx{0.0, 1.0}));
  CHECK(std::abs(e.q - 0.04321391826377226) < 1e-16);
  CHECK(std::abs(e.eta - 0.7682254223260566) < 1e-12);
  CHECK(rel(e.q0, e.eta * std::pow(e.q, -1.0 / 12.0)) < 1e-13);
}

TEST_CASE("imaginary transformations on the imaginary axis") {
  const cplx I{0.0, 1.0};
  const Index S[4] = {Index::T2, Index::T1, Index::T0, Index::T3};
  for (double y : {0.1, 0.5, 2.0})
    for (cplx v : {cplx{0.13, 0.0}, cplx{0.4, 0.05}}) {
      const cplx tau{0.0, y};
      for (int mu = 0; mu < 4; ++mu) {
        const cplx c = mu == 1 ? I : cplx{1.0, 0.0};
        const cplx rhs = c * std::pow(-I * tau, -0.5) * std::exp(-I * std::numbers::pi * v * v / tau) *
                         theta_series(S[mu], v / tau, Modular(-1.0 / tau));
        CHECK(rel(theta(index_from_int(mu), v, Modular(tau)), rhs) < 1e-12);
      }
    }
}

TEST_CASE("large Im tau asymptotics") {
  const cplx tau{0.0, 20.0};
  const Modular m(tau);
  const double v = 0.31;
  const cplx lead = 2.0 * std::exp(cplx{0.0, 1.0} * tau * std::numbers::pi / 4.0);
  CHECK(rel(theta(Index::T0, v, m), 1.0) < 1e-8);
  CHECK(rel(theta(Index::T3, v, m), 1.0) < 1e-8);
  CHECK(rel(theta(Index::T1, v, m), lead * std::sin(std::numbers::pi * v)) < 1e-8);
  CHECK(rel(theta(Index::T2, v, m), lead * std::cos(std::numbers::pi * v)) < 1e-8);
}
