#include <cmath>
#include <numbers>

#include "doctest.h"
#include "edpp/bridges.hpp"
#include "edpp/dpp_kernels.hpp"

using namespace edpp;

TEST_CASE("transition kernels conserve or lose mass by boundary") {
  const double r = 1.0;
  for (const char* tag : {"circ", "ar", "aa", "rr"}) {
    const BoundaryKind bk = parse_boundary(tag, true);
    const double L = boundary_length(bk, r);
    const int M = 400;
    double mass = 0.0;
    for (int k = 0; k < M; ++k) mass += transition(bk, 0.0, 0.4 * L, 0.5, (k + 0.5) * L / M, r) * L / M;
    CAPTURE(tag);
    if (bk.tag == Boundary::Circ || bk.tag == Boundary::ReflectReflect) {
      CHECK(mass == doctest::Approx(1.0).epsilon(1e-9));
    } else {
      CHECK(mass < 1.0);
    }
  }
}

TEST_CASE("absorbing walls kill the kernel") {
  const BoundaryKind aa = parse_boundary("aa");
  const double L = boundary_length(aa, 1.0);
  CHECK(std::abs(transition(aa, 0.0, 0.5, 0.7, 0.0, 1.0)) < 1e-14);
  CHECK(std::abs(transition(aa, 0.0, 0.5, 0.7, L, 1.0)) < 1e-14);
  CHECK(std::abs(transition(parse_boundary("ar"), 0.0, 0.5, 0.7, 0.0, 1.0)) < 1e-14);
}

TEST_CASE("image sum agrees with the theta form") {
  for (const char* tag : {"circ", "ar", "aa", "rr"}) {
    const BoundaryKind bk = parse_boundary(tag, false);
    CHECK(transition(bk, 0.0, 0.3, 1.0, 2.0, 1.0) ==
          doctest::Approx(transition_images(bk, 0.0, 0.3, 1.0, 2.0, 1.0, 8)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(transition_images(parse_boundary("rr"), 0.0, 0.3, 50.0, 2.0, 1.0, 1), AccuracyError);
}

TEST_CASE("Chapman-Kolmogorov") {
  CHECK(ck_residual(parse_boundary("circ", false), 0.0, 0.3, 0.9, 1.0, 4.0, 1.0, 256) < 1e-12);
  CHECK(ck_det_residual(parse_boundary("rr"), 0.0, 0.3, 0.9, {0.4, 2.0}, {1.0, 2.5}, 1.0, 128) < 1e-10);
  CHECK_THROWS(ck_residual(parse_boundary("rr"), 0.0, 0.0, 0.9, 1.0, 2.0, 1.0, 64));
}

TEST_CASE("bridge density equals the DPP density") {
  for (RootType T : kAllTypes) {
    const RootSystemSpec spec{T, 2, 1.0};
    const double L = domain_length(spec);
    const Configuration xs = {0.3 * L, 0.65 * L};
    CAPTURE(type_name(T));
    CHECK(bridge_density(spec, 0.4, 1.0, xs) == doctest::Approx(density({spec, 0.4, 1.0}, xs)).epsilon(1e-9));
    CHECK(matrix_identity_residual(spec, 0.4, xs) < 1e-11);
  }
}

TEST_CASE("KMLGV form of the denominator") {
  for (RootType T : kAllTypes)
    for (int N = min_particles(T); N <= 4; ++N) {
      const RootSystemSpec spec{T, N, 1.0};
      Configuration xs;
      for (int k = 0; k < N; ++k) xs.push_back((k + 0.37) * domain_length(spec) / (N + 0.5));
      CAPTURE(type_name(T));
      CAPTURE(N);
      CHECK(macdonald_kmlgv_residual(spec, 0.6, xs) < 1e-9);
    }
}

TEST_CASE("b phases are fourth roots of unity") {
  for (RootType T : kAllTypes)
    for (int N = min_particles(T); N <= 5; ++N) {
      const cplx p = b_phase({T, N, 1.0});
      CHECK(std::abs(std::abs(p) - 1.0) < 1e-15);
      CHECK(std::abs(std::pow(p, 4) - 1.0) < 1e-14);
    }
}

TEST_CASE("eta form of the A coefficient") {
  for (int N = 1; N <= 5; ++N) CHECK(eta_check_residual({RootType::A, N, 1.0}, 0.8) < 1e-12);
  CHECK_THROWS(eta_check_residual({RootType::C, 2, 1.0}, 0.8));
}

TEST_CASE("matrix identity at short times") {
  for (RootType T : kAllTypes) {
    const RootSystemSpec spec{T, 3, 1.0};
    const double L = domain_length(spec);
    CHECK(matrix_identity_residual(spec, 0.05, {0.2 * L, 0.5 * L, 0.8 * L}) < 1e-8);
    if (min_particles(T) == 1) CHECK(matrix_identity_residual({T, 1, 1.0}, 0.7, {0.4 * L}) < 1e-12);
  }
}

TEST_CASE("bridge density integrates to one") {
  const RootSystemSpec spec{RootType::Cv, 2, 1.0};
  const double L = domain_length(spec);
  const int M = 200;
  double s = 0.0;
  for (int a = 0; a < M; ++a)
    for (int b = a + 1; b < M; ++b) s += bridge_density(spec, 0.4, 1.0, {(a + 0.5) * L / M, (b + 0.5) * L / M});
  s *= (L / M) * (L / M);
  CHECK(s == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("binary128 pinned determinant matches the double one at short times") {
  const RootSystemSpec spec{RootType::D, 3, 1.0};
  const Configuration xs = {0.4, 1.5, 2.8};
  const Scaled q = pin_determinant(spec, 0.4, xs);
  std::vector<Scaled> P = pin_matrix(spec, 0.4, xs);
  Eigen::MatrixXcd m(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k) m(i, k) = P[i * 3 + k].value();
  CHECK(std::abs(q.value() - m.determinant()) < 1e-12 * std::abs(q.value()));
}

TEST_CASE("time reversal") {
  for (const char* tag : {"circ", "ar", "aa", "rr"}) {
    const BoundaryKind bk = parse_boundary(tag, true);
    const double a = transition(bk, 0.0, 0.5, 0.8, 2.1, 1.0);
    CHECK(a == doctest::Approx(transition(bk, 1.2, 2.1, 2.0, 0.5, 1.0)).epsilon(1e-13));
  }
}
