#pragma once

#include <vector>

#include "edpp/root_system.hpp"
#include "edpp/scaled.hpp"
#include "quad128.hpp"

namespace edpp::detail {

// M_j(x, t) as a Fourier series in x for imaginary tau.
struct FourierSetup {
  Sharp sharp;
  double J;
  int calN;
  double r;
  double sigma;  // J / calN
  double zfac;   // z = zfac * x
  double T;      // Im of calN^2 tau(t)
  double t;
};

FourierSetup fourier_setup(const RootSystemSpec& spec, const RootDerived& d, int j, double t);

c128 m_series128(const FourierSetup& f, double x);

// Same with z = calN xi(x) given directly.
c128 m_series128_z(const FourierSetup& f, real128 z);

// Determinant by partial-pivot elimination in binary128; row-major n x n.
Scaled det128(std::vector<c128> a, int n);

}  // namespace edpp::detail
