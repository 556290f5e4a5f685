#pragma once

#include <cstdint>
#include <vector>

#include "edpp/root_system.hpp"
#include "edpp/scaled.hpp"
#include "edpp/theta.hpp"

namespace edpp {

/// Ordered configuration 0 <= x_1 < ... < x_N inside [0, L] (or [0, 2 pi r)).
using Configuration = std::vector<double>;

/// Throws DomainError unless xs is strictly ordered and inside the domain.
void check_alcove(const RootSystemSpec& spec, const Configuration& xs);

/// alpha~_N: N tau / 2 for even N, (1 + N tau) / 2 for odd N.
cplx alpha_tilde(int N, cplx tau);

/// Macdonald denominator W^R(xi; tau) at the scaled coordinates xi.
Scaled weyl_w(RootType type, const std::vector<double>& xi, const theta::Modular& tau);

/// W^R(xi(x); calN tau(t)) for a configuration in length units.
Scaled weyl_w(const RootSystemSpec& spec, const Configuration& xs, const theta::Modular& tau);

/// a^R(t) as (log magnitude, sign).
LogReal coeff_a(const RootSystemSpec& spec, double t);

/// det[M_j(x_k, t)] via equilibrated LU.
Scaled det_m(const RootSystemSpec& spec, const Configuration& xs, double t, double* cond = nullptr);

/// det[M_j(x_k, t)] from binary128 Fourier-series entries and elimination;
/// falls back to det_m when the series coefficients leave the binary128 range.
Scaled det_m_extended(const RootSystemSpec& spec, const Configuration& xs, double t);

/// Right-hand side of the Macdonald determinant formula including the phase
/// and, for A, the theta_0 / theta_3 factor of sum xi.
Scaled macdonald_rhs(const RootSystemSpec& spec, const Configuration& xs, double t);

/// |det M - rhs| / max(|det M|, |rhs|). Coincident points raise
/// DegenerateInputError; condition estimates above 1e12 raise IllConditionedError.
double denominator_residual(const RootSystemSpec& spec, const Configuration& xs, double t);

enum class SelbergMethod { Grid, MonteCarlo };

struct SelbergOptions {
  SelbergMethod method = SelbergMethod::Grid;
  long budget = 1L << 20;       // total integrand evaluations allowed
  double target = 1e-10;        // grid: successive-estimate agreement; mc: relative standard error
  std::uint64_t seed = 1;
  int workers = 0;
};

struct SelbergResult {
  double lhs;
  double rhs;
  double rel_err;
  long evaluations;
  double estimate_error;  // grid: last refinement change; mc: standard error (relative)
};

/// Selberg-type integral over [0, L]^N of the product of two denominators at
/// t and t*-t against N! prod m_n(t*) / (a(t*-t) a(t)). Throws AccuracyError
/// (carrying the best lhs/rhs ratio) when the budget runs out first.
SelbergResult selberg_check(const RootSystemSpec& spec, double t, double t_star, const SelbergOptions& opt);

/// log of N! prod m_n(t*) / (a(t*-t) a(t)).
double selberg_log_rhs(const RootSystemSpec& spec, double t, double t_star);

}  // namespace edpp
