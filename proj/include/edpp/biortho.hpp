#pragma once

#include <vector>

#include <Eigen/Dense>

#include "edpp/root_system.hpp"
#include "edpp/scaled.hpp"
#include "edpp/theta.hpp"

namespace edpp {

struct ScaledCoords {
  double xi;
  cplx tau;
};

/// xi = x / (2 pi r), tau = i t / (2 pi r^2).
ScaledCoords scaled(double x, double t, double r);

/// Building blocks Theta^A..Theta^D(sigma, z; tau).
Scaled theta_block_scaled(Sharp sharp, double sigma, cplx z, const theta::Modular& tau);
cplx theta_block(Sharp sharp, double sigma, cplx z, const theta::Modular& tau);

/// The family {M_j(., t)} with final time t_star.
class BiorthoFamily {
 public:
  BiorthoFamily(const RootSystemSpec& spec, double t_star);

  const RootSystemSpec& spec() const { return spec_; }
  const RootDerived& derived() const { return d_; }
  double t_star() const { return t_star_; }
  int size() const { return spec_.N; }

  /// M_j(x, t), j = 1..N.
  Scaled m_scaled(int j, double x, double t) const;
  /// All M_j(x, t) for j = 1..N.
  std::vector<Scaled> m_row(double x, double t) const;

  /// log m_j(t_star) (the norms are positive).
  double log_norm(int j) const { return log_norms_.at(j - 1); }
  const std::vector<double>& log_norms() const { return log_norms_; }

 private:
  RootSystemSpec spec_;
  RootDerived d_;
  double t_star_;
  std::vector<double> log_norms_;
};

/// M_1..M_N at (x, t) for a spec with precomputed constants.
std::vector<Scaled> m_row(const RootSystemSpec& spec, const RootDerived& d, double x, double t);

/// M_j(x, t) for a spec; throws IndexError for j outside 1..N, DomainError for t <= 0.
cplx m_fn(const RootSystemSpec& spec, int j, double x, double t);

/// M_j(x, t) evaluated from its Fourier series (no modular transformation);
/// independent route used by tests and the Gram quadrature.
cplx m_fn_series(const RootSystemSpec& spec, int j, double x, double t);

/// Norm m_j(t_star) as a logarithm and as a plain value.
double log_norm_const(const RootSystemSpec& spec, int j, double t_star);
double norm_const(const RootSystemSpec& spec, int j, double t_star);

struct GramResult {
  Eigen::MatrixXcd G;      // G(j-1, k-1) = int conj(M_j(x, t*-t)) M_k(x, t) dx
  double error_estimate;   // max_jk |G_n - G_2n| / m_j
  int nodes;               // panel count of the returned estimate
  double rounding_floor;   // binary128 rounding bound, same scaling as error_estimate
};

/// Trapezoid with `nodes` panels; the error estimate compares with 2*nodes.
/// The integrand is summed in binary128 so that off-diagonal cancellation is
/// resolved below the double rounding level of the diagonal.
GramResult gram(const BiorthoFamily& family, double t, int nodes);

/// Node doubling from 128 to 8192 until successive estimates differ by
/// less than tol (scaled by m_j), or by less than the rounding floor when that
/// is larger.
GramResult gram_converged(const BiorthoFamily& family, double t, double tol = 1e-11);

/// max_jk |G_jk - m_j delta_jk| / m_j.
double biortho_defect(const BiorthoFamily& family, const Eigen::MatrixXcd& G);

}  // namespace edpp
