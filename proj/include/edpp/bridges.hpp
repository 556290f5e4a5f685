#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "edpp/macdonald.hpp"
#include "edpp/root_system.hpp"
#include "edpp/scaled.hpp"

namespace edpp {

/// Boundary condition of the one-particle heat kernel. `odd` selects the
/// theta_3 (odd N) circle kernel and is meaningful only for Circ.
struct BoundaryKind {
  Boundary tag = Boundary::Circ;
  bool odd = true;
};

BoundaryKind boundary_of(const RootSystemSpec& spec);
BoundaryKind parse_boundary(const std::string& tag, bool odd = true);

/// Domain length of the kernel: 2 pi r for Circ, pi r otherwise.
double boundary_length(const BoundaryKind& bk, double r);

/// p(s, x; t, y) in theta form.
double transition(const BoundaryKind& bk, double s, double x, double t, double y, double r);
Scaled transition_scaled(const BoundaryKind& bk, double s, double x, double t, double y, double r);

/// Same kernel as a sum of Brownian images with |w| <= windings. Throws
/// AccuracyError when the Gaussian tail bound on the omitted terms, relative
/// to 1 / (2 pi r), exceeds 1e-14.
double transition_images(const BoundaryKind& bk, double s, double x, double t, double y, double r, int windings);

/// |int p(s, x; t, y) p(t, y; u, z) dy - p(s, x; u, z)| by the trapezoid rule
/// with `nodes` panels. Requires t - s and u - t at least 1e-6 r^2.
double ck_residual(const BoundaryKind& bk, double s, double t, double u, double x, double z, double r, int nodes);

/// Two-particle version with determinants over the ordered y-domain.
double ck_det_residual(const BoundaryKind& bk, double s, double t, double u, const std::vector<double>& x,
                       const std::vector<double>& z, double r, int nodes);

/// r(t) with M_j(x_k, t) = sum_i r_ji(t) p(0, v_i; t, x_k).
Eigen::MatrixXcd r_matrix(const RootSystemSpec& spec, double t);

/// P_ik = p(0, v_i; t, x_k) for the boundary of the spec.
std::vector<Scaled> pin_matrix(const RootSystemSpec& spec, double t, const Configuration& xs);

/// det P(0, v; t, x) from binary128 image sums and binary128 elimination.
Scaled pin_determinant(const RootSystemSpec& spec, double t, const Configuration& xs);

/// max_jk |(r P)_jk - M_jk| / max_jk |M_jk|.
double matrix_identity_residual(const RootSystemSpec& spec, double t, const Configuration& xs);

/// det P(0, v; t, x) det P(t, x; t*, v) / det P(0, v; t*, v), with each
/// determinant from pin_determinant's binary128 route.
/// UnderflowError when the denominator vanishes.
double bridge_density(const RootSystemSpec& spec, double t, double t_star, const Configuration& xs);

/// Phase of b(t) relative to det r(t) / a(t).
cplx b_phase(const RootSystemSpec& spec);

/// b(t) = phase det r(t) / a(t).
Scaled b_coeff(const RootSystemSpec& spec, double t);

/// Relative residual of W (with the A-type theta factor of sum xi) against
/// b(t) det P(0, v; t, x).
double macdonald_kmlgv_residual(const RootSystemSpec& spec, double t, const Configuration& xs);

/// A-type only: relative difference between b(t) and
/// (2 pi r)^N N^{-N/2} eta(N tau)^{(N-1)(N-2)/2}.
double eta_check_residual(const RootSystemSpec& spec, double t);

}  // namespace edpp
