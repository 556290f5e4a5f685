#include "edpp/bridges.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <quadmath.h>

#include "edpp/biortho.hpp"
#include "edpp/errors.hpp"
#include "edpp/numerics.hpp"
#include "edpp/phase.hpp"
#include "edpp/theta.hpp"

namespace edpp {

namespace {

constexpr double kPi = std::numbers::pi;

void check_times(double s, double t) {
  if (!std::isfinite(s) || !std::isfinite(t) || !(t > s)) throw DomainError("transition requires s < t");
}

double p_bm(double d, double dt) { return std::exp(-d * d / (2.0 * dt)) / std::sqrt(2.0 * kPi * dt); }

Scaled th(theta::Index i, double v, const theta::Modular& tau) {
  return theta::theta_scaled(i, cplx{v, 0.0}, tau);
}

}  // namespace

BoundaryKind boundary_of(const RootSystemSpec& spec) {
  const RootDerived d = derive(spec);
  return {d.boundary, d.odd_parity};
}

BoundaryKind parse_boundary(const std::string& tag, bool odd) {
  if (tag == "circ") return {Boundary::Circ, odd};
  if (tag == "ar") return {Boundary::AbsorbReflect, false};
  if (tag == "aa") return {Boundary::AbsorbAbsorb, false};
  if (tag == "rr") return {Boundary::ReflectReflect, false};
  throw InvalidSpecError("unknown boundary kind '" + tag + "'");
}

double boundary_length(const BoundaryKind& bk, double r) {
  return bk.tag == Boundary::Circ ? 2.0 * kPi * r : kPi * r;
}

Scaled transition_scaled(const BoundaryKind& bk, double s, double x, double t, double y, double r) {
  check_times(s, t);
  if (!(r > 0.0)) throw DomainError("r must be positive");
  using theta::Index;
  const theta::Modular tau(cplx{0.0, (t - s) / (2.0 * kPi * r * r)});
  const double a = (x - y) / (2.0 * kPi * r);
  const double b = (x + y) / (2.0 * kPi * r);
  const Scaled pre(cplx{1.0 / (2.0 * kPi * r), 0.0});
  switch (bk.tag) {
    case Boundary::Circ: return pre * th(bk.odd ? Index::T3 : Index::T2, a, tau);
    case Boundary::AbsorbReflect: return pre * (th(Index::T2, a, tau) - th(Index::T2, b, tau));
    case Boundary::AbsorbAbsorb: return pre * (th(Index::T3, a, tau) - th(Index::T3, b, tau));
    case Boundary::ReflectReflect: return pre * (th(Index::T3, a, tau) + th(Index::T3, b, tau));
  }
  return Scaled();
}

double transition(const BoundaryKind& bk, double s, double x, double t, double y, double r) {
  return transition_scaled(bk, s, x, t, y, r).value().real();
}

double transition_images(const BoundaryKind& bk, double s, double x, double t, double y, double r, int windings) {
  check_times(s, t);
  if (windings < 1) throw DomainError("windings must be at least 1");
  const double dt = t - s;
  const double P = 2.0 * kPi * r;
  // Images with |w| > W lie at distance >= P (|w| - 1) >= P W, two per w.
  const double d = P * windings;
  const double tail = 4.0 * p_bm(d, dt) / (1.0 - std::exp(-d * P / dt));
  if (!(tail * P <= 1e-14)) {
    throw AccuracyError("transition_images: Gaussian tail bound above 1e-14; raise windings", tail * P);
  }
  std::vector<double> terms;
  for (int w = -windings; w <= windings; ++w) {
    const double sg = (w % 2 == 0) ? 1.0 : -1.0;
    switch (bk.tag) {
      case Boundary::Circ: terms.push_back((bk.odd ? 1.0 : sg) * p_bm(x - y - P * w, dt)); break;
      case Boundary::AbsorbReflect:
        terms.push_back(sg * (p_bm(x - y - P * w, dt) - p_bm(x + y - P * w, dt)));
        break;
      case Boundary::AbsorbAbsorb: terms.push_back(p_bm(x - y - P * w, dt) - p_bm(-x - y - P * w, dt)); break;
      case Boundary::ReflectReflect: terms.push_back(p_bm(x - y - P * w, dt) + p_bm(-x - y - P * w, dt)); break;
    }
  }
  return num::pairwise_sum(terms, 0.0);
}

namespace {

void check_separation(double s, double t, double r) {
  if (!(t - s >= 1e-6 * r * r)) throw DomainError("time separation below 1e-6 r^2 is too peaked for quadrature");
}

}  // namespace

double ck_residual(const BoundaryKind& bk, double s, double t, double u, double x, double z, double r, int nodes) {
  check_separation(s, t, r);
  check_separation(t, u, r);
  if (nodes < 4) throw DomainError("ck_residual needs at least 4 nodes");
  const double L = boundary_length(bk, r);
  const num::GaussRule rule = num::trapezoid(nodes, L, bk.tag == Boundary::Circ);
  std::vector<double> terms;
  for (std::size_t k = 0; k < rule.x.size(); ++k) {
    terms.push_back(rule.w[k] * transition(bk, s, x, t, rule.x[k], r) * transition(bk, t, rule.x[k], u, z, r));
  }
  return std::abs(num::pairwise_sum(terms, 0.0) - transition(bk, s, x, u, z, r));
}

double ck_det_residual(const BoundaryKind& bk, double s, double t, double u, const std::vector<double>& x,
                       const std::vector<double>& z, double r, int nodes) {
  if (x.size() != 2 || z.size() != 2) throw UnsupportedError("ck_det_residual is implemented for two particles");
  check_separation(s, t, r);
  check_separation(t, u, r);
  if (nodes < 4) throw DomainError("ck_det_residual needs at least 4 nodes");
  const double L = boundary_length(bk, r);
  const num::GaussRule rule = num::trapezoid(nodes, L, bk.tag == Boundary::Circ);
  const std::size_t m = rule.x.size();
  std::vector<double> a0(m), a1(m), b0(m), b1(m);
  for (std::size_t k = 0; k < m; ++k) {
    a0[k] = transition(bk, s, x[0], t, rule.x[k], r);
    a1[k] = transition(bk, s, x[1], t, rule.x[k], r);
    b0[k] = transition(bk, t, rule.x[k], u, z[0], r);
    b1[k] = transition(bk, t, rule.x[k], u, z[1], r);
  }
  // Both determinants are antisymmetric in (y1, y2), so the ordered domain
  // carries half of the full square.
  std::vector<double> terms;
  terms.reserve(m * m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      const double da = a0[i] * a1[j] - a0[j] * a1[i];
      const double db = b0[i] * b1[j] - b0[j] * b1[i];
      terms.push_back(0.5 * rule.w[i] * rule.w[j] * da * db);
    }
  const double lhs = num::pairwise_sum(terms, 0.0);
  const double rhs = transition(bk, s, x[0], u, z[0], r) * transition(bk, s, x[1], u, z[1], r) -
                     transition(bk, s, x[0], u, z[1], r) * transition(bk, s, x[1], u, z[0], r);
  return std::abs(lhs - rhs);
}

Eigen::MatrixXcd r_matrix(const RootSystemSpec& spec, double t) {
  if (!(t > 0.0)) throw DomainError("r_matrix requires t > 0");
  const RootDerived d = derive(spec);
  const int N = spec.N;
  const double r = spec.r;
  const double n = d.calN;
  const cplx I{0.0, 1.0};
  Eigen::MatrixXcd R(N, N);
  for (int j = 1; j <= N; ++j) {
    const double J = d.J[j - 1];
    const double e = std::exp(J * J * t / (2.0 * r * r));
    for (int k = 1; k <= N; ++k) {
      const double arg = (n - 2.0 * J) * d.v[k - 1] / (2.0 * r);
      const double edge = (n - 2.0 * J) * kPi / 2.0;
      cplx val;
      switch (spec.type) {
        case RootType::A: val = 2.0 * kPi * r / n * e * std::exp(-I * arg); break;
        case RootType::B:
        case RootType::Cv: {
          val = k < N ? 4.0 * kPi * r / n * e * std::sin(arg) : 2.0 * kPi * r / n * e * std::sin(edge);
          if (spec.type == RootType::Cv) val /= I;
          break;
        }
        case RootType::Bv: val = 4.0 * kPi * r / n * e * std::sin(arg); break;
        case RootType::C:
        case RootType::BC: val = 4.0 * kPi * r / (I * n) * e * std::sin(arg); break;
        case RootType::D:
          if (k == 1) {
            val = 2.0 * kPi * r / n * e;
          } else if (k < N) {
            val = 4.0 * kPi * r / n * e * std::cos(arg);
          } else {
            val = 2.0 * kPi * r / n * e * std::cos(edge);
          }
          break;
      }
      R(j - 1, k - 1) = val;
    }
  }
  return R;
}

namespace {

using f128 = __float128;

f128 p_bm_q(f128 d, f128 dt) { return expq(-d * d / (2 * dt)) / sqrtq(2 * M_PIq * dt); }

// Image sum in binary128; windings chosen so the omitted Gaussians are below e^{-90}.
f128 transition_q(const BoundaryKind& bk, double dt, double x, double y, double r) {
  const f128 P = 2 * M_PIq * r;
  const int W = 2 + static_cast<int>(std::ceil(std::sqrt(180.0 * dt) / (2.0 * kPi * r)));
  const f128 X = x, Y = y, T = dt;
  f128 acc = 0;
  for (int w = -W; w <= W; ++w) {
    const f128 sg = (w % 2 == 0) ? 1 : -1;
    switch (bk.tag) {
      case Boundary::Circ: acc += (bk.odd ? 1 : sg) * p_bm_q(X - Y - P * w, T); break;
      case Boundary::AbsorbReflect: acc += sg * (p_bm_q(X - Y - P * w, T) - p_bm_q(X + Y - P * w, T)); break;
      case Boundary::AbsorbAbsorb: acc += p_bm_q(X - Y - P * w, T) - p_bm_q(-X - Y - P * w, T); break;
      case Boundary::ReflectReflect: acc += p_bm_q(X - Y - P * w, T) + p_bm_q(-X - Y - P * w, T); break;
    }
  }
  return acc;
}

// Gaussian elimination with partial pivoting in binary128, row-major input.
Scaled det_q(std::vector<f128> a, int n) {
  double log_abs = 0.0;
  double sign = 1.0;
  for (int c = 0; c < n; ++c) {
    int piv = c;
    for (int i = c + 1; i < n; ++i)
      if (fabsq(a[i * n + c]) > fabsq(a[piv * n + c])) piv = i;
    if (a[piv * n + c] == 0) return Scaled();
    if (piv != c) {
      for (int k = 0; k < n; ++k) std::swap(a[c * n + k], a[piv * n + k]);
      sign = -sign;
    }
    const f128 p = a[c * n + c];
    for (int i = c + 1; i < n; ++i) {
      const f128 f = a[i * n + c] / p;
      for (int k = c; k < n; ++k) a[i * n + k] -= f * a[c * n + k];
    }
    if (p < 0) sign = -sign;
    log_abs += static_cast<double>(logq(fabsq(p)));
  }
  return Scaled(cplx{sign, 0.0}, log_abs);
}

// det[p(s, from_i; t, to_k)] with binary128 entries.
Scaled pinned_det(const BoundaryKind& bk, double dt, const std::vector<double>& from, const std::vector<double>& to,
                  double r) {
  const int n = static_cast<int>(from.size());
  std::vector<f128> a(static_cast<std::size_t>(n * n));
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) a[i * n + k] = transition_q(bk, dt, from[i], to[k], r);
  return det_q(std::move(a), n);
}

}  // namespace

Scaled pin_determinant(const RootSystemSpec& spec, double t, const Configuration& xs) {
  if (!(t > 0.0)) throw DomainError("t must be positive");
  const RootDerived d = derive(spec);
  if (static_cast<int>(xs.size()) != spec.N) throw DomainError("configuration size differs from N");
  return pinned_det({d.boundary, d.odd_parity}, t, d.v, xs, spec.r);
}

std::vector<Scaled> pin_matrix(const RootSystemSpec& spec, double t, const Configuration& xs) {
  const RootDerived d = derive(spec);
  const int N = spec.N;
  if (static_cast<int>(xs.size()) != N) throw DomainError("configuration size differs from N");
  const BoundaryKind bk{d.boundary, d.odd_parity};
  std::vector<Scaled> P(static_cast<std::size_t>(N * N));
  for (int i = 0; i < N; ++i)
    for (int k = 0; k < N; ++k) P[i * N + k] = transition_scaled(bk, 0.0, d.v[i], t, xs[k], spec.r);
  return P;
}

double matrix_identity_residual(const RootSystemSpec& spec, double t, const Configuration& xs) {
  check_alcove(spec, xs);
  const int N = spec.N;
  const Eigen::MatrixXcd R = r_matrix(spec, t);
  const std::vector<Scaled> Ps = pin_matrix(spec, t, xs);
  Eigen::MatrixXcd P(N, N), M(N, N);
  const RootDerived d = derive(spec);
  for (int k = 0; k < N; ++k) {
    const std::vector<Scaled> col = m_row(spec, d, xs[k], t);
    for (int j = 0; j < N; ++j) {
      M(j, k) = col[j].value();
      P(j, k) = Ps[j * N + k].value();
    }
  }
  return (R * P - M).cwiseAbs().maxCoeff() / M.cwiseAbs().maxCoeff();
}

double bridge_density(const RootSystemSpec& spec, double t, double t_star, const Configuration& xs) {
  if (!(t > 0.0) || !(t < t_star)) throw DomainError("bridge_density requires 0 < t < t_star");
  check_alcove(spec, xs);
  const RootDerived d = derive(spec);
  const BoundaryKind bk{d.boundary, d.odd_parity};
  const Scaled den = pinned_det(bk, t_star, d.v, d.v, spec.r);
  if (den.is_zero()) throw UnderflowError("bridge_density: pinned determinant vanishes");
  const Scaled p = pinned_det(bk, t, d.v, xs, spec.r) * pinned_det(bk, t_star - t, xs, d.v, spec.r) / den;
  return p.value().real();
}

cplx b_phase(const RootSystemSpec& spec) {
  const int N = spec.N;
  switch (spec.type) {
    case RootType::A: return N % 2 == 0 ? ipow(N * (N + 1) / 2) : ipow((N - 1) * (N - 2) / 2);
    case RootType::B:
    case RootType::Bv:
    case RootType::D: return {1.0, 0.0};
    case RootType::C:
    case RootType::Cv:
    case RootType::BC: return ipow(N);
  }
  return {1.0, 0.0};
}

Scaled b_coeff(const RootSystemSpec& spec, double t) {
  const Eigen::MatrixXcd R = r_matrix(spec, t);
  const num::ScaledDet dr = num::determinant(R);
  if (dr.cond > 1e12) throw IllConditionedError("r matrix condition estimate above 1e12");
  const LogReal a = coeff_a(spec, t);
  return Scaled(b_phase(spec)) * dr.det * Scaled(cplx{static_cast<double>(a.sign), 0.0}, -a.log_abs);
}

double macdonald_kmlgv_residual(const RootSystemSpec& spec, double t, const Configuration& xs) {
  check_alcove(spec, xs);
  const RootDerived d = derive(spec);
  const int N = spec.N;
  const theta::Modular tau(cplx{0.0, d.calN * t / (2.0 * kPi * spec.r * spec.r)});
  Scaled lhs = weyl_w(spec, xs, tau);
  if (spec.type == RootType::A) {
    double sum = 0.0;
    for (double x : xs) sum += x / (2.0 * kPi * spec.r);
    lhs *= th(N % 2 == 0 ? theta::Index::T0 : theta::Index::T3, sum, tau);
  }
  const Scaled rhs = b_coeff(spec, t) * pin_determinant(spec, t, xs);
  return num::relative_difference(lhs, rhs);
}

double eta_check_residual(const RootSystemSpec& spec, double t) {
  if (spec.type != RootType::A) throw UnsupportedError("eta check applies to type A only");
  validate(spec);
  const int N = spec.N;
  const double im = N * t / (2.0 * kPi * spec.r * spec.r);
  const double log_closed = N * std::log(2.0 * kPi * spec.r) - 0.5 * N * std::log(static_cast<double>(N)) +
                            (N - 1) * (N - 2) / 2.0 * theta::log_eta_imag(im);
  return num::relative_difference(b_coeff(spec, t), Scaled(cplx{1.0, 0.0}, log_closed));
}

}  // namespace edpp
