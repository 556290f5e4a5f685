#include "edpp/biortho.hpp"

#include <cmath>
#include <numbers>

#include "edpp/numerics.hpp"
#include "series128.hpp"

namespace edpp {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr cplx kI{0.0, 1.0};

using detail::c128;
using detail::FourierSetup;
using detail::real128;

void check_time(double t) {
  if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("time must be positive and finite");
}

void check_index(const RootSystemSpec& spec, int j) {
  if (j < 1 || j > spec.N) {
    throw IndexError("function index " + std::to_string(j) + " outside 1.." + std::to_string(spec.N));
  }
}

// Range of Fourier indices n whose coefficient
// exp(-pi T [(n - 1/2 + sigma)^2 - sigma^2]) is within e^{-budget} of the largest.
std::pair<long, long> series_range(double T, double sigma, double budget) {
  const double centre = 0.5 - sigma;
  const double half = std::sqrt(budget / (kPi * T)) + 1.0;
  return {static_cast<long>(std::floor(centre - half)), static_cast<long>(std::ceil(centre + half))};
}

// Fourier form of M_j for imaginary tau = iT and real z:
//   A: sum c_n e^{i phi_n}        B: -2 sum (-1)^n c_n sin phi_n
//   C: 2i sum c_n sin phi_n       D: 2 sum c_n cos phi_n
// c_n = exp(-pi T [(n-1/2)^2 + (2n-1) sigma]), phi_n = pi z (2n - 1 + 2 sigma).
template <class Real, class Complex, class ExpFn, class ExpiFn>
Complex fourier_block(Sharp sharp, Real sigma, Real z, Real T, Real pi, long n0, long n1, ExpFn expf,
                      ExpiFn expi) {
  Complex acc{};
  const Complex step = expi(2 * pi * z);
  Complex phase = expi(pi * z * (2 * Real(n0) - 1 + 2 * sigma));
  for (long n = n0; n <= n1; ++n) {
    const Real h = Real(n) - Real(0.5);
    const Real c = expf(-pi * T * (h * h + 2 * h * sigma));
    switch (sharp) {
      case Sharp::A: acc += c * phase; break;
      case Sharp::B: {
        const Real s = (n % 2 == 0 ? -2 : 2) * c * phase.im;
        acc += Complex{s, 0};
        break;
      }
      case Sharp::C: acc += Complex{0, 2 * c * phase.im}; break;
      case Sharp::D: acc += Complex{2 * c * phase.re, 0}; break;
    }
    phase = phase * step;
  }
  return acc;
}

struct c64 {
  double re = 0;
  double im = 0;
  c64& operator+=(const c64& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  friend c64 operator*(const c64& a, const c64& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend c64 operator*(double s, const c64& a) { return {s * a.re, s * a.im}; }
};

}  // namespace

namespace detail {

FourierSetup fourier_setup(const RootSystemSpec& spec, const RootDerived& d, int j, double t) {
  const double n = d.calN;
  return {d.sharp,      d.J[j - 1], d.calN, spec.r, d.J[j - 1] / n, n / (2.0 * kPi * spec.r),
          n * n * t / (2.0 * kPi * spec.r * spec.r), t};
}

c128 m_series128(const FourierSetup& f, double x) {
  const real128 n = f.calN;
  const real128 z = n * static_cast<real128>(x) / (2 * detail::kPi128 * static_cast<real128>(f.r));
  return m_series128_z(f, z);
}

c128 m_series128_z(const FourierSetup& f, real128 z) {
  const auto [n0, n1] = series_range(f.T, f.sigma, 190.0);
  const real128 n = f.calN;
  const real128 r = f.r;
  const real128 sigma = static_cast<real128>(f.J) / n;
  const real128 T = n * n * static_cast<real128>(f.t) / (2 * detail::kPi128 * r * r);
  return fourier_block<real128, c128>(
      f.sharp, sigma, z, T, detail::kPi128, n0, n1, [](real128 a) { return expq(a); },
      [](real128 p) { return detail::expi(p); });
}

Scaled det128(std::vector<c128> a, int n) {
  real128 log_scale = 0;
  c128 det{1, 0};
  for (int col = 0; col < n; ++col) {
    int piv = col;
    real128 best = -1;
    for (int r = col; r < n; ++r) {
      const real128 m = hypotq(a[r * n + col].re, a[r * n + col].im);
      if (m > best) {
        best = m;
        piv = r;
      }
    }
    if (best == 0) return Scaled();
    if (piv != col) {
      for (int k = 0; k < n; ++k) std::swap(a[col * n + k], a[piv * n + k]);
      det = real128(-1) * det;
    }
    const c128 p = a[col * n + col];
    const real128 pn = p.re * p.re + p.im * p.im;
    const c128 inv{p.re / pn, -p.im / pn};
    for (int r = col + 1; r < n; ++r) {
      const c128 f = a[r * n + col] * inv;
      for (int k = col; k < n; ++k) a[r * n + k] = a[r * n + k] - f * a[col * n + k];
    }
    det = det * p;
    const real128 dm = hypotq(det.re, det.im);
    log_scale += logq(dm);
    det = (1 / dm) * det;
  }
  return Scaled(cplx(static_cast<double>(det.re), static_cast<double>(det.im)), static_cast<double>(log_scale));
}

}  // namespace detail

ScaledCoords scaled(double x, double t, double r) {
  if (!(r > 0.0)) throw DomainError("radius must be positive");
  if (t < 0.0) throw DomainError("time must be nonnegative");
  return {x / (2.0 * kPi * r), cplx{0.0, t / (2.0 * kPi * r * r)}};
}

Scaled theta_block_scaled(Sharp sharp, double sigma, cplx z, const theta::Modular& tau_m) {
  using theta::Index;
  const cplx tau = tau_m.value();
  const Scaled ep = Scaled::exp(2.0 * kPi * kI * sigma * z);
  const Scaled em = Scaled::exp(-2.0 * kPi * kI * sigma * z);
  switch (sharp) {
    case Sharp::A: return ep * theta::theta_scaled(Index::T2, sigma * tau + z, tau_m);
    case Sharp::B:
      return ep * theta::theta_scaled(Index::T1, sigma * tau + z, tau_m) -
             em * theta::theta_scaled(Index::T1, sigma * tau - z, tau_m);
    case Sharp::C:
      return ep * theta::theta_scaled(Index::T2, sigma * tau + z, tau_m) -
             em * theta::theta_scaled(Index::T2, sigma * tau - z, tau_m);
    case Sharp::D:
      return ep * theta::theta_scaled(Index::T2, sigma * tau + z, tau_m) +
             em * theta::theta_scaled(Index::T2, sigma * tau - z, tau_m);
  }
  return {};
}

cplx theta_block(Sharp sharp, double sigma, cplx z, const theta::Modular& tau) {
  return theta_block_scaled(sharp, sigma, z, tau).value();
}

BiorthoFamily::BiorthoFamily(const RootSystemSpec& spec, double t_star)
    : spec_(spec), d_(derive(spec)), t_star_(t_star) {
  check_time(t_star);
  log_norms_.resize(spec.N);
  for (int j = 1; j <= spec.N; ++j) log_norms_[j - 1] = log_norm_const(spec, j, t_star);
}

Scaled BiorthoFamily::m_scaled(int j, double x, double t) const {
  check_index(spec_, j);
  check_time(t);
  const double n = d_.calN;
  const ScaledCoords c = scaled(x, t, spec_.r);
  const theta::Modular tau(n * n * c.tau);
  return theta_block_scaled(d_.sharp, d_.J[j - 1] / n, cplx{n * c.xi, 0.0}, tau);
}

std::vector<Scaled> BiorthoFamily::m_row(double x, double t) const { return edpp::m_row(spec_, d_, x, t); }

std::vector<Scaled> m_row(const RootSystemSpec& spec, const RootDerived& d, double x, double t) {
  check_time(t);
  const double n = d.calN;
  const ScaledCoords c = scaled(x, t, spec.r);
  const theta::Modular tau(n * n * c.tau);
  std::vector<Scaled> out(spec.N);
  for (int j = 1; j <= spec.N; ++j) out[j - 1] = theta_block_scaled(d.sharp, d.J[j - 1] / n, cplx{n * c.xi, 0.0}, tau);
  return out;
}

cplx m_fn(const RootSystemSpec& spec, int j, double x, double t) {
  check_index(spec, j);
  check_time(t);
  const RootDerived d = derive(spec);
  const double n = d.calN;
  const ScaledCoords c = scaled(x, t, spec.r);
  return theta_block(d.sharp, d.J[j - 1] / n, cplx{n * c.xi, 0.0}, theta::Modular(n * n * c.tau));
}

cplx m_fn_series(const RootSystemSpec& spec, int j, double x, double t) {
  check_index(spec, j);
  check_time(t);
  const RootDerived d = derive(spec);
  const FourierSetup f = detail::fourier_setup(spec, d, j, t);
  const auto [n0, n1] = series_range(f.T, f.sigma, 45.0);
  const c64 v = fourier_block<double, c64>(
      f.sharp, f.sigma, f.zfac * x, f.T, kPi, n0, n1, [](double a) { return std::exp(a); },
      [](double p) { return c64{std::cos(p), std::sin(p)}; });
  return {v.re, v.im};
}

double log_norm_const(const RootSystemSpec& spec, int j, double t_star) {
  check_index(spec, j);
  check_time(t_star);
  const RootDerived d = derive(spec);
  const double n = d.calN;
  const cplx tau_s = scaled(0.0, t_star, spec.r).tau;
  const theta::Modular tau(n * n * tau_s);
  const Scaled th = theta::theta_scaled(theta::Index::T2, n * d.J[j - 1] * tau_s, tau);
  const bool doubled = ((spec.type == RootType::B || spec.type == RootType::Bv || spec.type == RootType::D) &&
                        j == 1) ||
                       (spec.type == RootType::D && j == spec.N);
  const double pref = (doubled ? 4.0 : 2.0) * kPi * spec.r;
  if (th.mant().real() <= 0.0) throw ConsistencyError("norm constant is not positive");
  return std::log(pref) + th.log_abs();
}

double norm_const(const RootSystemSpec& spec, int j, double t_star) {
  return std::exp(log_norm_const(spec, j, t_star));
}

namespace {

// M_j on the Gram grid. Phases are reduced exactly in integers and exponents
// are exact products, so only expq and sincosq round.
class GridSeries {
 public:
  GridSeries(const FourierSetup& f) : sharp_(f.sharp) {
    const long twoJ = std::lround(2 * f.J);
    if (static_cast<double>(twoJ) != 2 * f.J) throw ConsistencyError("gram: J is not a half-integer");
    const auto [n0, n1] = series_range(f.T, f.sigma, 190.0);
    const real128 r = f.r;
    const real128 unit = static_cast<real128>(f.t) / (8 * r * r);
    for (long n = n0; n <= n1; ++n) {
      const long h2 = 2 * n - 1;
      const long I = static_cast<long>(f.calN) * (f.calN * h2 * h2 + 2 * h2 * twoJ);
      coeff_.push_back(expq(-unit * real128(I)));
      parity_.push_back(n % 2 == 0 ? -1 : 1);
    }
    K0_ = static_cast<long>(f.calN) * (2 * n0 - 1) + twoJ;
    dK_ = 2L * f.calN;
  }

  // Value where phi_n = pi m K_n / Q, K_n = calN (2n - 1) + 2J.
  c128 at(long m, long Q) const {
    auto unit_phase = [Q](long a) {
      const long red = ((a % (2 * Q)) + 2 * Q) % (2 * Q);
      return detail::expi(detail::kPi128 * real128(red) / real128(Q));
    };
    c128 phase = unit_phase(m * K0_);
    const c128 step = unit_phase(m * dK_);
    c128 acc{};
    for (std::size_t i = 0; i < coeff_.size(); ++i) {
      const real128 c = coeff_[i];
      switch (sharp_) {
        case Sharp::A: acc += c * phase; break;
        case Sharp::B: acc += c128{-2 * parity_[i] * c * phase.im, 0}; break;
        case Sharp::C: acc += c128{0, 2 * c * phase.im}; break;
        case Sharp::D: acc += c128{2 * c * phase.re, 0}; break;
      }
      phase = phase * step;
    }
    return acc;
  }

 private:
  Sharp sharp_;
  std::vector<real128> coeff_;
  std::vector<int> parity_;
  long K0_ = 0;
  long dK_ = 0;
};

}  // namespace

GramResult gram(const BiorthoFamily& family, double t, int nodes) {
  const double ts = family.t_star();
  if (!(t > 0.0) || !(t < ts)) throw DomainError("gram requires 0 < t < t_star");
  if (nodes < 4) throw DomainError("gram needs at least 4 nodes");
  const RootSystemSpec& spec = family.spec();
  const RootDerived& d = family.derived();
  const int N = spec.N;
  const bool periodic = spec.type == RootType::A;

  std::vector<GridSeries> fwd, bwd;
  for (int j = 1; j <= N; ++j) {
    fwd.emplace_back(detail::fourier_setup(spec, d, j, t));
    bwd.emplace_back(detail::fourier_setup(spec, d, j, ts - t));
  }

  // z = calN x / (2 pi r) runs over [0, calN] for A and [0, calN / 2]
  // otherwise, so node m of P panels has z = m calN / P (or / 2P) and the
  // phase pi z K_n / calN needs only the integer m K_n modulo 2P (or 4P).
  double floor = 0.0;
  auto integrate = [&](int panels) {
    const std::size_t M = periodic ? panels : panels + 1;
    const long Q = periodic ? panels : 2L * panels;
    std::vector<std::vector<c128>> contrib(static_cast<std::size_t>(N * N), std::vector<c128>(M));
    std::vector<real128> mags(static_cast<std::size_t>(N * N), 0);
    std::vector<c128> f(N), g(N);
    const real128 h = static_cast<real128>(d.L) / panels;
    for (std::size_t m = 0; m < M; ++m) {
      for (int j = 0; j < N; ++j) {
        f[j] = bwd[j].at(static_cast<long>(m), Q).conj();
        g[j] = fwd[j].at(static_cast<long>(m), Q);
      }
      real128 w = h;
      if (!periodic && (m == 0 || m + 1 == M)) w /= 2;
      for (int j = 0; j < N; ++j)
        for (int k = 0; k < N; ++k) {
          contrib[j * N + k][m] = w * (f[j] * g[k]);
          mags[j * N + k] += w * hypotq(f[j].re, f[j].im) * hypotq(g[k].re, g[k].im);
        }
    }
    for (int j = 0; j < N; ++j) {
      const double m = std::exp(family.log_norm(j + 1));
      for (int k = 0; k < N; ++k) {
        floor = std::max(floor, 16 * static_cast<double>(FLT128_EPSILON * mags[j * N + k]) / m);
      }
    }
    Eigen::MatrixXcd G(N, N);
    for (int j = 0; j < N; ++j)
      for (int k = 0; k < N; ++k) {
        const c128 s = num::pairwise_sum(contrib[j * N + k], c128{});
        G(j, k) = cplx(static_cast<double>(s.re), static_cast<double>(s.im));
      }
    return G;
  };

  const Eigen::MatrixXcd coarse = integrate(nodes);
  const Eigen::MatrixXcd fine = integrate(2 * nodes);
  double err = 0.0;
  for (int j = 0; j < N; ++j) {
    const double m = std::exp(family.log_norm(j + 1));
    for (int k = 0; k < N; ++k) err = std::max(err, std::abs(coarse(j, k) - fine(j, k)) / m);
  }
  return {coarse, err, nodes, floor};
}

GramResult gram_converged(const BiorthoFamily& family, double t, double tol) {
  GramResult last{};
  for (int nodes = 128; nodes <= 8192; nodes *= 2) {
    last = gram(family, t, nodes);
    if (last.error_estimate < std::max(tol, last.rounding_floor)) return last;
  }
  throw AccuracyError("gram: node doubling did not converge by 8192 nodes", last.error_estimate);
}

double biortho_defect(const BiorthoFamily& family, const Eigen::MatrixXcd& G) {
  const int N = family.size();
  if (G.rows() != N || G.cols() != N) throw DomainError("gram matrix has wrong size");
  double worst = 0.0;
  for (int j = 0; j < N; ++j) {
    const double m = std::exp(family.log_norm(j + 1));
    for (int k = 0; k < N; ++k) {
      const cplx target = j == k ? cplx{m, 0.0} : cplx{0.0, 0.0};
      worst = std::max(worst, std::abs(G(j, k) - target) / m);
    }
  }
  return worst;
}

}  // namespace edpp
