#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include "edpp/dpp_kernels.hpp"
#include "edpp/errors.hpp"
#include "edpp/numerics.hpp"
#include "edpp/theta.hpp"

namespace edpp {

namespace {

constexpr double kPi = std::numbers::pi;

// sin(u) / u, with its Taylor polynomial near 0.
double sinc_series(double u) {
  const double u2 = u * u;
  return 1.0 - u2 / 6.0 * (1.0 - u2 / 20.0 * (1.0 - u2 / 42.0 * (1.0 - u2 / 72.0)));
}

double sinc(double u) { return std::abs(u) < 1e-6 ? sinc_series(u) : std::sin(u) / u; }

// sin(pi rho u) / (pi u).
double sine_term(double u, double rho) { return rho * sinc(kPi * rho * u); }

}  // namespace

double sin_ratio(int m, double theta) {
  const double j = std::round(theta / kPi);
  const double delta = theta - j * kPi;
  if (std::abs(delta) >= 5e-7) return std::sin(m * theta) / std::sin(theta);
  const long jj = static_cast<long>(j);
  const double sign = ((static_cast<long>(m) - 1) * jj) % 2 == 0 ? 1.0 : -1.0;
  return sign * m * sinc_series(m * delta) / sinc_series(delta);
}

double trig_kernel(const RootSystemSpec& spec, double x, double y) {
  validate(spec);
  const int N = spec.N;
  const double r = spec.r;
  const double pre = 1.0 / (2.0 * kPi * r);
  const double a = (x - y) / (2.0 * r);
  const double b = (x + y) / (2.0 * r);
  switch (spec.type) {
    case RootType::A: return pre * sin_ratio(N, a);
    case RootType::B:
    case RootType::BC:
    case RootType::Cv: return pre * (sin_ratio(2 * N, a) - sin_ratio(2 * N, b));
    case RootType::Bv:
    case RootType::C: return pre * (sin_ratio(2 * N + 1, a) - sin_ratio(2 * N + 1, b));
    case RootType::D: return pre * (sin_ratio(2 * N - 1, a) + sin_ratio(2 * N - 1, b));
  }
  return 0.0;
}

LimitFamily parse_family(const std::string& tag) {
  if (tag == "A") return LimitFamily::A;
  if (tag == "B") return LimitFamily::B;
  if (tag == "C") return LimitFamily::C;
  if (tag == "D") return LimitFamily::D;
  throw InvalidSpecError("unknown limit family '" + tag + "'");
}

LimitFamily limit_family(RootType t) {
  switch (t) {
    case RootType::A: return LimitFamily::A;
    case RootType::B:
    case RootType::Bv: return LimitFamily::B;
    case RootType::C:
    case RootType::Cv:
    case RootType::BC: return LimitFamily::C;
    case RootType::D: return LimitFamily::D;
  }
  return LimitFamily::A;
}

double sine_kernel(LimitFamily family, double x, double y, double rho) {
  if (!(rho > 0.0)) throw DomainError("rho must be positive");
  const double d = sine_term(x - y, rho);
  switch (family) {
    case LimitFamily::A: return d;
    case LimitFamily::B:
    case LimitFamily::C: return d - sine_term(x + y, rho);
    case LimitFamily::D: return d + sine_term(x + y, rho);
  }
  return d;
}

double chgue_kernel(double nu, double x, double y) {
  if (!(nu == 0.5 || nu == -0.5)) throw UnsupportedError("chgue_kernel supports nu = +-1/2");
  if (!(x > 0.0) || !(y > 0.0)) throw DomainError("chgue_kernel needs positive arguments");
  // J_nu(z) and z J_nu'(z).
  auto bessel = [nu](double z) -> std::pair<double, double> {
    const double j_half = std::cyl_bessel_j(0.5, z);
    const double j_3half = std::cyl_bessel_j(1.5, z);
    if (nu > 0) return {j_half, 0.5 * j_half - z * j_3half};
    const double j_mhalf = j_half / z - j_3half;
    return {j_mhalf, -0.5 * j_mhalf - z * j_half};
  };
  const auto [jx, djx] = bessel(2.0 * x);
  if (std::abs(x - y) < 1e-7 * std::max(x, y)) {
    const double z = 2.0 * x;
    const double dj = djx / z;
    return (z - nu * nu / z) * jx * jx + z * dj * dj;
  }
  const auto [jy, djy] = bessel(2.0 * y);
  // x J'(2x) evaluated with z J'(z) at z = 2x is (z J'(z)) / 2.
  return 2.0 * std::sqrt(x * y) / (x * x - y * y) * (jx * 0.5 * djy - jy * 0.5 * djx);
}

namespace {

// Breakpoints on [a, b] graded geometrically toward each transition point.
std::vector<double> graded_breaks(double a, double b, const std::vector<double>& marks, double h0) {
  std::vector<double> pts{a, b};
  for (double c : marks) pts.push_back(c);
  for (double c : marks) {
    for (double dir : {-1.0, 1.0}) {
      double h = h0;
      for (double p = c + dir * h; p > a && p < b; p = c + dir * h) {
        pts.push_back(p);
        h *= 2.0;
      }
    }
  }
  std::sort(pts.begin(), pts.end());
  std::vector<double> out;
  for (double p : pts) {
    if (out.empty() || p - out.back() > 1e-3 * h0) out.push_back(p);
  }
  if (out.back() != b) out.back() = b;
  return out;
}

Scaled th(theta::Index i, cplx v, const theta::Modular& tau) { return theta::theta_scaled(i, v, tau); }

}  // namespace

InfiniteKernelValue infinite_kernel_fixed(const InfiniteKernelSpec& iks, double x, double y, int nodes) {
  const double rho = iks.rho;
  if (!(rho > 0.0)) throw DomainError("rho must be positive");
  if (!(iks.t > 0.0) || !(iks.t < iks.t_star)) throw DomainError("infinite kernel requires 0 < t < t_star");
  if (iks.family != LimitFamily::A && (x < 0.0 || y < 0.0)) {
    throw DomainError("B, C, D limit kernels live on [0, inf)");
  }
  if (nodes < 8) throw DomainError("infinite kernel needs at least 8 nodes");
  const double T1 = 2.0 * kPi * iks.t * rho * rho;
  const double T2 = 2.0 * kPi * (iks.t_star - iks.t) * rho * rho;
  const double T3 = 2.0 * kPi * iks.t_star * rho * rho;
  const theta::Modular tau1(cplx{0.0, T1}), tau2(cplx{0.0, T2}), tau3(cplx{0.0, T3});
  const cplx I{0.0, 1.0};
  using theta::Index;

  std::function<cplx(double)> integrand;
  double a = 0.0, b = rho;
  std::vector<double> marks;
  if (iks.family == LimitFamily::A) {
    marks = {0.0, rho};
    integrand = [&](double l) {
      const Scaled num = th(Index::T2, rho * x + I * T1 * l / rho, tau1) *
                         th(Index::T2, rho * y - I * T2 * l / rho, tau2);
      const Scaled den = th(Index::T2, I * T3 * l / rho, tau3);
      return std::exp(2.0 * kPi * I * (x - y) * l) * (num / den).value();
    };
  } else {
    a = -rho;
    marks = {-rho, 0.0, rho};
    const Index s = iks.family == LimitFamily::B ? Index::T1 : Index::T2;
    const double sg = iks.family == LimitFamily::D ? 1.0 : -1.0;
    integrand = [&, s, sg](double l) {
      const Scaled den = th(Index::T2, I * T3 * l / (2.0 * rho), tau3);
      const Scaled fx = th(s, rho * x + I * T1 * l / (2.0 * rho), tau1);
      const Scaled f1 = fx * th(s, rho * y - I * T2 * l / (2.0 * rho), tau2) / den;
      const Scaled f2 = fx * th(s, -rho * y - I * T2 * l / (2.0 * rho), tau2) / den;
      return 0.5 * (std::exp(kPi * I * (x - y) * l) * f1.value() + sg * std::exp(kPi * I * (x + y) * l) * f2.value());
    };
  }

  auto integrate = [&](int total) {
    const double tmax = std::max({T1, T2, T3});
    const double h0 = rho * std::min(1.0 / 16.0, 1.0 / (4.0 * kPi * tmax));
    const std::vector<double> br = graded_breaks(a, b, marks, h0);
    const int panels = static_cast<int>(br.size()) - 1;
    const int order = std::max(4, total / panels);
    const num::GaussRule g = num::gauss_legendre(order);
    std::vector<cplx> terms;
    for (int p = 0; p < panels; ++p) {
      const double c = 0.5 * (br[p] + br[p + 1]);
      const double h = 0.5 * (br[p + 1] - br[p]);
      for (int k = 0; k < order; ++k) terms.push_back(h * g.w[k] * integrand(c + h * g.x[k]));
    }
    return num::pairwise_sum(terms, cplx{});
  };

  const cplx coarse = integrate(nodes);
  const cplx fine = integrate(2 * nodes);
  return {fine, std::abs(fine - coarse), 2 * nodes};
}

cplx infinite_kernel(const InfiniteKernelSpec& iks, double x, double y, int nodes, double tol) {
  InfiniteKernelValue v{};
  for (int n = std::max(nodes, 8); n <= 1024; n *= 2) {
    v = infinite_kernel_fixed(iks, x, y, n);
    if (v.error_estimate < tol * std::max(std::abs(v.value), iks.rho)) return v.value;
  }
  throw AccuracyError("infinite kernel: node doubling did not converge by 1024 nodes", v.error_estimate);
}

}  // namespace edpp
