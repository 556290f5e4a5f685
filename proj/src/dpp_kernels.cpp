#include "edpp/dpp_kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "edpp/errors.hpp"
#include "edpp/numerics.hpp"

namespace edpp {

namespace {

constexpr double kImagTol = 1e-10;

// Imaginary residue measured against `scale`, the Hadamard bound of the
// determinant(s) involved, which is the size of the terms that cancel.
double check_real(cplx v, double scale, const char* what) {
  if (std::abs(v.imag()) > kImagTol * std::max(std::abs(v), scale)) {
    throw ConsistencyError(std::string(what) + ": imaginary residue above 1e-10 relative");
  }
  return v.real();
}

// log of prod_k ||column k|| for a row-major n x n matrix.
double log_hadamard(const std::vector<Scaled>& a, int n) {
  double acc = 0.0;
  for (int k = 0; k < n; ++k) {
    double ref = -std::numeric_limits<double>::infinity();
    for (int j = 0; j < n; ++j) ref = std::max(ref, a[j * n + k].log_abs());
    if (!std::isfinite(ref)) return ref;
    double s = 0.0;
    for (int j = 0; j < n; ++j) s += std::norm(a[j * n + k].value_rel(ref));
    acc += ref + 0.5 * std::log(s);
  }
  return acc;
}

void check_points(double L, const std::vector<double>& xs) {
  for (double x : xs) {
    if (!std::isfinite(x) || x < 0.0 || x > L) throw DomainError("point outside the domain");
  }
}

double factorial(int n) { return std::tgamma(n + 1.0); }

}  // namespace

void validate(const KernelSpec& ks) {
  validate(ks.spec);
  if (!std::isfinite(ks.t_star) || !(ks.t > 0.0) || !(ks.t < ks.t_star)) {
    throw DomainError("kernel spec requires 0 < t < t_star");
  }
}

DppModel::DppModel(const KernelSpec& ks) : ks_((validate(ks), ks)), fam_(ks.spec, ks.t_star) {}

std::vector<Scaled> DppModel::left(double x) const {
  std::vector<Scaled> u = fam_.m_row(x, ks_.t);
  for (int n = 0; n < N(); ++n) u[n] *= Scaled(cplx{1.0, 0.0}, -fam_.log_norm(n + 1));
  return u;
}

std::vector<Scaled> DppModel::right(double y) const {
  std::vector<Scaled> w = fam_.m_row(y, ks_.t_star - ks_.t);
  for (auto& v : w) v = v.conj();
  return w;
}

cplx DppModel::kernel_from(const std::vector<Scaled>& u, const std::vector<Scaled>& w) {
  Scaled acc;
  for (std::size_t n = 0; n < u.size(); ++n) acc += u[n] * w[n];
  return acc.value();
}

cplx DppModel::kernel(double x, double y) const {
  check_points(L(), {x, y});
  return kernel_from(left(x), right(y));
}

double DppModel::density(const Configuration& xs) const {
  if (static_cast<int>(xs.size()) != N()) throw DomainError("configuration size differs from N");
  check_points(L(), xs);
  const int n = N();
  std::vector<Scaled> fwd(n * n), bwd(n * n);
  for (int k = 0; k < n; ++k) {
    const std::vector<Scaled> u = left(xs[k]);
    const std::vector<Scaled> w = right(xs[k]);
    for (int j = 0; j < n; ++j) {
      fwd[j * n + k] = u[j];
      bwd[j * n + k] = w[j];
    }
  }
  const Scaled p = num::scaled_determinant(fwd, n).det * num::scaled_determinant(bwd, n).det;
  if (p.is_zero()) return 0.0;
  return check_real(p.value(), std::exp(log_hadamard(fwd, n) + log_hadamard(bwd, n)), "density");
}

double DppModel::log_weight(const Configuration& xs) const {
  const int n = N();
  std::vector<Scaled> fwd(n * n), bwd(n * n);
  for (int k = 0; k < n; ++k) {
    const std::vector<Scaled> u = fam_.m_row(xs[k], ks_.t);
    const std::vector<Scaled> w = fam_.m_row(xs[k], ks_.t_star - ks_.t);
    for (int j = 0; j < n; ++j) {
      fwd[j * n + k] = u[j];
      bwd[j * n + k] = w[j];
    }
  }
  return num::scaled_determinant(fwd, n).det.log_abs() + num::scaled_determinant(bwd, n).det.log_abs();
}

double density(const KernelSpec& ks, const Configuration& xs) { return DppModel(ks).density(xs); }

cplx kernel(const KernelSpec& ks, double x, double y) { return DppModel(ks).kernel(x, y); }

double corr_det(const DppModel& model, const std::vector<double>& points) {
  const int n = static_cast<int>(points.size());
  if (n < 1 || n > model.N()) throw DomainError("corr_det needs 1 <= n <= N points");
  check_points(model.L(), points);
  std::vector<std::vector<Scaled>> u(n), w(n);
  for (int j = 0; j < n; ++j) {
    u[j] = model.left(points[j]);
    w[j] = model.right(points[j]);
  }
  Eigen::MatrixXcd K(n, n);
  std::vector<Scaled> entries;
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      K(j, k) = DppModel::kernel_from(u[j], w[k]);
      entries.push_back(K(j, k));
    }
  return check_real(num::determinant(K).det.value(), std::exp(log_hadamard(entries, n)), "corr_det");
}

double corr_det(const KernelSpec& ks, const std::vector<double>& points) {
  return corr_det(DppModel(ks), points);
}

double corr_oracle(const KernelSpec& ks, const std::vector<double>& points, int grid) {
  validate(ks);
  const int N = ks.spec.N;
  if (N > 3) throw UnsupportedError("corr_oracle supports N <= 3");
  const int n = static_cast<int>(points.size());
  if (n < 1 || n > N) throw DomainError("corr_oracle needs 1 <= n <= N points");
  if (grid < 2) throw DomainError("corr_oracle needs grid >= 2");
  const DppModel model(ks);
  check_points(model.L(), points);
  const int free = N - n;
  if (free == 0) return model.density(points);
  const num::GaussRule rule = num::trapezoid(grid, model.L(), ks.spec.type == RootType::A);
  const std::size_t m = rule.x.size();
  std::vector<double> terms;
  Configuration xs(points);
  xs.resize(N);
  if (free == 1) {
    for (std::size_t a = 0; a < m; ++a) {
      xs[n] = rule.x[a];
      terms.push_back(rule.w[a] * model.density(xs));
    }
  } else {
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b = 0; b < m; ++b) {
        xs[n] = rule.x[a];
        xs[n + 1] = rule.x[b];
        terms.push_back(rule.w[a] * rule.w[b] * model.density(xs));
      }
  }
  return num::pairwise_sum(terms, 0.0) / factorial(free);
}

double test_function(const std::string& id, double x, double L) {
  if (id == "zero") return 0.0;
  if (id == "cos") return std::cos(2.0 * std::numbers::pi * x / L);
  if (id == "gauss") {
    const double u = (x - 0.5 * L) / (0.125 * L);
    return std::exp(-u * u);
  }
  if (id == "bump") {
    const double u = (x - 0.5 * L) / (0.25 * L);
    return std::abs(u) < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - u * u)) : 0.0;
  }
  throw InvalidSpecError("unknown test function '" + id + "'");
}

std::vector<std::string> test_function_ids() { return {"bump", "cos", "gauss", "zero"}; }

FredholmResult fredholm_check(const KernelSpec& ks, const std::string& test_fn_id, double theta_param, int grid) {
  validate(ks);
  const int N = ks.spec.N;
  if (N > 2) throw UnsupportedError("fredholm_check supports N <= 2");
  if (grid < 2) throw DomainError("fredholm_check needs grid >= 2");
  const DppModel model(ks);
  const double L = model.L();
  test_function(test_fn_id, 0.0, L);
  const num::GaussRule rule = num::trapezoid(grid, L, ks.spec.type == RootType::A);
  const std::size_t m = rule.x.size();

  std::vector<std::vector<Scaled>> u(m), w(m);
  std::vector<double> weight(m), chi(m);
  for (std::size_t a = 0; a < m; ++a) {
    u[a] = model.left(rule.x[a]);
    w[a] = model.right(rule.x[a]);
    weight[a] = std::exp(theta_param * test_function(test_fn_id, rule.x[a], L));
    chi[a] = 1.0 - weight[a];
  }

  // Direct route: density from the two determinants of M.
  std::vector<double> direct;
  // Fredholm route: traces of det[K] against chi.
  std::vector<double> first, second;
  if (N == 1) {
    for (std::size_t a = 0; a < m; ++a) {
      const double p = (u[a][0] * w[a][0]).value().real();
      direct.push_back(rule.w[a] * weight[a] * p);
    }
  } else {
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b = 0; b < m; ++b) {
        const Scaled d1 = u[a][0] * u[b][1] - u[b][0] * u[a][1];
        const Scaled d2 = w[a][0] * w[b][1] - w[b][0] * w[a][1];
        const double p = (d1 * d2).value().real();
        direct.push_back(rule.w[a] * rule.w[b] * weight[a] * weight[b] * p);
        if (chi[a] == 0.0 || chi[b] == 0.0) continue;
        const cplx kab = DppModel::kernel_from(u[a], w[b]);
        const cplx kba = DppModel::kernel_from(u[b], w[a]);
        const cplx kaa = DppModel::kernel_from(u[a], w[a]);
        const cplx kbb = DppModel::kernel_from(u[b], w[b]);
        second.push_back(rule.w[a] * rule.w[b] * chi[a] * chi[b] * (kaa * kbb - kab * kba).real());
      }
  }
  for (std::size_t a = 0; a < m; ++a) {
    if (chi[a] == 0.0) continue;
    first.push_back(rule.w[a] * chi[a] * DppModel::kernel_from(u[a], w[a]).real());
  }
  const double psi_direct = num::pairwise_sum(direct, 0.0) / factorial(N);
  double psi_fredholm = 1.0 - num::pairwise_sum(first, 0.0);
  if (N == 2) psi_fredholm += 0.5 * num::pairwise_sum(second, 0.0);
  return {psi_direct, psi_fredholm, std::abs(psi_direct - psi_fredholm)};
}

double fredholm_residual(const KernelSpec& ks, const std::string& test_fn_id, double theta_param, int grid) {
  return fredholm_check(ks, test_fn_id, theta_param, grid).residual;
}

}  // namespace edpp
