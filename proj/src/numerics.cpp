#include "edpp/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <numbers>
#include <string>
#include <thread>

#include "edpp/errors.hpp"

namespace edpp::num {

GaussRule gauss_legendre(int n) {
  if (n < 1) throw DomainError("Gauss-Legendre order must be positive");
  GaussRule g;
  g.x.resize(n);
  g.w.resize(n);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    double p0 = 1.0;
    double p1 = z;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (z * p1 - p0) / (z * z - 1.0);
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    g.x[i] = -z;
    g.x[n - 1 - i] = z;
    g.w[i] = w;
    g.w[n - 1 - i] = w;
  }
  if (n % 2 == 1) g.x[n / 2] = 0.0;
  return g;
}

GaussRule gauss_legendre(int n, double a, double b) {
  GaussRule g = gauss_legendre(n);
  const double h = 0.5 * (b - a);
  const double c = 0.5 * (b + a);
  for (int i = 0; i < n; ++i) {
    g.x[i] = c + h * g.x[i];
    g.w[i] *= h;
  }
  return g;
}

GaussRule trapezoid(int panels, double L, bool periodic) {
  if (panels < 1) throw DomainError("trapezoid needs at least one panel");
  GaussRule g;
  const double h = L / panels;
  const int count = periodic ? panels : panels + 1;
  g.x.resize(count);
  g.w.assign(count, h);
  for (int i = 0; i < count; ++i) g.x[i] = i * h;
  if (!periodic) {
    g.w.front() *= 0.5;
    g.w.back() *= 0.5;
    g.x.back() = L;
  }
  return g;
}

GaussRule midpoint(int n, double L) {
  if (n < 1) throw DomainError("midpoint rule needs at least one cell");
  GaussRule g;
  const double h = L / n;
  g.x.resize(n);
  g.w.assign(n, h);
  for (int i = 0; i < n; ++i) g.x[i] = (i + 0.5) * h;
  return g;
}

ScaledDet scaled_determinant(const std::vector<Scaled>& entries, int n) {
  if (static_cast<int>(entries.size()) != n * n) throw DomainError("determinant: size mismatch");
  if (n == 0) return {Scaled(cplx{1.0, 0.0}), 1.0};
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  std::vector<double> row(n, kNegInf), col(n, kNegInf);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) row[i] = std::max(row[i], entries[i * n + j].log_abs());
  for (int i = 0; i < n; ++i) {
    if (row[i] == kNegInf) return {Scaled(), std::numeric_limits<double>::infinity()};
  }
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) col[j] = std::max(col[j], entries[i * n + j].log_abs() - row[i]);
  for (int j = 0; j < n; ++j) {
    if (col[j] == kNegInf) return {Scaled(), std::numeric_limits<double>::infinity()};
  }
  Eigen::MatrixXcd m(n, n);
  double scale = 0.0;
  for (int i = 0; i < n; ++i) scale += row[i];
  for (int j = 0; j < n; ++j) scale += col[j];
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = entries[i * n + j].value_rel(row[i] + col[j]);
  ScaledDet d = determinant(m);
  d.det *= Scaled(cplx{1.0, 0.0}, scale);
  return d;
}

ScaledDet determinant(const Eigen::MatrixXcd& m) {
  if (m.rows() == 0) return {Scaled(cplx{1.0, 0.0}), 1.0};
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(m);
  // The determinant is accumulated as a Scaled product of the pivots.
  const Eigen::MatrixXcd& f = lu.matrixLU();
  Scaled det(cplx{1.0, 0.0});
  for (Eigen::Index i = 0; i < f.rows(); ++i) det *= Scaled(f(i, i));
  if (lu.permutationP().determinant() < 0) det = -det;
  const double rc = lu.rcond();
  const double cond = rc > 0.0 ? 1.0 / rc : std::numeric_limits<double>::infinity();
  return {det, cond};
}

int resolve_workers(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("ELLIPTIC_DPP_WORKERS")) {
    try {
      const int v = std::stoi(env);
      if (v > 0) return v;
    } catch (const std::exception&) {
    }
  }
  return 1;
}

void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn) {
  const std::size_t w = std::min<std::size_t>(std::max(1, workers), std::max<std::size_t>(n, 1));
  if (w <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> threads;
  std::vector<std::exception_ptr> errors(w);
  for (std::size_t k = 0; k < w; ++k) {
    threads.emplace_back([&, k] {
      try {
        for (std::size_t i = k; i < n; i += w) fn(i);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

double relative_difference(const Scaled& a, const Scaled& b) {
  const double la = a.log_abs();
  const double lb = b.log_abs();
  const double ref = std::max(la, lb);
  if (ref == -std::numeric_limits<double>::infinity()) {
    throw DegenerateInputError("relative difference of two zeros");
  }
  const cplx d = a.value_rel(ref) - b.value_rel(ref);
  return std::abs(d);
}

}  // namespace edpp::num
