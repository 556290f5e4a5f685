#pragma once

#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "edpp/scaled.hpp"

namespace edpp::num {

/// Pairwise (tree) sum with a fixed reduction order, independent of how the
/// terms were produced.
template <class T, class Add = std::plus<T>>
T pairwise_sum(const std::vector<T>& terms, T zero = T{}, Add add = Add{}) {
  if (terms.empty()) return zero;
  std::vector<T> level(terms);
  while (level.size() > 1) {
    std::vector<T> next;
    next.reserve((level.size() + 1) / 2);
    for (std::size_t i = 0; i + 1 < level.size(); i += 2) next.push_back(add(level[i], level[i + 1]));
    if (level.size() % 2 == 1) next.push_back(level.back());
    level.swap(next);
  }
  return level.front();
}

struct GaussRule {
  std::vector<double> x;
  std::vector<double> w;
};

/// Gauss-Legendre rule with n points on [-1, 1].
GaussRule gauss_legendre(int n);

/// Gauss-Legendre rule mapped to [a, b].
GaussRule gauss_legendre(int n, double a, double b);

/// Nodes/weights of the composite trapezoid rule on [0, L]. Periodic rules
/// drop the right endpoint.
GaussRule trapezoid(int panels, double L, bool periodic);

/// Midpoint rule on [0, L] with n cells.
GaussRule midpoint(int n, double L);

/// Determinant of a matrix whose entries are carried as Scaled values.
struct ScaledDet {
  Scaled det;
  double cond = 1.0;  // 1-norm condition estimate of the equilibrated matrix
};

/// Equilibrates rows and columns in log scale, then factors with partial
/// pivoting. Entries are given row-major with dimension n.
ScaledDet scaled_determinant(const std::vector<Scaled>& entries, int n);

/// Plain complex determinant with condition estimate.
ScaledDet determinant(const Eigen::MatrixXcd& m);

/// Worker count: explicit value if positive, otherwise ELLIPTIC_DPP_WORKERS,
/// otherwise 1.
int resolve_workers(int requested);

/// Runs fn(i) for i in [0, n) on up to `workers` threads. Output ordering is
/// the caller's responsibility (write into slot i).
void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn);

/// Relative difference of two Scaled values: |a-b| / max(|a|,|b|).
double relative_difference(const Scaled& a, const Scaled& b);

}  // namespace edpp::num
