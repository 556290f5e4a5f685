#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "edpp/biortho.hpp"
#include "edpp/macdonald.hpp"
#include "edpp/root_system.hpp"
#include "edpp/scaled.hpp"

namespace edpp {

struct KernelSpec {
  RootSystemSpec spec;
  double t = 0.5;
  double t_star = 1.0;
};

void validate(const KernelSpec& ks);

/// Kernel and density evaluation for one (spec, t, t*). Holds the norms and
/// per-type constants; cheap to copy, safe to share across threads.
class DppModel {
 public:
  explicit DppModel(const KernelSpec& ks);

  const KernelSpec& kernel_spec() const { return ks_; }
  const BiorthoFamily& family() const { return fam_; }
  double L() const { return fam_.derived().L; }
  int N() const { return ks_.spec.N; }

  /// Row u_n(x) = M_n(x, t) / m_n and column w_n(y) = conj M_n(y, t* - t),
  /// so K(x, y) = sum_n u_n(x) w_n(y).
  std::vector<Scaled> left(double x) const;
  std::vector<Scaled> right(double y) const;

  cplx kernel(double x, double y) const;
  static cplx kernel_from(const std::vector<Scaled>& u, const std::vector<Scaled>& w);

  /// p_t(x) for any ordering of the points (the product of determinants is
  /// symmetric). Imaginary residue above 1e-10 relative raises ConsistencyError.
  double density(const Configuration& xs) const;

  /// log |det conj M(t*-t)| + log |det M(t)| (unnormalized log density);
  /// -inf when a determinant vanishes.
  double log_weight(const Configuration& xs) const;

 private:
  KernelSpec ks_;
  BiorthoFamily fam_;
};

double density(const KernelSpec& ks, const Configuration& xs);
cplx kernel(const KernelSpec& ks, double x, double y);

/// det[K(x_j, x_k)], real part after the imaginary-residue check.
double corr_det(const KernelSpec& ks, const std::vector<double>& points);
double corr_det(const DppModel& model, const std::vector<double>& points);

/// 1/(N-n)! times the integral of p over the remaining N-n coordinates on
/// [0, L]^{N-n}, by tensor trapezoid with `grid` panels per axis. N <= 3.
double corr_oracle(const KernelSpec& ks, const std::vector<double>& points, int grid);

/// Temporally homogeneous limit kernels (closed forms).
double trig_kernel(const RootSystemSpec& spec, double x, double y);

/// sin(m theta) / sin(theta), including theta near multiples of pi.
double sin_ratio(int m, double theta);

enum class LimitFamily { A, B, C, D };
LimitFamily parse_family(const std::string& tag);
LimitFamily limit_family(RootType t);

struct InfiniteKernelSpec {
  LimitFamily family = LimitFamily::A;
  double rho = 1.0;
  double t = 0.5;
  double t_star = 1.0;
};

/// Scaling-limit kernel as a lambda integral, composite Gauss-Legendre on
/// panels graded toward the transition points lambda = 0, +-rho. `nodes` is
/// the total node count; the result is compared with 2 * nodes.
struct InfiniteKernelValue {
  cplx value;
  double error_estimate;
  int nodes;
};
InfiniteKernelValue infinite_kernel_fixed(const InfiniteKernelSpec& iks, double x, double y, int nodes);

/// Node doubling 128 -> 1024 until the change is below tol (relative to
/// max(|value|, rho)).
cplx infinite_kernel(const InfiniteKernelSpec& iks, double x, double y, int nodes = 128, double tol = 1e-10);

/// Sine kernels with density rho (B is the same closed form as C).
double sine_kernel(LimitFamily family, double x, double y, double rho);

/// Hard-edge chiral GUE kernel for nu = +-1/2 in Bessel form.
double chgue_kernel(double nu, double x, double y);

/// Test function psi for the Fredholm identity.
double test_function(const std::string& id, double x, double L);
std::vector<std::string> test_function_ids();

struct FredholmResult {
  double psi_direct;
  double psi_fredholm;
  double residual;
};

/// Characteristic function by direct integration against the density and by
/// the Fredholm expansion of the kernel; N <= 2.
FredholmResult fredholm_check(const KernelSpec& ks, const std::string& test_fn_id, double theta_param, int grid);
double fredholm_residual(const KernelSpec& ks, const std::string& test_fn_id, double theta_param, int grid);

struct ChainConfig {
  long steps = 200000;      // iterations after burn-in, per chain
  long burn_in = 10000;
  int thin = 20;
  double proposal_sd = 0.0;  // 0 selects L / (8 N)
  int chains = 1;
  std::uint64_t seed = 1;
  int workers = 0;
};

struct SampleSet {
  std::vector<Configuration> samples;  // ordered by (chain, step)
  std::vector<int> chain_of;           // chain id per sample
  std::vector<double> acceptance;      // per chain, after burn-in
  std::vector<std::string> warnings;
};

SampleSet mcmc_sample(const KernelSpec& ks, const ChainConfig& chain);

struct Histogram {
  std::vector<double> left;
  std::vector<double> right;
  std::vector<long> count;
  std::vector<double> density;
  std::vector<double> stderr_;
};

/// Point histogram normalized to integrate to N, with batch-means standard
/// errors over `batches` consecutive blocks (per chain order).
Histogram empirical_density(const std::vector<Configuration>& samples, int bins, double L, int batches = 50);

/// Mean of K(x, x) over each histogram bin.
std::vector<double> bin_averaged_kernel(const DppModel& model, const Histogram& h);

}  // namespace edpp
