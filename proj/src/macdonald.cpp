#include "edpp/macdonald.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "edpp/biortho.hpp"
#include "edpp/numerics.hpp"
#include "edpp/phase.hpp"
#include "series128.hpp"

namespace edpp {

namespace {

constexpr double kPi = std::numbers::pi;

Scaled th(theta::Index i, double v, const theta::Modular& tau) {
  return theta::theta_scaled(i, cplx{v, 0.0}, tau);
}

std::vector<double> xi_of(const RootSystemSpec& spec, const Configuration& xs) {
  std::vector<double> xi(xs.size());
  for (std::size_t k = 0; k < xs.size(); ++k) xi[k] = xs[k] / (2.0 * kPi * spec.r);
  return xi;
}

cplx tau_of(const RootSystemSpec& spec, double t) { return scaled(0.0, t, spec.r).tau; }

double lgamma_factorial(int n) { return std::lgamma(n + 1.0); }

}  // namespace

void check_alcove(const RootSystemSpec& spec, const Configuration& xs) {
  validate(spec);
  if (static_cast<int>(xs.size()) != spec.N) throw DomainError("configuration size differs from N");
  const double L = domain_length(spec);
  for (std::size_t k = 0; k < xs.size(); ++k) {
    if (!std::isfinite(xs[k]) || xs[k] < 0.0 || xs[k] > L) throw DomainError("point outside the domain");
    if (k > 0 && !(xs[k] > xs[k - 1])) throw DomainError("configuration is not strictly ordered");
  }
  if (spec.type == RootType::A && !xs.empty() && xs.back() >= L) {
    throw DomainError("A-type points must lie in [0, 2 pi r)");
  }
}

cplx alpha_tilde(int N, cplx tau) {
  return N % 2 == 0 ? 0.5 * static_cast<double>(N) * tau : 0.5 * (1.0 + static_cast<double>(N) * tau);
}

Scaled weyl_w(RootType type, const std::vector<double>& xi, const theta::Modular& tau) {
  using theta::Index;
  const std::size_t N = xi.size();
  Scaled w(cplx{1.0, 0.0});
  for (std::size_t j = 0; j < N; ++j) {
    for (std::size_t k = j + 1; k < N; ++k) {
      w *= th(Index::T1, xi[k] - xi[j], tau);
      if (type != RootType::A) w *= th(Index::T1, xi[k] + xi[j], tau);
    }
  }
  if (type == RootType::A || type == RootType::D) return w;
  const cplx tv = tau.value();
  const theta::Modular tau2(2.0 * tv);
  const theta::Modular tau_half(0.5 * tv);
  for (std::size_t j = 0; j < N; ++j) {
    const double x = xi[j];
    switch (type) {
      case RootType::B: w *= th(Index::T1, x, tau); break;
      case RootType::Bv: w *= th(Index::T1, 2.0 * x, tau2); break;
      case RootType::C: w *= th(Index::T1, 2.0 * x, tau); break;
      case RootType::Cv: w *= th(Index::T1, x, tau_half); break;
      case RootType::BC: w *= th(Index::T1, x, tau) * th(Index::T0, 2.0 * x, tau2); break;
      default: break;
    }
  }
  return w;
}

Scaled weyl_w(const RootSystemSpec& spec, const Configuration& xs, const theta::Modular& tau) {
  return weyl_w(spec.type, xi_of(spec, xs), tau);
}

LogReal coeff_a(const RootSystemSpec& spec, double t) {
  if (!(t > 0.0)) throw DomainError("a(t) requires t > 0");
  const RootDerived d = derive(spec);
  const double N = spec.N;
  const double n = d.calN;
  const double im = n * t / (2.0 * kPi * spec.r * spec.r);  // Im of calN tau(t)
  const double log_q = -kPi * im;
  const double lq0 = theta::log_q0_imag(im);
  double la = 0.0;
  switch (spec.type) {
    case RootType::A: la = -N * (3 * N - 1) / 8.0 * log_q - (N - 1) * (N - 2) / 2.0 * lq0; break;
    case RootType::B: la = std::log(2.0) - N * (N - 1) / 4.0 * log_q - N * (N - 1) * lq0; break;
    case RootType::Bv:
      la = std::log(2.0) - N * (N - 1) / 4.0 * log_q - (N - 1) * (N - 1) * lq0 -
           (N - 1) * theta::log_q0_imag(2.0 * im);
      break;
    case RootType::C: la = -N * N / 4.0 * log_q - N * (N - 1) * lq0; break;
    case RootType::Cv:
      la = -N * (2 * N - 1) / 8.0 * log_q - (N - 1) * (N - 1) * lq0 - (N - 1) * theta::log_q0_imag(0.5 * im);
      break;
    case RootType::BC:
      la = -N * (N + 1) / 4.0 * log_q - N * (N - 1) * lq0 - N * theta::log_q0_imag(2.0 * im);
      break;
    case RootType::D: la = std::log(4.0) - N * (N - 1) / 4.0 * log_q - N * (N - 2) * lq0; break;
  }
  return {la, 1};
}

Scaled det_m(const RootSystemSpec& spec, const Configuration& xs, double t, double* cond) {
  const RootDerived d = derive(spec);
  const int N = spec.N;
  std::vector<Scaled> e(static_cast<std::size_t>(N * N));
  for (int k = 0; k < N; ++k) {
    const std::vector<Scaled> col = m_row(spec, d, xs[k], t);
    for (int j = 0; j < N; ++j) e[j * N + k] = col[j];
  }
  const num::ScaledDet det = num::scaled_determinant(e, N);
  if (cond) *cond = det.cond;
  return det.det;
}

Scaled det_m_extended(const RootSystemSpec& spec, const Configuration& xs, double t) {
  const RootDerived d = derive(spec);
  const int N = spec.N;
  std::vector<detail::c128> e(static_cast<std::size_t>(N * N));
  for (int j = 1; j <= N; ++j) {
    const detail::FourierSetup f = detail::fourier_setup(spec, d, j, t);
    if (f.T > 1e4) return det_m(spec, xs, t);
    for (int k = 0; k < N; ++k) e[(j - 1) * N + k] = detail::m_series128(f, xs[k]);
  }
  return detail::det128(std::move(e), N);
}

Scaled macdonald_rhs(const RootSystemSpec& spec, const Configuration& xs, double t) {
  const RootDerived d = derive(spec);
  const theta::Modular tau(static_cast<double>(d.calN) * tau_of(spec, t));
  const std::vector<double> xi = xi_of(spec, xs);
  Scaled rhs = weyl_w(spec.type, xi, tau);
  const LogReal a = coeff_a(spec, t);
  rhs *= Scaled(cplx{static_cast<double>(a.sign), 0.0}, a.log_abs);
  const int N = spec.N;
  if (spec.type == RootType::A) {
    double s = 0.0;
    for (double v : xi) s += v;
    if (N % 2 == 0) {
      rhs *= Scaled(ipow(N / 2)) * th(theta::Index::T0, s, tau);
    } else {
      rhs *= Scaled(ipow(-(N - 1) / 2)) * th(theta::Index::T3, s, tau);
    }
  } else if (spec.type == RootType::C || spec.type == RootType::Cv || spec.type == RootType::BC) {
    rhs *= Scaled(ipow(-N));
  }
  return rhs;
}

double denominator_residual(const RootSystemSpec& spec, const Configuration& xs, double t) {
  validate(spec);
  if (static_cast<int>(xs.size()) != spec.N) throw DomainError("configuration size differs from N");
  for (std::size_t k = 1; k < xs.size(); ++k) {
    if (xs[k] == xs[k - 1]) throw DegenerateInputError("coincident points: both sides vanish");
  }
  double cond = 1.0;
  det_m(spec, xs, t, &cond);
  const Scaled lhs = det_m_extended(spec, xs, t);
  const Scaled rhs = macdonald_rhs(spec, xs, t);
  if (lhs.is_zero() && rhs.is_zero()) throw DegenerateInputError("both sides vanish");
  if (cond > 1e12) throw IllConditionedError("M matrix condition estimate above 1e12");
  return num::relative_difference(lhs, rhs);
}

double selberg_log_rhs(const RootSystemSpec& spec, double t, double t_star) {
  const BiorthoFamily fam(spec, t_star);
  double lr = lgamma_factorial(spec.N);
  for (double lm : fam.log_norms()) lr += lm;
  lr -= coeff_a(spec, t_star - t).log_abs + coeff_a(spec, t).log_abs;
  return lr;
}

SelbergResult selberg_check(const RootSystemSpec& spec, double t, double t_star, const SelbergOptions& opt) {
  validate(spec);
  if (!(t > 0.0) || !(t < t_star)) throw DomainError("selberg requires 0 < t < t_star");
  const int N = spec.N;
  if (opt.method == SelbergMethod::Grid && N > 2) throw UnsupportedError("grid Selberg check supports N <= 2");
  if (opt.method == SelbergMethod::MonteCarlo && N > 4) {
    throw UnsupportedError("Monte Carlo Selberg check supports N <= 4");
  }
  const RootDerived d = derive(spec);
  const double L = d.L;
  const double n = d.calN;
  const theta::Modular tau1(n * tau_of(spec, t));
  const theta::Modular tau2(n * tau_of(spec, t_star - t));
  const double log_rhs = selberg_log_rhs(spec, t, t_star);
  const int workers = num::resolve_workers(opt.workers);

  auto integrand = [&](const std::vector<double>& xs) {
    const std::vector<double> xi = xi_of(spec, xs);
    Scaled f = weyl_w(spec.type, xi, tau1) * weyl_w(spec.type, xi, tau2);
    if (spec.type == RootType::A) {
      double s = 0.0;
      for (double v : xi) s += v;
      const theta::Index idx = N % 2 == 0 ? theta::Index::T0 : theta::Index::T3;
      f *= th(idx, s, tau1) * th(idx, s, tau2);
    }
    return f.value_rel(log_rhs).real();
  };

  auto finish = [&](double ratio, long evals, double est_err) {
    const double rhs = std::exp(log_rhs);
    return SelbergResult{ratio * rhs, rhs, std::abs(ratio - 1.0), evals, est_err};
  };

  if (opt.method == SelbergMethod::Grid) {
    long evals = 0;
    double prev = std::numeric_limits<double>::quiet_NaN();
    double best = prev;
    double change = std::numeric_limits<double>::infinity();
    for (long m = 8;; m *= 2) {
      long pts = 1;
      for (int k = 0; k < N; ++k) pts *= m;
      if (evals + pts > opt.budget) break;
      const num::GaussRule rule = num::midpoint(static_cast<int>(m), L);
      std::vector<double> vals(static_cast<std::size_t>(pts));
      num::parallel_for(vals.size(), workers, [&](std::size_t idx) {
        std::vector<double> xs(N);
        std::size_t rem = idx;
        double w = 1.0;
        for (int k = 0; k < N; ++k) {
          const std::size_t i = rem % static_cast<std::size_t>(m);
          rem /= static_cast<std::size_t>(m);
          xs[k] = rule.x[i];
          w *= rule.w[i];
        }
        vals[idx] = w * integrand(xs);
      });
      evals += pts;
      const double est = num::pairwise_sum(vals, 0.0);
      if (!std::isnan(prev)) change = std::abs(est - prev) / std::abs(est);
      prev = est;
      best = est;
      if (change < opt.target) return finish(best, evals, change);
    }
    if (std::isnan(best)) throw AccuracyError("selberg: budget too small for any grid", 0.0);
    throw AccuracyError("selberg: grid budget exhausted before target precision", best * std::exp(log_rhs));
  }

  const long total = opt.budget;
  if (total < 2) throw DomainError("selberg: Monte Carlo budget must be at least 2");
  std::vector<double> sums(workers, 0.0), sqs(workers, 0.0);
  num::parallel_for(static_cast<std::size_t>(workers), workers, [&](std::size_t w) {
    const long begin = total * static_cast<long>(w) / workers;
    const long end = total * static_cast<long>(w + 1) / workers;
    std::seed_seq seq{static_cast<std::uint64_t>(opt.seed), static_cast<std::uint64_t>(w)};
    std::mt19937_64 rng(seq);
    std::uniform_real_distribution<double> u(0.0, L);
    std::vector<double> xs(N);
    double s = 0.0, s2 = 0.0;
    for (long i = begin; i < end; ++i) {
      for (double& x : xs) x = u(rng);
      const double v = integrand(xs);
      s += v;
      s2 += v * v;
    }
    sums[w] = s;
    sqs[w] = s2;
  });
  double s = 0.0, s2 = 0.0;
  for (int w = 0; w < workers; ++w) {
    s += sums[w];
    s2 += sqs[w];
  }
  const double vol = std::pow(L, N);
  const double mean = s / total;
  const double var = std::max(0.0, s2 / total - mean * mean) * total / (total - 1.0);
  const double ratio = vol * mean;
  const double rel_se = vol * std::sqrt(var / total) / std::abs(ratio);
  if (rel_se > opt.target) {
    throw AccuracyError("selberg: Monte Carlo standard error above target", ratio * std::exp(log_rhs));
  }
  return finish(ratio, total, rel_se);
}

}  // namespace edpp
