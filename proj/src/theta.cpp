#include "edpp/theta.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace edpp::theta {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr cplx kI{0.0, 1.0};
constexpr int kTermCap = 64;
constexpr double kRelStop = 1e-17;

bool is_odd(long long k) { return (k % 2) != 0; }

// Folded cosine/sine series; v is assumed reduced so that |Re v| <= 1/2 and
// |Im v| <= Im tau / 2.
Scaled reduced_series(Index index, cplx v, cplx tau) {
  const bool half = index == Index::T1 || index == Index::T2;
  // The n = 1 pair (or the constant term) dominates after reduction; its
  // exponent is factored out so large Im tau cannot overflow the terms.
  auto exponent = [&](int n, double sign) {
    const double k = half ? n - 0.5 : n;
    const double m = half ? 2.0 * n - 1.0 : 2.0 * n;
    return kI * kPi * tau * (k * k) + sign * kI * m * kPi * v;
  };
  double ref = std::max(exponent(1, 1.0).real(), exponent(1, -1.0).real());
  if (!half) ref = std::max(ref, 0.0);
  cplx sum = half ? cplx{0.0, 0.0} : cplx{std::exp(-ref), 0.0};
  int small_run = 0;
  for (int n = 1; n <= kTermCap; ++n) {
    const cplx up = std::exp(exponent(n, 1.0) - ref);
    const cplx down = std::exp(exponent(n, -1.0) - ref);
    cplx term;
    switch (index) {
      case Index::T1: term = (up - down) / kI * (is_odd(n - 1) ? -1.0 : 1.0); break;
      case Index::T2: term = up + down; break;
      case Index::T3: term = up + down; break;
      case Index::T0: term = (up + down) * (is_odd(n) ? -1.0 : 1.0); break;
    }
    sum += term;
    if (std::abs(term) <= kRelStop * std::abs(sum)) {
      if (++small_run >= 2) return Scaled(sum, ref);
    } else {
      small_run = 0;
    }
    if (term == cplx(0.0, 0.0) && n > 2) return Scaled(sum, ref);
  }
  throw AccuracyError("theta: truncation bound not met within term cap", std::abs(sum));
}

// theta_mu(v; tau+1) in terms of tau.
// theta_0 <-> theta_3 swap; theta_1, theta_2 pick up e^{i pi/4}.
// theta_mu(v; tau) for tau = tau0 + k:  S(v; tau) -> reduce.
struct State {
  Index index;
  cplx v;
  cplx tau;
  Scaled pref{cplx{1.0, 0.0}};
};

// Shift Re v into [-1/2, 1/2) using theta(v+1) = +-theta(v).
void reduce_real(State& s) {
  const double k = std::floor(s.v.real() + 0.5);
  if (k == 0.0) return;
  s.v -= k;
  if ((s.index == Index::T1 || s.index == Index::T2) && is_odd(static_cast<long long>(k))) {
    s.pref = -s.pref;
  }
}

}  // namespace

Index index_from_int(int i) {
  if (i < 0 || i > 3) throw DomainError("theta index must be 0..3");
  return static_cast<Index>(i);
}

Modular::Modular(cplx tau) : tau_(tau) {
  if (!(tau.imag() > 0.0) || !std::isfinite(tau.real()) || !std::isfinite(tau.imag())) {
    throw DomainError("modular parameter must have Im tau > 0");
  }
}

Scaled theta_scaled(Index index, cplx v, const Modular& tau_in) {
  if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
    throw DomainError("theta: non-finite argument");
  }
  State s{index, v, tau_in.value()};

  for (int iter = 0; iter < 64; ++iter) {
    // tau -> tau - k
    const double k = std::floor(s.tau.real() + 0.5);
    if (k != 0.0) {
      s.tau -= k;
      const long long kk = static_cast<long long>(k);
      if (s.index == Index::T0 || s.index == Index::T3) {
        if (is_odd(kk)) s.index = s.index == Index::T0 ? Index::T3 : Index::T0;
      } else {
        s.pref *= Scaled::exp(kI * (kPi * static_cast<double>(kk % 8) / 4.0));
      }
    }
    if (std::abs(s.tau) >= 1.0 || s.tau.imag() >= 1.0) break;

    reduce_real(s);
    // theta_mu(v; tau) = c_mu (-i tau)^{-1/2} e^{-i pi v^2 / tau} theta_S(mu)(v/tau; -1/tau)
    const cplx root = std::pow(-kI * s.tau, -0.5);
    const cplx c = s.index == Index::T1 ? kI : cplx{1.0, 0.0};
    s.pref *= Scaled(c * root);
    s.pref *= Scaled::exp(-kI * kPi * s.v * s.v / s.tau);
    if (s.index == Index::T0) {
      s.index = Index::T2;
    } else if (s.index == Index::T2) {
      s.index = Index::T0;
    }
    s.v /= s.tau;
    s.tau = -1.0 / s.tau;
  }

  // Quasi-periodic reduction: v = v0 + m tau.
  // theta(v0 + m tau) = s^m e^{-i pi (2 m v0 + m^2 tau)} theta(v0), s = -1 for theta_0,1.
  const double m = std::round(s.v.imag() / s.tau.imag());
  if (m != 0.0) {
    s.v -= m * s.tau;
    const bool neg = (s.index == Index::T0 || s.index == Index::T1) &&
                     is_odd(static_cast<long long>(m));
    s.pref *= Scaled::exp(-kI * kPi * (2.0 * m * s.v + m * m * s.tau));
    if (neg) s.pref = -s.pref;
  }
  reduce_real(s);

  return s.pref * reduced_series(s.index, s.v, s.tau);
}

cplx theta(Index index, cplx v, const Modular& tau) {
  return theta_scaled(index, v, tau).value();
}

cplx theta_series(Index index, cplx v, const Modular& tau_m) {
  const cplx tau = tau_m.value();
  if (tau.imag() < 0.05) {
    throw AccuracyError("theta_series: Im tau below 0.05, series not used without acceleration");
  }
  const bool half = index == Index::T1 || index == Index::T2;
  const double off = half ? 0.5 : 0.0;
  auto term = [&](long long n) {
    const double k = static_cast<double>(n) - off;
    cplx t = std::exp(kI * kPi * (tau * (k * k) + 2.0 * k * v));
    if ((index == Index::T0 || index == Index::T1) && is_odd(n)) t = -t;
    return t;
  };
  // Centre the symmetric window on the largest term.
  const long long centre = std::llround(-v.imag() / tau.imag());
  cplx sum = term(centre);
  int small_run = 0;
  for (long long j = 1; j < 4000; ++j) {
    const cplx a = term(centre + j);
    const cplx b = term(centre - j);
    sum += a + b;
    const double mag = std::abs(a) + std::abs(b);
    if (mag <= kRelStop * std::abs(sum) || mag == 0.0) {
      if (++small_run >= 2) {
        return index == Index::T1 ? kI * sum : sum;
      }
    } else {
      small_run = 0;
    }
  }
  throw AccuracyError("theta_series: no convergence", std::abs(sum));
}

EtaQ eta_and_q(const Modular& tau_m) {
  const cplx tau = tau_m.value();
  const cplx q = std::exp(kI * kPi * tau);
  const cplx q2 = q * q;
  cplx prod{1.0, 0.0};
  cplx p = q2;
  for (int n = 1; n < 100000; ++n) {
    prod *= (1.0 - p);
    if (std::abs(p) < 1e-17) break;
    p *= q2;
  }
  const cplx eta = std::exp(kI * kPi * tau / 12.0) * prod;
  return {q, prod, eta};
}

double log_eta_imag(double im_tau) {
  if (!(im_tau > 0.0)) throw DomainError("eta: Im tau must be positive");
  if (im_tau < 1.0) {
    // eta(i s) = s^{-1/2} eta(i / s)
    return -0.5 * std::log(im_tau) + log_eta_imag(1.0 / im_tau);
  }
  const double q2 = std::exp(-2.0 * kPi * im_tau);
  double acc = -kPi * im_tau / 12.0;
  double p = q2;
  while (p > 1e-18) {
    acc += std::log1p(-p);
    p *= q2;
  }
  return acc;
}

double log_q0_imag(double im_tau) {
  return log_eta_imag(im_tau) + kPi * im_tau / 12.0;
}

}  // namespace edpp::theta
