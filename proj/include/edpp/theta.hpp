#pragma once

#include <complex>

#include "edpp/errors.hpp"
#include "edpp/scaled.hpp"

// Jacobi theta functions in the (v; tau) normalisation
//
//   theta_0(v; tau) = sum_n (-1)^n q^{n^2} z^{2n}
//   theta_1(v; tau) = i sum_n (-1)^n q^{(n-1/2)^2} z^{2n-1}
//   theta_2(v; tau) = sum_n q^{(n-1/2)^2} z^{2n-1}
//   theta_3(v; tau) = sum_n q^{n^2} z^{2n}
//
// with z = exp(i pi v), q = exp(i pi tau), Im tau > 0. theta_0 is the
// Whittaker-Watson theta_4.

namespace edpp::theta {

/// Which of the four classical theta functions.
enum class Index { T0 = 0, T1 = 1, T2 = 2, T3 = 3 };

Index index_from_int(int i);

/// Upper half-plane parameter.
class Modular {
 public:
  explicit Modular(cplx tau);
  cplx value() const { return tau_; }

 private:
  cplx tau_;
};

/// theta_index(v; tau) as mantissa * exp(scale). Uses modular reduction of tau
/// (so the working nome is at most exp(-pi) for imaginary tau) and
/// quasi-periodic reduction of v.
Scaled theta_scaled(Index index, cplx v, const Modular& tau);

/// theta_index(v; tau) as a plain complex number (may over/underflow).
cplx theta(Index index, cplx v, const Modular& tau);

/// Direct symmetric partial sum of the defining series, no transformations.
/// Requires Im tau >= 0.05.
cplx theta_series(Index index, cplx v, const Modular& tau);

struct EtaQ {
  cplx q;
  cplx q0;
  cplx eta;
};

/// q = e^{i pi tau}, q0 = prod_{n>=1} (1 - q^{2n}), eta = q^{1/12} q0.
EtaQ eta_and_q(const Modular& tau);

/// log q0(tau) for purely imaginary tau (q0 is then real and positive). Uses
/// eta(-1/tau) = sqrt(-i tau) eta(tau) when Im tau < 1.
double log_q0_imag(double im_tau);

/// log eta(tau) for purely imaginary tau.
double log_eta_imag(double im_tau);

}  // namespace edpp::theta
