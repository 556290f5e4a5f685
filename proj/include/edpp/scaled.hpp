#pragma once

#include <cmath>
#include <complex>
#include <limits>

namespace edpp {

using cplx = std::complex<double>;

/// Complex number stored as mantissa * exp(scale). Theta values and the
/// determinants built from them routinely leave the double range at small t
/// or large N; all of those paths carry this representation and convert to a
/// plain complex only at the end.
class Scaled {
 public:
  Scaled() = default;
  Scaled(cplx value) : mant_(value) { normalize(); }  // NOLINT implicit
  Scaled(cplx mant, double scale) : mant_(mant), scale_(scale) { normalize(); }

  /// exp(z) without forming it.
  static Scaled exp(cplx z) { return Scaled(std::polar(1.0, z.imag()), z.real()); }

  cplx mant() const { return mant_; }
  double scale() const { return scale_; }
  bool is_zero() const { return mant_ == cplx(0.0, 0.0); }

  /// log|value|; -inf for zero.
  double log_abs() const {
    return is_zero() ? -std::numeric_limits<double>::infinity() : std::log(std::abs(mant_)) + scale_;
  }
  double arg() const { return std::arg(mant_); }

  cplx value() const {
    if (is_zero()) return {0.0, 0.0};
    return mant_ * std::exp(scale_);
  }
  /// value * exp(-ref); stays finite when scale is close to ref.
  cplx value_rel(double ref) const {
    if (is_zero()) return {0.0, 0.0};
    return mant_ * std::exp(scale_ - ref);
  }

  Scaled conj() const { return Scaled(std::conj(mant_), scale_); }

  Scaled& operator*=(const Scaled& o) {
    mant_ *= o.mant_;
    scale_ += o.scale_;
    normalize();
    return *this;
  }
  Scaled& operator/=(const Scaled& o) {
    mant_ /= o.mant_;
    scale_ -= o.scale_;
    normalize();
    return *this;
  }
  Scaled& operator+=(const Scaled& o) {
    if (o.is_zero()) return *this;
    if (is_zero()) return *this = o;
    if (scale_ >= o.scale_) {
      mant_ += o.mant_ * std::exp(o.scale_ - scale_);
    } else {
      mant_ = mant_ * std::exp(scale_ - o.scale_) + o.mant_;
      scale_ = o.scale_;
    }
    normalize();
    return *this;
  }
  Scaled& operator-=(const Scaled& o) { return *this += -o; }
  Scaled operator-() const { return Scaled(-mant_, scale_); }

  friend Scaled operator*(Scaled a, const Scaled& b) { return a *= b; }
  friend Scaled operator/(Scaled a, const Scaled& b) { return a /= b; }
  friend Scaled operator+(Scaled a, const Scaled& b) { return a += b; }
  friend Scaled operator-(Scaled a, const Scaled& b) { return a -= b; }

 private:
  void normalize() {
    if (mant_ == cplx(0.0, 0.0) || !std::isfinite(mant_.real()) || !std::isfinite(mant_.imag())) {
      if (mant_ == cplx(0.0, 0.0)) scale_ = 0.0;
      return;
    }
    const double m = std::abs(mant_);
    const double e = std::log(m);
    if (std::abs(e) > 16.0) {
      mant_ /= m;
      scale_ += e;
    }
  }

  cplx mant_{0.0, 0.0};
  double scale_ = 0.0;
};

/// Positive or negative real stored as sign * exp(log_abs).
struct LogReal {
  double log_abs = 0.0;
  int sign = 1;

  double value() const { return sign == 0 ? 0.0 : sign * std::exp(log_abs); }
};

}  // namespace edpp
