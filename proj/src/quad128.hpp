#pragma once

#include <quadmath.h>

namespace edpp::detail {

using real128 = __float128;

struct c128 {
  real128 re = 0;
  real128 im = 0;

  c128& operator+=(const c128& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  friend c128 operator+(c128 a, const c128& b) { return a += b; }
  friend c128 operator-(const c128& a, const c128& b) { return {a.re - b.re, a.im - b.im}; }
  friend c128 operator*(const c128& a, const c128& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend c128 operator*(real128 s, const c128& a) { return {s * a.re, s * a.im}; }
  c128 conj() const { return {re, -im}; }
};

inline c128 expi(real128 phi) {
  real128 s;
  real128 c;
  sincosq(phi, &s, &c);
  return {c, s};
}

inline const real128 kPi128 = M_PIq;

}  // namespace edpp::detail
