#include "edpp/root_system.hpp"

#include <cmath>
#include <numbers>

namespace edpp {

namespace {
constexpr double kPi = std::numbers::pi;
}

std::string_view type_name(RootType t) {
  switch (t) {
    case RootType::A: return "A";
    case RootType::B: return "B";
    case RootType::Bv: return "Bv";
    case RootType::C: return "C";
    case RootType::Cv: return "Cv";
    case RootType::BC: return "BC";
    case RootType::D: return "D";
  }
  return "?";
}

RootType parse_type(std::string_view tag) {
  for (RootType t : kAllTypes) {
    if (type_name(t) == tag) return t;
  }
  throw InvalidSpecError("unknown root system type '" + std::string(tag) +
                         "' (expected A, B, Bv, C, Cv, BC, D)");
}

std::string_view boundary_name(Boundary b) {
  switch (b) {
    case Boundary::Circ: return "circ";
    case Boundary::AbsorbReflect: return "ar";
    case Boundary::AbsorbAbsorb: return "aa";
    case Boundary::ReflectReflect: return "rr";
  }
  return "?";
}

std::string_view sharp_name(Sharp s) {
  switch (s) {
    case Sharp::A: return "A";
    case Sharp::B: return "B";
    case Sharp::C: return "C";
    case Sharp::D: return "D";
  }
  return "?";
}

int min_particles(RootType t) { return t == RootType::D ? 2 : 1; }

void validate(const RootSystemSpec& spec) {
  if (!(spec.r > 0.0) || !std::isfinite(spec.r)) {
    throw InvalidSpecError("radius r must be positive and finite");
  }
  if (spec.N < min_particles(spec.type)) {
    throw InvalidSpecError(std::string("type ") + std::string(type_name(spec.type)) +
                           " requires N >= " + std::to_string(min_particles(spec.type)));
  }
}

double domain_length(const RootSystemSpec& spec) {
  return spec.type == RootType::A ? 2.0 * kPi * spec.r : kPi * spec.r;
}

RootDerived derive(const RootSystemSpec& spec) {
  validate(spec);
  const int N = spec.N;
  const double r = spec.r;
  RootDerived d{};
  d.L = domain_length(spec);
  d.odd_parity = (N % 2) != 0;
  double shift = 0.0;
  switch (spec.type) {
    case RootType::A:
      d.sharp = Sharp::A;
      d.calN = N;
      shift = -0.5;
      d.boundary = Boundary::Circ;
      break;
    case RootType::B:
      d.sharp = Sharp::B;
      d.calN = 2 * N - 1;
      shift = -1.0;
      d.boundary = Boundary::AbsorbReflect;
      break;
    case RootType::Bv:
      d.sharp = Sharp::B;
      d.calN = 2 * N;
      shift = -1.0;
      d.boundary = Boundary::AbsorbAbsorb;
      break;
    case RootType::C:
      d.sharp = Sharp::C;
      d.calN = 2 * (N + 1);
      shift = 0.0;
      d.boundary = Boundary::AbsorbAbsorb;
      break;
    case RootType::Cv:
      d.sharp = Sharp::C;
      d.calN = 2 * N;
      shift = -0.5;
      d.boundary = Boundary::AbsorbReflect;
      break;
    case RootType::BC:
      d.sharp = Sharp::C;
      d.calN = 2 * N + 1;
      shift = 0.0;
      d.boundary = Boundary::AbsorbReflect;
      break;
    case RootType::D:
      d.sharp = Sharp::D;
      d.calN = 2 * (N - 1);
      shift = -1.0;
      d.boundary = Boundary::ReflectReflect;
      break;
  }
  d.J.resize(N);
  d.v.resize(N);
  const double calN = d.calN;
  for (int j = 1; j <= N; ++j) {
    d.J[j - 1] = j + shift;
    double v = 0.0;
    switch (spec.type) {
      case RootType::A: v = 2.0 * kPi * r * (j - 1) / N; break;
      case RootType::B:
      case RootType::Bv: v = 2.0 * kPi * r * (j - 0.5) / calN; break;
      case RootType::C:
      case RootType::Cv:
      case RootType::BC: v = 2.0 * kPi * r * j / calN; break;
      case RootType::D: v = kPi * r * (j - 1) / (N - 1); break;
    }
    d.v[j - 1] = v;
  }
  if (spec.type == RootType::D) d.v[N - 1] = kPi * r;
  if (spec.type == RootType::B || spec.type == RootType::Cv) d.v[N - 1] = kPi * r;
  return d;
}

}  // namespace edpp
