#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "edpp/errors.hpp"

namespace edpp {

enum class RootType { A, B, Bv, C, Cv, BC, D };

/// Reduced family used by the theta building blocks and the limit kernels.
enum class Sharp { A, B, C, D };

enum class Boundary { Circ, AbsorbReflect, AbsorbAbsorb, ReflectReflect };

inline constexpr RootType kAllTypes[] = {RootType::A,  RootType::B,  RootType::Bv, RootType::C,
                                         RootType::Cv, RootType::BC, RootType::D};

std::string_view type_name(RootType t);
RootType parse_type(std::string_view tag);
std::string_view boundary_name(Boundary b);
std::string_view sharp_name(Sharp s);

struct RootSystemSpec {
  RootType type = RootType::A;
  int N = 1;
  double r = 1.0;
};

/// Per-type constants. J holds J(1..N) at index 0..N-1.
struct RootDerived {
  Sharp sharp;
  int calN;
  std::vector<double> J;
  double L;
  Boundary boundary;
  bool odd_parity;  // A type only: N odd selects theta_3 / odd circ kernel
  std::vector<double> v;
};

void validate(const RootSystemSpec& spec);
RootDerived derive(const RootSystemSpec& spec);

/// 2 pi r for A, pi r otherwise.
double domain_length(const RootSystemSpec& spec);

/// Minimum admissible N for a type.
int min_particles(RootType t);

}  // namespace edpp
