#pragma once

#include "edpp/scaled.hpp"

namespace edpp {

/// i^k for integer k.
inline cplx ipow(int k) {
  switch (((k % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

}  // namespace edpp
