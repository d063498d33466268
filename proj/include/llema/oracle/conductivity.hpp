#pragma once

#include "llema/error.hpp"

namespace llema::oracle {

// sigma = PF / S^2 in SI units, reported in S/cm. seebeck in uV/K, power
// factor in W/(m K^2). (uV)^-2 -> V^-2 is the 1e12, S/m -> S/cm the /100.
inline double conductivity_from(double seebeck_uv_per_k, double power_factor) {
  if (seebeck_uv_per_k == 0.0) throw Error(Errc::ZeroSeebeck, "conductivity needs S != 0");
  return power_factor / (seebeck_uv_per_k * seebeck_uv_per_k) * 1e12 / 100.0;
}

}  // namespace llema::oracle
