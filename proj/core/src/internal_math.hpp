#pragma once

#include <cmath>

namespace valgames::detail {

// (1 - alpha)^k without cancellation for alpha near 1.
inline double pow_one_minus(double alpha, int k) {
  if (k == 0) return 1.0;
  if (alpha >= 1.0) return 0.0;
  if (alpha <= 0.0) return 1.0;
  return std::exp(k * std::log1p(-alpha));
}

// 1 - (1 - alpha)^k, accurate for small alpha.
inline double one_minus_pow(double alpha, int k) {
  if (k == 0) return 0.0;
  if (alpha >= 1.0) return 1.0;
  if (alpha <= 0.0) return 0.0;
  return -std::expm1(k * std::log1p(-alpha));
}

}  // namespace valgames::detail
