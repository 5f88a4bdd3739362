#include "valgames/params.hpp"

#include <cmath>

namespace valgames {

namespace {

void check_finite(double v, const char* name) {
  if (!std::isfinite(v)) {
    throw ValidationError(ValidationError::Code::kBadRange,
                          std::string("finite value required for ") + name);
  }
}

}  // namespace

const CoreParams& validate(const CoreParams& core) {
  check_finite(core.C, "C");
  check_finite(core.L, "L");
  check_finite(core.R, "R");
  check_finite(core.U, "U");
  if (core.C <= 0.0) {
    throw ValidationError(ValidationError::Code::kNonPositive,
                          "positivity: C > 0");
  }
  if (core.U <= 0.0) {
    throw ValidationError(ValidationError::Code::kNonPositive,
                          "positivity: U > 0");
  }
  if (core.L < 0.0) {
    throw ValidationError(ValidationError::Code::kBadRange, "sign: L >= 0");
  }
  if (core.R < 0.0) {
    throw ValidationError(ValidationError::Code::kBadRange, "sign: R >= 0");
  }
  if (!(core.C < core.R + core.L)) {
    throw ValidationError(ValidationError::Code::kDominantStrategy,
                          "Assumption 1: C < R+L");
  }
  return core;
}

const ExtendedParams& validate(const ExtendedParams& params) {
  validate(params.core);
  if (params.n < 1 || params.m < 0 || params.t < 0) {
    throw ValidationError(ValidationError::Code::kBadCounts,
                          "counts: n >= 1, m >= 0, t >= 0");
  }
  if (params.t > params.n) {
    throw ValidationError(ValidationError::Code::kBadCounts, "counts: t <= n");
  }
  check_finite(params.s_w, "s_w");
  check_finite(params.f, "f");
  check_finite(params.r, "r");
  if (params.s_w < 0.0 || params.s_w > params.core.L) {
    throw ValidationError(ValidationError::Code::kBadSlash,
                          "slash bound: 0 <= s_w <= L");
  }
  if (params.f < 0.0) {
    throw ValidationError(ValidationError::Code::kBadRange, "sign: f >= 0");
  }
  if (params.r < 0.0) {
    throw ValidationError(ValidationError::Code::kBadRange, "sign: r >= 0");
  }
  return params;
}

ExtendedParams extend(const CoreParams& core, int n, int m) {
  ExtendedParams params;
  params.core = core;
  params.n = n;
  params.m = m;
  return params;
}

}  // namespace valgames
