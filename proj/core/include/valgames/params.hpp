#pragma once

#include <optional>

#include "valgames/errors.hpp"

namespace valgames {

// Primitive stakes and costs of a single verification round. All amounts are
// in one currency unit, represented as doubles.
struct CoreParams {
  double C = 1.0;  // cost of checking one claim
  double L = 0.0;  // active-validator stake, lost if cheating goes undetected
  double R = 0.0;  // asserter deposit; paid out when a false claim is caught
  double U = 1.0;  // asserter gain if a false claim goes through (the TVL)
};

// CoreParams plus population counts and secondary economics.
struct ExtendedParams {
  CoreParams core;
  int n = 1;         // active (staked) validators, n >= 1
  int m = 0;         // silent (unstaked) validators, m >= 0
  int t = 0;         // offline active validators, 0 <= t <= n
  double s_w = 0.0;  // slash on a non-posting active validator when another posts
  double f = 0.0;    // relative delay loss per false claim
  double r = 0.0;    // per-round outside return on staked capital
};

// A mixed strategy profile. beta is present iff the game has silent
// validators; beta_corner marks solutions pinned at beta == 1.
struct MixedProfile {
  double pi = 0.0;     // probability the asserter posts a false claim
  double alpha = 0.0;  // probability an active validator checks
  std::optional<double> beta;  // probability a silent validator checks
  bool beta_corner = false;
};

// Checks every model invariant and returns the params unchanged.
// Throws ValidationError naming the violated invariant:
//   C > 0, U > 0            (kNonPositive)
//   L >= 0, R >= 0          (kBadRange)
//   C < R + L               (kDominantStrategy; otherwise checking never pays)
//   n >= 1, m >= 0, 0 <= t <= n   (kBadCounts)
//   0 <= s_w <= L           (kBadSlash)
//   f >= 0, r >= 0          (kBadRange)
const ExtendedParams& validate(const ExtendedParams& params);
const CoreParams& validate(const CoreParams& core);

// Wraps a CoreParams into an ExtendedParams with the given populations.
ExtendedParams extend(const CoreParams& core, int n = 1, int m = 0);

}  // namespace valgames
