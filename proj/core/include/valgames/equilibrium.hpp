#pragma once

#include "valgames/params.hpp"
#include "valgames/payoff.hpp"

namespace valgames {

struct SolveOptions {
  double tolerance = 1e-12;  // relative residual bound for numerical solves
  int max_iterations = 200;
  SilentRewardRule silent_reward_rule = SilentRewardRule::kEqLiteral;
};

// sum_{k=0}^{n} binom(n,k) x^k y^(n-k) / (k+1), evaluated in closed form as
// ((x+y)^(n+1) - y^(n+1)) / ((n+1) x).  Requires n >= 0 and x != 0.
double modbinom(int n, double x, double y);

// Two-player (one checker) equilibrium: pi = C/(R+L), alpha = U/(R+U).
MixedProfile solve_two_player(const CoreParams& core);

// Totally mixed symmetric equilibrium with n active validators and no silent
// validators (params.m must be 0):
//   alpha = 1 - (R/(R+U))^(1/n)
//   pi    = C / ( UR/((U+R) n alpha) + (1-(1-alpha)^(n-1)) s_w
//                                    + (1-alpha)^(n-1) L )
// Throws SolveError(kNoTotallyMixedEquilibrium) when the pi formula
// exceeds 1.
MixedProfile solve_n_player(const ExtendedParams& params);

// Closed form for the one-active/two-silent game:
//   alpha = (R+L)/(R+2L),  beta = U/((2a-a^2)(R+U)),  pi = C/(R+L).
// If the beta formula exceeds 1 the profile is clamped to beta = 1 and
// beta_corner is set: silent validators always check.
MixedProfile solve_silent_closed_form(const CoreParams& core);

// Numerical solve of the three indifference conditions (active, silent,
// asserter) of the game with n active and m >= 1 silent validators.
//
// The (n=1, m=2) case under kEqLiteral is solved from the same specialized
// system whose algebraic solution is solve_silent_closed_form, so the two
// routes cross-check each other. All other cases solve the general system:
//   active:   pi ( R (1-(1-a)^n)/(n a) + (1-(1-a)^(n-1))(-s_w)
//                                      + (1-a)^(n-1)(-L) ) = -C + ...
//   silent:   C = pi * G(a) * (R + nL) * (1-(1-b)^m)/(m b)
//             with G = 1-(1-a)^n under kEqLiteral, (1-a)^n under kProse
//   asserter: (1-(1-a)^n)(1-(1-b)^m) R =
//             ((1-a)^n + (1-b)^m - (1-a)^n (1-b)^m) U
// Binomial reward-splitting sums are collapsed with the modbinom identity.
//
// m == 0 delegates to solve_n_player. A beta = 1 corner is returned with
// beta_corner set (the asserter condition then pins alpha to the m = 0
// equilibrium value). When silent checking is unprofitable even as the sole
// checker, throws SolveError(kNoTotallyMixedEquilibrium) whose message
// reports the beta = 0 background equilibrium. Throws
// SolveError(kNoConvergence) if iteration and the bisection fallback both
// fail within opts.max_iterations.
MixedProfile solve_silent_general(const ExtendedParams& params,
                                  const SolveOptions& opts = {});

// Residuals of the three indifference conditions of the silent game at the
// given profile, using the same equation system solve_silent_general would
// pick for these params/rule. active and silent residuals are normalized by
// C, the asserter residual by (R+U). A beta = 1 corner profile replaces the
// silent equation residual with max(0, C - EU_check)/C, i.e. it only flags
// corners where always-checking is not weakly preferred.
struct SilentResiduals {
  double active = 0.0;
  double silent = 0.0;
  double asserter = 0.0;
};
SilentResiduals silent_system_residuals(
    const ExtendedParams& params, const MixedProfile& profile,
    SilentRewardRule rule = SilentRewardRule::kEqLiteral);

}  // namespace valgames
