#pragma once

#include <vector>

#include "valgames/params.hpp"

namespace valgames {

// Which event entitles a checking silent validator to the (R + nL) pool.
// The two published descriptions of the silent game disagree, so both are
// selectable:
//   kProse     — silents are rewarded only when NO active validator checked
//                (the pool is the seized stakes of the validators who missed
//                the false claim, plus the asserter deposit).
//   kEqLiteral — silents are rewarded when at least one active validator
//                checked, which is what the closed-form silent solutions in
//                the equilibrium module assume.
// kEqLiteral is the default so that solver output and oracle agree.
enum class SilentRewardRule { kProse, kEqLiteral };

// One fully resolved round: who lied and who checked.
struct Outcome {
  bool claim_false = false;
  std::vector<bool> active_checked;  // size n
  std::vector<bool> silent_checked;  // size m
};

struct PayoffVector {
  double asserter = 0.0;
  std::vector<double> active;  // size n
  std::vector<double> silent;  // size m
};

// Exact per-round payoffs.
//
// Claim true:  every checker (active or silent) pays C; everyone else 0.
// Claim false, k active checkers, j silent checkers:
//   checking actives      R/k - C each
//   non-checking actives  -s_w if k >= 1, else -L
//   checking silents      -C, plus (R + nL)/j each when the reward rule fires
//   asserter              -R if anyone checked (k + j >= 1), else +U
PayoffVector payoff(const ExtendedParams& params, const Outcome& outcome,
                    SilentRewardRule rule = SilentRewardRule::kEqLiteral);

enum class AsserterAction { kFalseClaim, kTrueClaim };
enum class ValidatorAction { kCheck, kDontCheck };

// Exact expected utilities of a focal player's fixed action when all other
// players mix according to `profile`. Computed by enumerating opponent
// outcomes under binomial weights — no closed forms, no sampling — so these
// serve as the oracle the closed-form solvers are tested against.
double eu_asserter(const ExtendedParams& params, const MixedProfile& profile,
                   AsserterAction action,
                   SilentRewardRule rule = SilentRewardRule::kEqLiteral);
double eu_active(const ExtendedParams& params, const MixedProfile& profile,
                 ValidatorAction action,
                 SilentRewardRule rule = SilentRewardRule::kEqLiteral);
double eu_silent(const ExtendedParams& params, const MixedProfile& profile,
                 ValidatorAction action,
                 SilentRewardRule rule = SilentRewardRule::kEqLiteral);

}  // namespace valgames
