#pragma once

#include <array>
#include <string>
#include <vector>

#include "valgames/equilibrium.hpp"

namespace valgames {

// Equilibrium security metrics for one parameter point. catch_prob counts
// the n - t online validators; failure_prob = pi * (1 - catch_prob);
// expected_loss = failure_prob * U.
struct FailureReport {
  MixedProfile profile;
  double catch_prob = 0.0;
  double failure_prob = 0.0;
  double expected_loss = 0.0;
  ExtendedParams params;  // echo of the inputs behind the numbers
};

// F(C,L,R,U) = pi (1-alpha) = CR / ((R+L)(R+U)) for the two-player game.
double failure_probability(const CoreParams& core);

// F * U; tends to CR/(R+L) as U grows.
double expected_loss(const CoreParams& core);

// sqrt(U L): the deposit at which F peaks (F rises below, falls above).
double optimal_reward(double U, double L);

// M = f U pi + U pi (1-alpha) + alpha C + r (L+R) at the two-player
// equilibrium pi = C/(R+L), alpha = U/(R+U). The candidate (R, L) must
// satisfy C < R + L.
double social_cost(const ExtendedParams& params, double R, double L);

struct Bounds {
  double lo = 0.0;
  double hi = 0.0;
};

struct OptimizationResult {
  double best_R = 0.0;
  double best_L = 0.0;
  double objective_value = 0.0;
  enum class Objective { kFailureF, kSocialCostM } objective_kind =
      Objective::kSocialCostM;
  // (R, L, value) evaluations when tracing is requested
  std::vector<std::array<double, 3>> trace;
};

// Minimizes M over the (R, L) box: a 64x64 log-spaced grid pass followed by
// three rounds of per-coordinate golden-section refinement. Deterministic;
// grid points violating C < R + L are skipped. Throws
// ValidationError(kBadRange) if the box contains no feasible point.
OptimizationResult minimize_social_cost(const ExtendedParams& params,
                                        Bounds reward_bounds,
                                        Bounds stake_bounds,
                                        bool keep_trace = false);

// Failure report when params.t of the n validators are offline. The
// equilibrium is solved at the full n; only the catch probability shrinks to
// P(n-t). Requires t < n.
FailureReport offline_robustness(const ExtendedParams& params);

enum class SweepVariable { kC, kL, kR, kU, kN };

// One FailureReport per value, in input order. An invalid point is reported
// as a ValidationError naming its index.
std::vector<FailureReport> sweep(ExtendedParams params, SweepVariable variable,
                                 const std::vector<double>& values);

const char* sweep_variable_name(SweepVariable variable);

// CSV rows: variable,value,alpha,pi,catch_prob,failure_prob,expected_loss
std::string sweep_csv(SweepVariable variable, const std::vector<double>& values,
                      const std::vector<FailureReport>& rows);

}  // namespace valgames
