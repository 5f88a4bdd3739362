#pragma once

#include <optional>
#include <string>
#include <vector>

#include "valgames/errors.hpp"

namespace valgames {

// Reward scheme for posting checking results on-chain with probability P.
struct RewardScheme {
  double p = 0.0;  // payment for a correct post
  double c = 0.0;  // cost of posting (typically < C)
  double P = 0.0;  // posting / audit probability actually used
  double L = 0.0;  // stake
  double r = 0.0;  // per-round outside return
  double C = 1.0;  // cost of checking
  int n = 1;       // validators
};

// An audit-probability threshold. Values above 1 are returned as-is with
// feasible = false: no audit rate can enforce the constraint.
struct Threshold {
  double value = 0.0;
  bool feasible = true;
};

// Incentive compatibility: checking beats not checking iff P > C/(p-c+L).
Threshold ic_threshold(const RewardScheme& scheme);

// Individual rationality: participating beats staying out iff
// P > (C + rL)/(p-c).
Threshold ir_threshold(const RewardScheme& scheme);

// The stake minimizing max(ic, ir). The interior stationary point
// (rc - rp - C)/r is negative, so the optimum is L = 0; the rejected root is
// reported for transparency. degenerate marks r == 0, where the IR
// threshold does not depend on L at all.
struct StakeChoice {
  double stake = 0.0;
  std::optional<double> rejected_root;
  bool degenerate = false;
};
StakeChoice optimal_stake(const RewardScheme& scheme);

struct SchemeAnalysis {
  Threshold pi_l;  // IC threshold
  Threshold pi_r;  // IR threshold
  enum class Binding { kIC, kIR } binding = Binding::kIC;
  double min_P = 0.0;            // max(pi_l, pi_r)
  double expected_budget = 0.0;  // n * P * p at the scheme's own P
  double budget_lower_bound = 0.0;  // n * pi_l * p
};
SchemeAnalysis analyze_scheme(const RewardScheme& scheme);

struct BudgetPoint {
  double p = 0.0;
  double pi_l = 0.0;
  double pi_r = 0.0;
  double min_P = 0.0;
  double budget_per_validator = 0.0;  // p * min_P; p C/(p-c) at L = 0
};

// Thresholds and per-validator budget across payments p (all must exceed c).
// At L = 0 the budget is strictly decreasing in p with infimum C.
std::vector<BudgetPoint> budget_curve(const RewardScheme& scheme,
                                      const std::vector<double>& p_values);

// CSV rows: p,pi_l,pi_r,min_P,budget_per_validator
std::string budget_csv(const std::vector<BudgetPoint>& points);

}  // namespace valgames
