#include "valgames/protocol_incentives.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace valgames {

namespace {

void check_scheme(const RewardScheme& scheme) {
  if (!(scheme.C > 0.0)) {
    throw ValidationError(ValidationError::Code::kNonPositive,
                          "positivity: C > 0");
  }
  if (scheme.c < 0.0) {
    throw ValidationError(ValidationError::Code::kBadRange, "sign: c >= 0");
  }
  if (scheme.L < 0.0) {
    throw ValidationError(ValidationError::Code::kBadRange, "sign: L >= 0");
  }
  if (scheme.r < 0.0) {
    throw ValidationError(ValidationError::Code::kBadRange, "sign: r >= 0");
  }
  if (!(scheme.P >= 0.0 && scheme.P <= 1.0)) {
    throw ValidationError(ValidationError::Code::kBadRange,
                          "probability in [0,1] required for P");
  }
  if (scheme.n < 1) {
    throw ValidationError(ValidationError::Code::kBadCounts, "counts: n >= 1");
  }
}

}  // namespace

Threshold ic_threshold(const RewardScheme& scheme) {
  check_scheme(scheme);
  const double denom = scheme.p - scheme.c + scheme.L;
  if (!(denom > 0.0)) {
    throw ValidationError(ValidationError::Code::kBadRange,
                          "IC threshold undefined: p - c + L > 0 required");
  }
  const double value = scheme.C / denom;
  return {value, value <= 1.0};
}

Threshold ir_threshold(const RewardScheme& scheme) {
  check_scheme(scheme);
  if (!(scheme.p > scheme.c)) {
    throw ValidationError(ValidationError::Code::kBadRange,
                          "IR threshold undefined: p > c required");
  }
  const double value = (scheme.C + scheme.r * scheme.L) / (scheme.p - scheme.c);
  return {value, value <= 1.0};
}

StakeChoice optimal_stake(const RewardScheme& scheme) {
  check_scheme(scheme);
  if (!(scheme.p > scheme.c)) {
    throw ValidationError(ValidationError::Code::kBadRange,
                          "stake optimization undefined: p > c required");
  }
  StakeChoice choice;
  choice.stake = 0.0;
  if (scheme.r > 0.0) {
    // The equal-threshold stationary point; always negative, hence rejected.
    choice.rejected_root =
        (scheme.r * scheme.c - scheme.r * scheme.p - scheme.C) / scheme.r;
  } else {
    choice.degenerate = true;  // IR does not depend on L when r = 0
  }
  return choice;
}

SchemeAnalysis analyze_scheme(const RewardScheme& scheme) {
  SchemeAnalysis analysis;
  analysis.pi_l = ic_threshold(scheme);
  analysis.pi_r = ir_threshold(scheme);
  analysis.binding = analysis.pi_l.value >= analysis.pi_r.value
                         ? SchemeAnalysis::Binding::kIC
                         : SchemeAnalysis::Binding::kIR;
  analysis.min_P = std::max(analysis.pi_l.value, analysis.pi_r.value);
  analysis.expected_budget = scheme.n * scheme.P * scheme.p;
  analysis.budget_lower_bound = scheme.n * analysis.pi_l.value * scheme.p;
  return analysis;
}

std::vector<BudgetPoint> budget_curve(const RewardScheme& scheme,
                                      const std::vector<double>& p_values) {
  check_scheme(scheme);
  std::vector<BudgetPoint> points;
  points.reserve(p_values.size());
  for (std::size_t i = 0; i < p_values.size(); ++i) {
    RewardScheme at = scheme;
    at.p = p_values[i];
    if (!(at.p > at.c)) {
      std::ostringstream os;
      os << "budget curve point " << i << ": p > c required, got p = " << at.p;
      throw ValidationError(ValidationError::Code::kBadRange, os.str());
    }
    BudgetPoint point;
    point.p = at.p;
    point.pi_l = ic_threshold(at).value;
    point.pi_r = ir_threshold(at).value;
    point.min_P = std::max(point.pi_l, point.pi_r);
    point.budget_per_validator = at.p * point.min_P;
    points.push_back(point);
  }
  return points;
}

std::string budget_csv(const std::vector<BudgetPoint>& points) {
  std::string out = "p,pi_l,pi_r,min_P,budget_per_validator\n";
  char buf[200];
  for (const BudgetPoint& pt : points) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\n", pt.p,
                  pt.pi_l, pt.pi_r, pt.min_P, pt.budget_per_validator);
    out += buf;
  }
  return out;
}

}  // namespace valgames
