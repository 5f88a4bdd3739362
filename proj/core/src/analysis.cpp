#include "valgames/analysis.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "internal_math.hpp"

namespace valgames {

using detail::one_minus_pow;
using detail::pow_one_minus;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double social_cost_unchecked(const ExtendedParams& params, double R, double L) {
  const double C = params.core.C;
  const double U = params.core.U;
  const double pi = C / (R + L);
  const double alpha = U / (R + U);
  const double one_minus_alpha = R / (R + U);
  return params.f * U * pi + U * pi * one_minus_alpha + alpha * C +
         params.r * (L + R);
}

FailureReport make_report(const ExtendedParams& params) {
  FailureReport report;
  report.profile = solve_n_player(params);
  const int online = params.n - params.t;
  const double miss = pow_one_minus(report.profile.alpha, online);
  report.catch_prob = one_minus_pow(report.profile.alpha, online);
  report.failure_prob = report.profile.pi * miss;
  report.expected_loss = report.failure_prob * params.core.U;
  report.params = params;
  return report;
}

void append_g17(std::string& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out += buf;
}

}  // namespace

double failure_probability(const CoreParams& core) {
  validate(core);
  return core.C * core.R / ((core.R + core.L) * (core.R + core.U));
}

double expected_loss(const CoreParams& core) {
  return failure_probability(core) * core.U;
}

double optimal_reward(double U, double L) {
  if (!(U >= 0.0) || !(L >= 0.0)) {
    throw ValidationError(ValidationError::Code::kBadRange,
                          "sign: U >= 0 and L >= 0");
  }
  return std::sqrt(U * L);
}

double social_cost(const ExtendedParams& params, double R, double L) {
  CoreParams candidate = params.core;
  candidate.R = R;
  candidate.L = L;
  validate(candidate);
  if (!(params.f >= 0.0) || !(params.r >= 0.0)) {
    throw ValidationError(ValidationError::Code::kBadRange,
                          "sign: f >= 0 and r >= 0");
  }
  return social_cost_unchecked(params, R, L);
}

OptimizationResult minimize_social_cost(const ExtendedParams& params,
                                        Bounds reward_bounds,
                                        Bounds stake_bounds, bool keep_trace) {
  if (!(params.core.C > 0.0) || !(params.core.U > 0.0)) {
    throw ValidationError(ValidationError::Code::kNonPositive,
                          "positivity: C > 0 and U > 0");
  }
  if (!(params.f >= 0.0) || !(params.r >= 0.0)) {
    throw ValidationError(ValidationError::Code::kBadRange,
                          "sign: f >= 0 and r >= 0");
  }
  for (const Bounds& b : {reward_bounds, stake_bounds}) {
    if (!(b.lo > 0.0) || !(b.hi >= b.lo) || !std::isfinite(b.hi)) {
      throw ValidationError(ValidationError::Code::kBadRange,
                            "bounds: 0 < lo <= hi and finite");
    }
  }
  if (!(params.core.C < reward_bounds.hi + stake_bounds.hi)) {
    throw ValidationError(
        ValidationError::Code::kBadRange,
        "feasible region empty: R + L > C unreachable within bounds");
  }

  OptimizationResult result;
  result.objective_kind = OptimizationResult::Objective::kSocialCostM;
  result.best_R = reward_bounds.hi;
  result.best_L = stake_bounds.hi;
  result.objective_value = kInf;

  const auto eval = [&](double R, double L) -> double {
    if (!(params.core.C < R + L)) return kInf;
    const double value = social_cost_unchecked(params, R, L);
    if (keep_trace) result.trace.push_back({R, L, value});
    if (value < result.objective_value) {
      result.objective_value = value;
      result.best_R = R;
      result.best_L = L;
    }
    return value;
  };

  // Coarse pass: 64 x 64 log-spaced grid (degenerate axes collapse).
  constexpr int kGrid = 64;
  const auto grid_point = [](const Bounds& b, int i) {
    if (b.hi == b.lo) return b.lo;
    const double t = static_cast<double>(i) / (kGrid - 1);
    return std::exp(std::log(b.lo) + t * (std::log(b.hi) - std::log(b.lo)));
  };
  for (int i = 0; i < kGrid; ++i) {
    const double R = grid_point(reward_bounds, i);
    for (int j = 0; j < kGrid; ++j) {
      eval(R, grid_point(stake_bounds, j));
    }
  }

  // Refinement: golden-section per coordinate in log space, three passes.
  constexpr double kGolden = 0.6180339887498949;
  const auto golden_coord = [&](bool refine_R) {
    const Bounds& b = refine_R ? reward_bounds : stake_bounds;
    if (b.hi == b.lo) return;
    double lo = std::log(b.lo), hi = std::log(b.hi);
    const auto at = [&](double t) {
      const double v = std::exp(t);
      return refine_R ? eval(v, result.best_L) : eval(result.best_R, v);
    };
    double x1 = hi - kGolden * (hi - lo);
    double x2 = lo + kGolden * (hi - lo);
    double f1 = at(x1), f2 = at(x2);
    for (int it = 0; it < 64 && hi - lo > 1e-12; ++it) {
      if (f1 < f2) {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - kGolden * (hi - lo);
        f1 = at(x1);
      } else {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + kGolden * (hi - lo);
        f2 = at(x2);
      }
    }
  };
  for (int pass = 0; pass < 3; ++pass) {
    golden_coord(true);
    golden_coord(false);
  }

  if (!std::isfinite(result.objective_value)) {
    throw ValidationError(ValidationError::Code::kBadRange,
                          "feasible region empty within bounds");
  }
  return result;
}

FailureReport offline_robustness(const ExtendedParams& params) {
  validate(params);
  if (params.t >= params.n) {
    throw ValidationError(ValidationError::Code::kBadCounts,
                          "counts: t < n required (someone must stay online)");
  }
  return make_report(params);
}

const char* sweep_variable_name(SweepVariable variable) {
  switch (variable) {
    case SweepVariable::kC: return "C";
    case SweepVariable::kL: return "L";
    case SweepVariable::kR: return "R";
    case SweepVariable::kU: return "U";
    case SweepVariable::kN: return "n";
  }
  return "?";
}

std::vector<FailureReport> sweep(ExtendedParams params, SweepVariable variable,
                                 const std::vector<double>& values) {
  std::vector<FailureReport> rows;
  rows.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double v = values[i];
    switch (variable) {
      case SweepVariable::kC: params.core.C = v; break;
      case SweepVariable::kL: params.core.L = v; break;
      case SweepVariable::kR: params.core.R = v; break;
      case SweepVariable::kU: params.core.U = v; break;
      case SweepVariable::kN:
        if (v < 1.0 || v != std::floor(v)) {
          std::ostringstream os;
          os << "sweep point " << i << ": n must be a positive integer, got "
             << v;
          throw ValidationError(ValidationError::Code::kBadRange, os.str());
        }
        params.n = static_cast<int>(v);
        break;
    }
    try {
      rows.push_back(make_report(params));
    } catch (const ValidationError& e) {
      std::ostringstream os;
      os << "sweep point " << i << " (" << sweep_variable_name(variable)
         << " = " << v << "): " << e.what();
      throw ValidationError(e.code(), os.str());
    }
  }
  return rows;
}

std::string sweep_csv(SweepVariable variable, const std::vector<double>& values,
                      const std::vector<FailureReport>& rows) {
  std::string out = "variable,value,alpha,pi,catch_prob,failure_prob,expected_loss\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out += sweep_variable_name(variable);
    out += ',';
    append_g17(out, values[i]);
    out += ',';
    append_g17(out, rows[i].profile.alpha);
    out += ',';
    append_g17(out, rows[i].profile.pi);
    out += ',';
    append_g17(out, rows[i].catch_prob);
    out += ',';
    append_g17(out, rows[i].failure_prob);
    out += ',';
    append_g17(out, rows[i].expected_loss);
    out += '\n';
  }
  return out;
}

}  // namespace valgames
