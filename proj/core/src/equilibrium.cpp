#include "valgames/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "internal_math.hpp"

namespace valgames {

using detail::one_minus_pow;
using detail::pow_one_minus;

namespace {

void check_options(const SolveOptions& opts) {
  if (!(opts.tolerance > 0.0)) {
    throw ValidationError(ValidationError::Code::kBadRange,
                          "solve options: tolerance > 0");
  }
  if (opts.max_iterations < 1) {
    throw ValidationError(ValidationError::Code::kBadRange,
                          "solve options: max_iterations >= 1");
  }
}

// alpha solving the asserter condition (1-(1-a)^n) R = (1-a)^n U.
double asserter_alpha(const CoreParams& core, int n) {
  if (core.R == 0.0) return 1.0;
  return -std::expm1(std::log(core.R / (core.R + core.U)) / n);
}

// Denominator of the active-validator pi formula at an arbitrary alpha:
// R (1-(1-a)^n)/(n a) + (1-(1-a)^(n-1)) s_w + (1-a)^(n-1) L.
double active_denominator(const ExtendedParams& params, double alpha) {
  const double R = params.core.R;
  const double L = params.core.L;
  const int n = params.n;
  const double miss_rest = pow_one_minus(alpha, n - 1);
  const double reward =
      alpha <= 0.0 ? R : R * one_minus_pow(alpha, n) / (n * alpha);
  return reward + (1.0 - miss_rest) * params.s_w + miss_rest * L;
}

// Expected share multiplier of a pool split among the focal checker and a
// Binomial(m-1, beta) crowd: (1-(1-b)^m)/(m b), the modbinom closed form.
double share_factor(int m, double beta) {
  if (m == 1 || beta <= 0.0) return 1.0;
  if (beta >= 1.0) return 1.0 / m;
  return one_minus_pow(beta, m) / (m * beta);
}

MixedProfile n_player_unchecked(const ExtendedParams& params) {
  MixedProfile profile;
  profile.alpha = asserter_alpha(params.core, params.n);
  profile.pi = params.core.C / active_denominator(params, profile.alpha);
  return profile;
}

std::string no_mixed_message(const ExtendedParams& params, double pi) {
  std::ostringstream os;
  os << "no totally mixed equilibrium: the checker indifference requires pi = "
     << pi << " > 1 (n = " << params.n << ")";
  return os.str();
}

// ---- one active / two silent validators, literal-equation rule ----------
//
// This case has the algebraic solution implemented in
// solve_silent_closed_form; the numerical route solves the same specialized
// system so the two can cross-check:
//   active:   pi (R + L) = C
//   silent:   pi a (R + 2L) = C
//   asserter: (2a - a^2) b (R + U) = U, clamped to b = 1 when above 1.
MixedProfile solve_one_active_two_silent(const ExtendedParams& params,
                                         const SolveOptions& opts) {
  const auto& [C, L, R, U] = params.core;
  const double pi = C / (R + L);
  const auto silent_gap = [&](double a) { return pi * a * (R + 2.0 * L) - C; };

  // silent_gap is strictly increasing with silent_gap(1) = CL/(R+L) >= 0.
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 20000 && hi - lo > 1e-16; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (silent_gap(mid) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (std::abs(silent_gap(mid)) < opts.tolerance * C && hi - lo < 1e-12) break;
  }
  const double alpha = 0.5 * (lo + hi);

  MixedProfile profile;
  profile.pi = pi;
  profile.alpha = alpha;
  const double catch_two = alpha * (2.0 - alpha);  // 1 - (1-a)^2
  const double beta_raw = U / (catch_two * (R + U));
  if (beta_raw > 1.0) {
    profile.beta = 1.0;
    profile.beta_corner = true;
  } else {
    profile.beta = beta_raw;
  }
  return profile;
}

// ---- general silent system ----------------------------------------------

struct SilentSystem {
  ExtendedParams params;
  SilentRewardRule rule;
  double u = 0.0;           // U/(R+U), the equilibrium catch probability
  double alpha_floor = 0.0; // m = 0 equilibrium alpha; asserter-feasible a >= this

  explicit SilentSystem(const ExtendedParams& p, SilentRewardRule r)
      : params(p), rule(r) {
    u = p.core.U / (p.core.R + p.core.U);
    alpha_floor = asserter_alpha(p.core, p.n);
  }

  double reward_trigger(double a) const {
    return rule == SilentRewardRule::kEqLiteral
               ? one_minus_pow(a, params.n)
               : pow_one_minus(a, params.n);
  }

  double pi_of(double a) const {
    return params.core.C / active_denominator(params, a);
  }

  // beta consistent with the asserter condition at this alpha:
  // (1-(1-a)^n)(1-(1-b)^m) = u. NaN below the feasibility floor.
  double beta_from_asserter(double a) const {
    const double caught_active = one_minus_pow(a, params.n);
    const double one_minus_B = u / caught_active;
    if (!(one_minus_B <= 1.0)) return std::nan("");
    const double B = 1.0 - one_minus_B;
    if (B <= 0.0) return 1.0;
    return -std::expm1(std::log(B) / params.m);
  }

  // Silent indifference residual along the asserter-consistent curve.
  double silent_gap(double a) const {
    const double beta = beta_from_asserter(a);
    if (std::isnan(beta)) return std::nan("");
    const double pool = params.core.R + params.n * params.core.L;
    return pi_of(a) * reward_trigger(a) * pool * share_factor(params.m, beta) -
           params.core.C;
  }

  // Inverse of beta_from_asserter: the alpha making the asserter indifferent
  // when silents check with probability beta.
  double alpha_from_asserter(double beta) const {
    const double B = pow_one_minus(beta, params.m);
    const double caught_active = std::min(1.0, u / (1.0 - B));
    if (caught_active >= 1.0) return 1.0;
    // (1-a)^n = 1 - caught_active
    return -std::expm1(std::log1p(-caught_active) / params.n);
  }

  // The beta making the silent condition hold at this alpha, or NaN when the
  // required share multiplier is unreachable in (0, 1].
  double beta_from_silent(double a) const {
    const double pool = params.core.R + params.n * params.core.L;
    const double gross = pi_of(a) * reward_trigger(a) * pool;
    if (!(gross > 0.0)) return std::nan("");
    const double share_needed = params.core.C / gross;
    if (share_needed > 1.0 || share_needed < 1.0 / params.m) return std::nan("");
    // share_factor is strictly decreasing in beta: bisect.
    double lo = 0.0, hi = 1.0;
    for (int i = 0; i < 200; ++i) {
      const double mid = 0.5 * (lo + hi);
      if (share_factor(params.m, mid) > share_needed) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    return 0.5 * (lo + hi);
  }
};

MixedProfile solve_silent_printed_general(const ExtendedParams& params,
                                          const SolveOptions& opts) {
  const SilentSystem sys(params, opts.silent_reward_rule);
  const double C = params.core.C;

  const double lo = std::nextafter(sys.alpha_floor, 1.0);
  const double hi = 1.0 - 1e-15;

  // Damped fixed point on (alpha, beta) with pi eliminated through the
  // active condition: beta from the silent condition, alpha pulled toward
  // the asserter-consistent value.
  double a = std::clamp(0.5 * (lo + 1.0), lo, hi);
  bool converged = false;
  const double damping = 0.5;
  for (int it = 0; it < opts.max_iterations; ++it) {
    const double beta_target = sys.beta_from_silent(a);
    if (std::isnan(beta_target)) break;
    const double a_target = sys.alpha_from_asserter(beta_target);
    if (std::isnan(a_target) || a_target <= 0.0) break;
    const double a_next = std::clamp(a + damping * (a_target - a), lo, hi);
    const double gap = sys.silent_gap(a_next);
    a = a_next;
    if (std::isfinite(gap) && std::abs(gap) < opts.tolerance * C) {
      converged = true;
      break;
    }
  }

  if (!converged) {
    // Bisection fallback on the 1-D reduction: scan for a sign change of the
    // silent gap along the asserter-consistent curve.
    const int kScan = 256;
    double prev_a = lo;
    double prev_gap = sys.silent_gap(prev_a);
    double root_lo = std::nan(""), root_hi = std::nan("");
    for (int i = 1; i <= kScan; ++i) {
      const double cur_a = lo + (hi - lo) * i / kScan;
      const double cur_gap = sys.silent_gap(cur_a);
      if (std::isfinite(prev_gap) && std::isfinite(cur_gap) &&
          (prev_gap <= 0.0) != (cur_gap <= 0.0)) {
        root_lo = prev_a;
        root_hi = cur_a;
        break;
      }
      prev_a = cur_a;
      prev_gap = cur_gap;
    }
    if (std::isfinite(root_lo)) {
      for (int i = 0; i < 200 && root_hi - root_lo > 1e-16; ++i) {
        const double mid = 0.5 * (root_lo + root_hi);
        if ((sys.silent_gap(root_lo) <= 0.0) == (sys.silent_gap(mid) <= 0.0)) {
          root_lo = mid;
        } else {
          root_hi = mid;
        }
      }
      a = 0.5 * (root_lo + root_hi);
      converged = std::abs(sys.silent_gap(a)) < opts.tolerance * C * 1e3 ||
                  root_hi - root_lo <= 1e-12;
    }
  }

  if (converged) {
    MixedProfile profile;
    profile.alpha = a;
    profile.beta = sys.beta_from_asserter(a);
    profile.pi = sys.pi_of(a);
    if (!(profile.pi <= 1.0)) {
      throw SolveError(SolveError::Code::kNoTotallyMixedEquilibrium,
                       no_mixed_message(params, profile.pi));
    }
    return profile;
  }

  // No interior solution along the curve. Classify the boundary.
  const double pool = params.core.R + params.n * params.core.L;
  const double pi_floor = sys.pi_of(sys.alpha_floor);

  // beta = 1 corner: the asserter condition pins alpha to the m = 0 value;
  // valid if a silent validator weakly prefers checking when all do.
  const double corner_gain =
      pi_floor * sys.reward_trigger(sys.alpha_floor) * pool / params.m - C;
  if (corner_gain >= 0.0) {
    if (!(pi_floor <= 1.0)) {
      throw SolveError(SolveError::Code::kNoTotallyMixedEquilibrium,
                       no_mixed_message(params, pi_floor));
    }
    MixedProfile profile;
    profile.alpha = sys.alpha_floor;
    profile.beta = 1.0;
    profile.beta_corner = true;
    profile.pi = pi_floor;
    return profile;
  }

  // beta = 0: silents never check; the rest of the game is the m = 0
  // equilibrium. Valid when even a lone silent checker would lose.
  const double lone_gain =
      pi_floor * sys.reward_trigger(sys.alpha_floor) * pool - C;
  if (lone_gain <= 0.0) {
    std::ostringstream os;
    os << "no totally mixed equilibrium: silent validators never check"
       << " (beta = 0; background equilibrium pi = " << pi_floor
       << ", alpha = " << sys.alpha_floor << ")";
    throw SolveError(SolveError::Code::kNoTotallyMixedEquilibrium, os.str());
  }

  throw SolveError(SolveError::Code::kNoConvergence,
                   "silent-game solve did not converge within max_iterations");
}

}  // namespace

double modbinom(int n, double x, double y) {
  if (n < 0) {
    throw ValidationError(ValidationError::Code::kBadRange, "modbinom: n >= 0");
  }
  if (x == 0.0) {
    throw ValidationError(ValidationError::Code::kBadRange, "modbinom: x != 0");
  }
  return (std::pow(x + y, n + 1) - std::pow(y, n + 1)) / ((n + 1) * x);
}

MixedProfile solve_two_player(const CoreParams& core) {
  validate(core);
  MixedProfile profile;
  profile.pi = core.C / (core.R + core.L);
  profile.alpha = core.U / (core.R + core.U);
  return profile;
}

MixedProfile solve_n_player(const ExtendedParams& params) {
  validate(params);
  if (params.m != 0) {
    throw ValidationError(ValidationError::Code::kBadCounts,
                          "counts: m = 0 required by the n-player solver");
  }
  MixedProfile profile = n_player_unchecked(params);
  if (!(profile.pi <= 1.0)) {
    throw SolveError(SolveError::Code::kNoTotallyMixedEquilibrium,
                     no_mixed_message(params, profile.pi));
  }
  return profile;
}

MixedProfile solve_silent_closed_form(const CoreParams& core) {
  validate(core);
  MixedProfile profile;
  profile.alpha = (core.R + core.L) / (core.R + 2.0 * core.L);
  profile.pi = core.C / (core.R + core.L);
  const double catch_two = profile.alpha * (2.0 - profile.alpha);
  const double beta_raw = core.U / (catch_two * (core.R + core.U));
  if (beta_raw > 1.0) {
    profile.beta = 1.0;
    profile.beta_corner = true;
  } else {
    profile.beta = beta_raw;
  }
  return profile;
}

MixedProfile solve_silent_general(const ExtendedParams& params,
                                  const SolveOptions& opts) {
  validate(params);
  check_options(opts);
  if (params.m == 0) {
    return solve_n_player(params);
  }
  if (params.n == 1 && params.m == 2 &&
      opts.silent_reward_rule == SilentRewardRule::kEqLiteral) {
    return solve_one_active_two_silent(params, opts);
  }
  return solve_silent_printed_general(params, opts);
}

SilentResiduals silent_system_residuals(const ExtendedParams& params,
                                        const MixedProfile& profile,
                                        SilentRewardRule rule) {
  validate(params);
  if (params.m < 1) {
    throw ValidationError(ValidationError::Code::kBadCounts,
                          "counts: m >= 1 required for silent residuals");
  }
  if (!profile.beta.has_value()) {
    throw ValidationError(ValidationError::Code::kBadRange,
                          "profile: beta required for silent residuals");
  }
  const auto& [C, L, R, U] = params.core;
  const double a = profile.alpha;
  const double b = *profile.beta;
  const double pi = profile.pi;

  SilentResiduals res;
  res.active = std::abs(pi * active_denominator(params, a) - C) / C;

  double silent_lhs;
  double asserter_gap;
  if (params.n == 1 && params.m == 2 && rule == SilentRewardRule::kEqLiteral) {
    silent_lhs = pi * a * (R + 2.0 * L);
    asserter_gap = a * (2.0 - a) * b * (R + U) - U;
  } else {
    const SilentSystem sys(params, rule);
    silent_lhs = pi * sys.reward_trigger(a) * (R + params.n * L) *
                 share_factor(params.m, b);
    const double caught =
        one_minus_pow(a, params.n) * one_minus_pow(b, params.m);
    asserter_gap = caught * (R + U) - U;
  }
  res.silent = profile.beta_corner ? std::max(0.0, C - silent_lhs) / C
                                   : std::abs(silent_lhs - C) / C;
  res.asserter = std::abs(asserter_gap) / (R + U);
  return res;
}

}  // namespace valgames
