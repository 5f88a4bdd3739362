#include "valgames/payoff.hpp"

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace valgames {

namespace {

int count_true(const std::vector<bool>& v) {
  int c = 0;
  for (bool b : v) c += b ? 1 : 0;
  return c;
}

bool silent_reward_fires(SilentRewardRule rule, int active_checkers) {
  return rule == SilentRewardRule::kEqLiteral ? active_checkers >= 1
                                              : active_checkers == 0;
}

// Binomial(count, prob) pmf, exact at the degenerate ends. Weights are
// computed in log space so prob near 0 or 1 stays accurate.
std::vector<double> binomial_pmf(int count, double prob) {
  std::vector<double> w(static_cast<std::size_t>(count) + 1, 0.0);
  if (count == 0) {
    w[0] = 1.0;
    return w;
  }
  if (prob <= 0.0) {
    w[0] = 1.0;
    return w;
  }
  if (prob >= 1.0) {
    w[static_cast<std::size_t>(count)] = 1.0;
    return w;
  }
  const double log_p = std::log(prob);
  const double log_1mp = std::log1p(-prob);
  const double lg_n = std::lgamma(count + 1.0);
  for (int k = 0; k <= count; ++k) {
    const double lw = lg_n - std::lgamma(k + 1.0) - std::lgamma(count - k + 1.0) +
                      k * log_p + (count - k) * log_1mp;
    w[static_cast<std::size_t>(k)] = std::exp(lw);
  }
  return w;
}

double beta_of(const MixedProfile& profile) {
  return profile.beta.value_or(0.0);
}

}  // namespace

PayoffVector payoff(const ExtendedParams& params, const Outcome& outcome,
                    SilentRewardRule rule) {
  validate(params);
  if (static_cast<int>(outcome.active_checked.size()) != params.n ||
      static_cast<int>(outcome.silent_checked.size()) != params.m) {
    throw std::invalid_argument("outcome checker sets must match n and m");
  }
  const auto& [C, L, R, U] = params.core;

  PayoffVector result;
  result.active.assign(outcome.active_checked.size(), 0.0);
  result.silent.assign(outcome.silent_checked.size(), 0.0);

  if (!outcome.claim_false) {
    for (std::size_t i = 0; i < outcome.active_checked.size(); ++i) {
      result.active[i] = outcome.active_checked[i] ? -C : 0.0;
    }
    for (std::size_t j = 0; j < outcome.silent_checked.size(); ++j) {
      result.silent[j] = outcome.silent_checked[j] ? -C : 0.0;
    }
    return result;
  }

  const int k = count_true(outcome.active_checked);
  const int j = count_true(outcome.silent_checked);

  for (std::size_t i = 0; i < outcome.active_checked.size(); ++i) {
    if (outcome.active_checked[i]) {
      result.active[i] = R / k - C;
    } else {
      // Slashing of a non-posting active validator depends only on other
      // ACTIVE validators: s_w when one of them posted, the full stake
      // otherwise. Silent posts do not soften the loss — when silents catch
      // a claim the actives missed, the seized stakes fund the silent pool.
      result.active[i] = (k >= 1) ? -params.s_w : -L;
    }
  }

  const bool reward_silents = j >= 1 && silent_reward_fires(rule, k);
  const double silent_share = reward_silents ? (R + params.n * L) / j : 0.0;
  for (std::size_t s = 0; s < outcome.silent_checked.size(); ++s) {
    if (outcome.silent_checked[s]) {
      result.silent[s] = silent_share - C;
    }
  }

  result.asserter = (k + j >= 1) ? -R : U;
  return result;
}

double eu_asserter(const ExtendedParams& params, const MixedProfile& profile,
                   AsserterAction action, SilentRewardRule rule) {
  (void)rule;  // the asserter's own payoff does not depend on the reward rule
  validate(params);
  if (action == AsserterAction::kTrueClaim) {
    return 0.0;  // every outcome pays the asserter 0 on a true claim
  }
  const auto& [C, L, R, U] = params.core;
  (void)C;
  (void)L;
  const auto wk = binomial_pmf(params.n, profile.alpha);
  const auto wj = binomial_pmf(params.m, beta_of(profile));
  double eu = 0.0;
  for (int k = 0; k <= params.n; ++k) {
    for (int j = 0; j <= params.m; ++j) {
      const double w = wk[k] * wj[j];
      eu += w * ((k + j >= 1) ? -R : U);
    }
  }
  return eu;
}

double eu_active(const ExtendedParams& params, const MixedProfile& profile,
                 ValidatorAction action, SilentRewardRule rule) {
  (void)rule;  // active payoffs do not depend on silent actions
  validate(params);
  const auto& [C, L, R, U] = params.core;
  (void)U;
  const double pi = profile.pi;
  const auto wk = binomial_pmf(params.n - 1, profile.alpha);  // other actives
  double eu = 0.0;
  if (action == ValidatorAction::kCheck) {
    for (int k = 0; k <= params.n - 1; ++k) {
      eu += pi * wk[k] * (R / (k + 1));
    }
    eu -= C;  // paid whether or not the claim is false
  } else {
    for (int k = 0; k <= params.n - 1; ++k) {
      eu += pi * wk[k] * ((k >= 1) ? -params.s_w : -L);
    }
  }
  return eu;
}

double eu_silent(const ExtendedParams& params, const MixedProfile& profile,
                 ValidatorAction action, SilentRewardRule rule) {
  validate(params);
  if (params.m < 1) {
    throw std::invalid_argument("silent role requires m >= 1");
  }
  if (action == ValidatorAction::kDontCheck) {
    return 0.0;  // unstaked and idle: nothing gained, nothing at risk
  }
  const auto& [C, L, R, U] = params.core;
  (void)U;
  const double pi = profile.pi;
  const double pool = R + params.n * L;
  const auto wk = binomial_pmf(params.n, profile.alpha);
  const auto wj = binomial_pmf(params.m - 1, beta_of(profile));  // other silents
  double eu = -C;
  for (int k = 0; k <= params.n; ++k) {
    if (!silent_reward_fires(rule, k)) continue;
    for (int j = 0; j <= params.m - 1; ++j) {
      eu += pi * wk[k] * wj[j] * (pool / (j + 1));
    }
  }
  return eu;
}

}  // namespace valgames
