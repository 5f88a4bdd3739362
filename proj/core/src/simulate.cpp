#include "valgames/simulate.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <thread>
#include <vector>

#include "valgames/rng.hpp"

namespace valgames {

namespace {

constexpr std::uint64_t kBlock = 4096;

struct BlockAccum {
  std::uint64_t false_claims = 0;
  std::uint64_t failures = 0;
  std::uint64_t active_checks = 0;
  std::uint64_t silent_checks = 0;
  double asserter_sum = 0.0;
  double asserter_sumsq = 0.0;
  double active_sum = 0.0;
  double silent_sum = 0.0;
};

void check_probability(double v, const char* name) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw ValidationError(ValidationError::Code::kBadRange,
                          std::string("probability in [0,1] required for ") + name);
  }
}

void check_config(const SimConfig& config) {
  validate(config.params);
  if (config.trials < 1) {
    throw ValidationError(ValidationError::Code::kBadRange, "trials >= 1");
  }
  check_probability(config.strategies.pi, "pi");
  check_probability(config.strategies.alpha, "alpha");
  if (config.params.m > 0) {
    if (!config.strategies.beta.has_value()) {
      throw ValidationError(ValidationError::Code::kBadRange,
                            "beta required when m > 0");
    }
    check_probability(*config.strategies.beta, "beta");
  } else if (config.strategies.beta.has_value()) {
    throw ValidationError(ValidationError::Code::kBadRange,
                          "beta given but the game has no silent validators");
  }
}

// One trial in the fixed draw order: claim, actives 0..n-1, silents 0..m-1.
void play_trial(const SimConfig& config, std::uint64_t trial, Outcome& outcome,
                BlockAccum& acc) {
  StreamRng rng(config.seed, trial);
  outcome.claim_false = rng.bernoulli(config.strategies.pi);
  int k = 0;
  for (int i = 0; i < config.params.n; ++i) {
    const bool c = rng.bernoulli(config.strategies.alpha);
    outcome.active_checked[i] = c;
    k += c ? 1 : 0;
  }
  int j = 0;
  const double beta = config.strategies.beta.value_or(0.0);
  for (int i = 0; i < config.params.m; ++i) {
    const bool c = rng.bernoulli(beta);
    outcome.silent_checked[i] = c;
    j += c ? 1 : 0;
  }

  const PayoffVector pay = payoff(config.params, outcome, config.rule);

  acc.false_claims += outcome.claim_false ? 1 : 0;
  acc.failures += (outcome.claim_false && k + j == 0) ? 1 : 0;
  acc.active_checks += static_cast<std::uint64_t>(k);
  acc.silent_checks += static_cast<std::uint64_t>(j);
  acc.asserter_sum += pay.asserter;
  acc.asserter_sumsq += pay.asserter * pay.asserter;
  for (double v : pay.active) acc.active_sum += v;
  for (double v : pay.silent) acc.silent_sum += v;
}

double freq_halfwidth(double p, double trials) {
  return 3.0 * std::sqrt(std::max(0.0, p * (1.0 - p)) / trials);
}

}  // namespace

SimReport run(const SimConfig& config) {
  check_config(config);
  const std::uint64_t trials = config.trials;
  const std::uint64_t nblocks = (trials + kBlock - 1) / kBlock;
  std::vector<BlockAccum> blocks(nblocks);

  unsigned hw = std::thread::hardware_concurrency();
  unsigned workers =
      config.threads > 0 ? static_cast<unsigned>(config.threads) : (hw ? hw : 1);
  workers = std::min<std::uint64_t>(workers, nblocks);

  const auto worker = [&](unsigned w) {
    Outcome outcome;
    outcome.active_checked.assign(config.params.n, false);
    outcome.silent_checked.assign(config.params.m, false);
    for (std::uint64_t b = w; b < nblocks; b += workers) {
      BlockAccum acc;
      const std::uint64_t begin = b * kBlock;
      const std::uint64_t end = std::min(trials, begin + kBlock);
      for (std::uint64_t trial = begin; trial < end; ++trial) {
        play_trial(config, trial, outcome, acc);
      }
      blocks[b] = acc;
    }
  };

  if (workers <= 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker, w);
    for (auto& th : pool) th.join();
  }

  // Combine partials in block order: the result is independent of the
  // worker count.
  BlockAccum total;
  for (const BlockAccum& b : blocks) {
    total.false_claims += b.false_claims;
    total.failures += b.failures;
    total.active_checks += b.active_checks;
    total.silent_checks += b.silent_checks;
    total.asserter_sum += b.asserter_sum;
    total.asserter_sumsq += b.asserter_sumsq;
    total.active_sum += b.active_sum;
    total.silent_sum += b.silent_sum;
  }

  const double ft = static_cast<double>(trials);
  SimReport report;
  report.trials = trials;
  report.seed = config.seed;
  report.empirical_pi = total.false_claims / ft;
  report.empirical_alpha = total.active_checks / (ft * config.params.n);
  if (config.params.m > 0) {
    report.empirical_beta = total.silent_checks / (ft * config.params.m);
  }
  report.empirical_failure_rate = total.failures / ft;
  report.mean_payoff_asserter = total.asserter_sum / ft;
  report.mean_payoff_active = total.active_sum / (ft * config.params.n);
  if (config.params.m > 0) {
    report.mean_payoff_silent = total.silent_sum / (ft * config.params.m);
  }
  report.hw_pi = freq_halfwidth(report.empirical_pi, ft);
  report.hw_alpha = freq_halfwidth(report.empirical_alpha, ft * config.params.n);
  report.hw_failure = freq_halfwidth(report.empirical_failure_rate, ft);
  if (trials > 1) {
    const double var = std::max(
        0.0, (total.asserter_sumsq - total.asserter_sum * total.asserter_sum / ft) /
                 (ft - 1.0));
    report.hw_payoff_asserter = 3.0 * std::sqrt(var / ft);
  }
  return report;
}

std::string to_json(const SimReport& report) {
  const auto num = [](double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  std::string out = "{";
  out += "\"trials\":" + std::to_string(report.trials);
  out += ",\"seed\":" + std::to_string(report.seed);
  out += ",\"empirical_pi\":" + num(report.empirical_pi);
  out += ",\"empirical_alpha\":" + num(report.empirical_alpha);
  if (report.empirical_beta) {
    out += ",\"empirical_beta\":" + num(*report.empirical_beta);
  }
  out += ",\"empirical_failure_rate\":" + num(report.empirical_failure_rate);
  out += ",\"mean_payoff_asserter\":" + num(report.mean_payoff_asserter);
  out += ",\"mean_payoff_active\":" + num(report.mean_payoff_active);
  if (report.mean_payoff_silent) {
    out += ",\"mean_payoff_silent\":" + num(*report.mean_payoff_silent);
  }
  out += ",\"hw_pi\":" + num(report.hw_pi);
  out += ",\"hw_alpha\":" + num(report.hw_alpha);
  out += ",\"hw_failure\":" + num(report.hw_failure);
  out += ",\"hw_payoff_asserter\":" + num(report.hw_payoff_asserter);
  out += "}";
  return out;
}

std::string trials_csv(const SimConfig& config) {
  check_config(config);
  if (config.trials > 100000) {
    throw ValidationError(ValidationError::Code::kBadRange,
                          "per-trial dump limited to 100000 trials");
  }
  std::string out = "trial,claim_false,active_checks,silent_checks,asserter_payoff\n";
  Outcome outcome;
  outcome.active_checked.assign(config.params.n, false);
  outcome.silent_checked.assign(config.params.m, false);
  for (std::uint64_t trial = 0; trial < config.trials; ++trial) {
    BlockAccum scratch;
    play_trial(config, trial, outcome, scratch);
    char buf[120];
    std::snprintf(buf, sizeof buf, "%llu,%d,%llu,%llu,%.17g\n",
                  static_cast<unsigned long long>(trial),
                  outcome.claim_false ? 1 : 0,
                  static_cast<unsigned long long>(scratch.active_checks),
                  static_cast<unsigned long long>(scratch.silent_checks),
                  scratch.asserter_sum);
    out += buf;
  }
  return out;
}

std::vector<DeviationWitness> find_pure_deviations(const ExtendedParams& params,
                                                   SilentRewardRule rule) {
  validate(params);
  if (params.n + params.m > 20) {
    throw ValidationError(ValidationError::Code::kBadCounts,
                          "population too large to enumerate (n + m <= 20)");
  }
  const int n = params.n;
  const int m = params.m;
  std::vector<DeviationWitness> witnesses;
  witnesses.reserve(std::size_t{2} << (n + m));

  Outcome outcome;
  outcome.active_checked.assign(n, false);
  outcome.silent_checked.assign(m, false);

  for (int claim = 0; claim < 2; ++claim) {
    for (std::uint32_t amask = 0; amask < (1u << n); ++amask) {
      for (std::uint32_t smask = 0; smask < (1u << m); ++smask) {
        outcome.claim_false = claim == 1;
        for (int i = 0; i < n; ++i) outcome.active_checked[i] = (amask >> i) & 1u;
        for (int i = 0; i < m; ++i) outcome.silent_checked[i] = (smask >> i) & 1u;
        const PayoffVector base = payoff(params, outcome, rule);

        DeviationWitness w;
        w.profile = outcome;
        bool found = false;

        {
          Outcome dev = outcome;
          dev.claim_false = !dev.claim_false;
          const double gain = payoff(params, dev, rule).asserter - base.asserter;
          if (gain > 0.0) {
            w.deviator = DeviationWitness::Deviator::kAsserter;
            w.index = -1;
            w.deviation = dev.claim_false;
            w.gain = gain;
            found = true;
          }
        }
        for (int i = 0; !found && i < n; ++i) {
          Outcome dev = outcome;
          dev.active_checked[i] = !dev.active_checked[i];
          const double gain = payoff(params, dev, rule).active[i] - base.active[i];
          if (gain > 0.0) {
            w.deviator = DeviationWitness::Deviator::kActive;
            w.index = i;
            w.deviation = dev.active_checked[i];
            w.gain = gain;
            found = true;
          }
        }
        for (int i = 0; !found && i < m; ++i) {
          Outcome dev = outcome;
          dev.silent_checked[i] = !dev.silent_checked[i];
          const double gain = payoff(params, dev, rule).silent[i] - base.silent[i];
          if (gain > 0.0) {
            w.deviator = DeviationWitness::Deviator::kSilent;
            w.index = i;
            w.deviation = dev.silent_checked[i];
            w.gain = gain;
            found = true;
          }
        }
        if (!found) {
          throw std::logic_error(
              "pure profile without a profitable deviation; payoff model broken");
        }
        witnesses.push_back(std::move(w));
      }
    }
  }
  return witnesses;
}

Residuals indifference_residuals(const ExtendedParams& params,
                                 const MixedProfile& profile,
                                 SilentRewardRule rule) {
  validate(params);
  Residuals res;
  res.asserter = eu_asserter(params, profile, AsserterAction::kFalseClaim, rule) -
                 eu_asserter(params, profile, AsserterAction::kTrueClaim, rule);
  res.active = eu_active(params, profile, ValidatorAction::kCheck, rule) -
               eu_active(params, profile, ValidatorAction::kDontCheck, rule);
  if (params.m > 0) {
    res.silent = eu_silent(params, profile, ValidatorAction::kCheck, rule) -
                 eu_silent(params, profile, ValidatorAction::kDontCheck, rule);
  }
  return res;
}

}  // namespace valgames
