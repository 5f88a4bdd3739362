#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "valgames/payoff.hpp"

namespace valgames {

struct SimConfig {
  ExtendedParams params;
  MixedProfile strategies;  // 0/1 probabilities give pure play
  std::uint64_t trials = 1;
  std::uint64_t seed = 0;
  SilentRewardRule rule = SilentRewardRule::kEqLiteral;
  int threads = 0;  // 0 = hardware concurrency; result is thread-count independent
};

struct SimReport {
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  double empirical_pi = 0.0;
  double empirical_alpha = 0.0;
  std::optional<double> empirical_beta;
  double empirical_failure_rate = 0.0;  // false claim and zero checkers
  double mean_payoff_asserter = 0.0;
  double mean_payoff_active = 0.0;  // per validator
  std::optional<double> mean_payoff_silent;
  // 3-sigma normal-approximation halfwidths
  double hw_pi = 0.0;
  double hw_alpha = 0.0;
  double hw_failure = 0.0;
  double hw_payoff_asserter = 0.0;
};

// Simulates independent rounds: the asserter lies with pi, each active
// validator checks with alpha, each silent with beta; payoffs via payoff().
// Trials are processed in fixed 4096-trial blocks whose partial sums are
// combined in block order, so the report is bit-identical for any thread
// count and across reruns of the same (seed, trials).
SimReport run(const SimConfig& config);

// Full-precision JSON rendering of a report (stable field order).
std::string to_json(const SimReport& report);

// Per-trial CSV (trial,claim_false,active_checks,silent_checks,
// asserter_payoff). Intended for small runs; refuses trials > 100000.
std::string trials_csv(const SimConfig& config);

// A strictly profitable unilateral deviation from a pure strategy profile.
struct DeviationWitness {
  Outcome profile;
  enum class Deviator { kAsserter, kActive, kSilent } deviator =
      Deviator::kAsserter;
  int index = -1;       // validator index; -1 for the asserter
  bool deviation = false;  // action deviated to (claim-false / check flag)
  double gain = 0.0;    // > 0
};

// Enumerates every pure profile (asserter claim x each validator's action)
// and returns one strictly profitable deviation per profile — demonstrating
// that no pure Nash equilibrium exists. Requires n + m <= 20.
std::vector<DeviationWitness> find_pure_deviations(
    const ExtendedParams& params,
    SilentRewardRule rule = SilentRewardRule::kEqLiteral);

// Signed expected-utility gaps (commit minus pass) per role, computed with
// the exact enumeration oracle: asserter = EU[false] - EU[true], active =
// EU[check] - EU[don't], silent likewise when m > 0. Solver output must
// drive the gaps of its own game to ~0.
struct Residuals {
  double asserter = 0.0;
  double active = 0.0;
  std::optional<double> silent;
};
Residuals indifference_residuals(
    const ExtendedParams& params, const MixedProfile& profile,
    SilentRewardRule rule = SilentRewardRule::kEqLiteral);

}  // namespace valgames
