#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "valgames/protocol_incentives.hpp"
#include "valgames/rng.hpp"

using namespace valgames;

namespace {

RewardScheme scheme(double C, double p, double c, double L, double r) {
  RewardScheme s;
  s.C = C;
  s.p = p;
  s.c = c;
  s.L = L;
  s.r = r;
  return s;
}

}  // namespace

TEST_CASE("IC threshold") {
  CHECK(ic_threshold(scheme(1, 10, 0.1, 0, 0)).value ==
        doctest::Approx(0.101010101010101).epsilon(1e-15));
  CHECK(ic_threshold(scheme(1, 10, 0.1, 100, 0)).value ==
        doctest::Approx(0.00909918107370337).epsilon(1e-12));

  // boundary: must audit every round
  const Threshold edge = ic_threshold(scheme(1, 2, 1, 0, 0));
  CHECK(edge.value == doctest::Approx(1.0));
  CHECK(edge.feasible);

  // above one: returned as-is, flagged
  const Threshold infeasible = ic_threshold(scheme(2, 2.5, 1, 0, 0));
  CHECK(infeasible.value == doctest::Approx(4.0 / 3.0));
  CHECK_FALSE(infeasible.feasible);

  CHECK_THROWS_AS(ic_threshold(scheme(1, 1, 2, 0.5, 0)), ValidationError);
}

TEST_CASE("IR threshold") {
  CHECK(ir_threshold(scheme(1, 10, 0.1, 0, 0)).value ==
        doctest::Approx(0.101010101010101).epsilon(1e-15));
  CHECK(ir_threshold(scheme(1, 10, 0.1, 100, 0.01)).value ==
        doctest::Approx(0.202020202020202).epsilon(1e-15));
  // r = 0 reduces to C/(p-c)
  CHECK(ir_threshold(scheme(1, 10, 0.1, 500, 0)).value ==
        doctest::Approx(1.0 / 9.9).epsilon(1e-15));
  CHECK_THROWS_AS(ir_threshold(scheme(1, 1, 1, 0, 0)), ValidationError);
}

TEST_CASE("thresholds coincide at L = 0") {
  StreamRng rng(55, 0);
  for (int draw = 0; draw < 50; ++draw) {
    const double C = 0.1 + rng.next_double() * 10;
    const double c = rng.next_double();
    const double p = c + 0.1 + rng.next_double() * 100;
    const double r = rng.next_double();
    const RewardScheme s = scheme(C, p, c, 0.0, r);
    CHECK(ic_threshold(s).value == doctest::Approx(ir_threshold(s).value));
  }
}

TEST_CASE("optimal stake is zero, with the rejected root reported") {
  const StakeChoice choice = optimal_stake(scheme(1, 10, 0.1, 50, 0.05));
  CHECK(choice.stake == 0.0);
  REQUIRE(choice.rejected_root.has_value());
  CHECK(*choice.rejected_root == doctest::Approx(-29.9).epsilon(1e-12));
  CHECK(*choice.rejected_root < 0.0);
  CHECK_FALSE(choice.degenerate);

  const StakeChoice flat = optimal_stake(scheme(1, 10, 0.1, 50, 0.0));
  CHECK(flat.stake == 0.0);
  CHECK(flat.degenerate);
  CHECK_FALSE(flat.rejected_root.has_value());

  StreamRng rng(66, 0);
  for (int draw = 0; draw < 100; ++draw) {
    const double c = rng.next_double();
    const double p = c + 0.01 + rng.next_double() * 1000;
    const double r = 1e-4 + rng.next_double();
    const StakeChoice ch = optimal_stake(scheme(0.1 + rng.next_double(), p, c, 0, r));
    CHECK(ch.stake == 0.0);
    CHECK(*ch.rejected_root < 0.0);
  }
}

TEST_CASE("zero stake minimizes the audit probability when r > 0") {
  StreamRng rng(77, 0);
  for (int draw = 0; draw < 50; ++draw) {
    const double c = rng.next_double();
    const double p = c + 0.1 + rng.next_double() * 50;
    const double C = 0.1 + rng.next_double() * 5;
    const double r = 0.001 + rng.next_double() * 0.2;
    const auto min_p_at = [&](double L) {
      const RewardScheme s = scheme(C, p, c, L, r);
      return std::max(ic_threshold(s).value, ir_threshold(s).value);
    };
    const double at_zero = min_p_at(0.0);
    for (double L : {0.1, 1.0, 10.0, 1000.0}) {
      CHECK(at_zero <= min_p_at(L) * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("checking strictly dominates just above the IC threshold") {
  StreamRng rng(88, 0);
  for (int draw = 0; draw < 50; ++draw) {
    const double c = rng.next_double();
    const double p = c + 0.1 + rng.next_double() * 50;
    const double C = 0.1 + rng.next_double() * 5;
    const double L = rng.next_double() * 100;
    const RewardScheme s = scheme(C, p, c, L, 0);
    const double P = ic_threshold(s).value * (1.0 + 1e-9);
    if (P > 1.0) continue;
    const double check_payoff = -C + P * (p - c);
    const double idle_payoff = P * (-L);
    CHECK(check_payoff > idle_payoff);
  }
}

TEST_CASE("scheme analysis wires thresholds, binding and budgets") {
  RewardScheme s = scheme(1, 10, 0.1, 100, 0.01);
  s.P = 0.5;
  s.n = 12;
  const SchemeAnalysis analysis = analyze_scheme(s);
  CHECK(analysis.pi_l.value == doctest::Approx(1.0 / 109.9));
  CHECK(analysis.pi_r.value == doctest::Approx(2.0 / 9.9));
  CHECK(analysis.binding == SchemeAnalysis::Binding::kIR);
  CHECK(analysis.min_P == doctest::Approx(2.0 / 9.9));
  CHECK(analysis.expected_budget == doctest::Approx(12 * 0.5 * 10.0));
  CHECK(analysis.budget_lower_bound == doctest::Approx(12 * 10.0 / 109.9));
  CHECK(analysis.expected_budget >= analysis.budget_lower_bound);
}

TEST_CASE("per-validator budget decreases in p toward C") {
  RewardScheme s = scheme(1, 0, 0.1, 0, 0);
  std::vector<double> ps;
  for (int i = 0; i < 24; ++i) ps.push_back(0.2 * std::pow(10.0, i / 3.0));
  const auto points = budget_curve(s, ps);
  REQUIRE(points.size() == ps.size());
  double prev = 1e300;
  for (const auto& pt : points) {
    CHECK(pt.budget_per_validator < prev);
    CHECK(pt.budget_per_validator > s.C);
    prev = pt.budget_per_validator;
  }
  CHECK(points.back().budget_per_validator ==
        doctest::Approx(1.00000010000001).epsilon(1e-12));
}

TEST_CASE("zero posting cost makes the budget exactly C") {
  RewardScheme s = scheme(2.5, 0, 0.0, 0, 0);
  const auto points = budget_curve(s, {0.5, 5.0, 500.0, 5e6});
  for (const auto& pt : points) {
    CHECK(pt.budget_per_validator == doctest::Approx(2.5).epsilon(1e-15));
  }
}

TEST_CASE("budget curve diverges at the posting-cost pole") {
  RewardScheme s = scheme(1, 0, 0.1, 0, 0);
  const auto points = budget_curve(s, {0.1 + 1e-9});
  CHECK(points[0].budget_per_validator > 1e7);

  try {
    budget_curve(s, {1.0, 0.05});
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("point 1") != std::string::npos);
  }
}

TEST_CASE("budget CSV schema") {
  RewardScheme s = scheme(1, 0, 0.1, 0, 0);
  const std::string csv = budget_csv(budget_curve(s, {1.0, 10.0}));
  CHECK(csv.rfind("p,pi_l,pi_r,min_P,budget_per_validator\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
}

TEST_CASE("scheme validation") {
  CHECK_THROWS_AS(ic_threshold(scheme(0, 10, 0.1, 0, 0)), ValidationError);
  CHECK_THROWS_AS(ic_threshold(scheme(1, 10, -0.1, 0, 0)), ValidationError);
  CHECK_THROWS_AS(ic_threshold(scheme(1, 10, 0.1, -1, 0)), ValidationError);
  RewardScheme bad_p = scheme(1, 10, 0.1, 0, 0);
  bad_p.P = 1.5;
  CHECK_THROWS_AS(ic_threshold(bad_p), ValidationError);
}
