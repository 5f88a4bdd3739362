#include "doctest.h"

#include <cmath>
#include <set>
#include <string>

#include "valgames/attention.hpp"
#include "valgames/rng.hpp"

using namespace valgames;
using namespace valgames::attention;

namespace {

Bytes bytes_of(std::initializer_list<int> values) {
  Bytes out;
  for (int v : values) out.push_back(static_cast<std::uint8_t>(v));
  return out;
}

const Bytes kX = bytes_of({1, 2, 3, 4});
const Bytes kFx = bytes_of({0xAA, 0xBB, 0xCC});
const Bytes kWrongFx = bytes_of({0xAA, 0xBB, 0xCD});

}  // namespace

TEST_CASE("thresholds: construction and fractions") {
  CHECK(Threshold256::pow2(255).fraction() == doctest::Approx(0.5));
  CHECK(Threshold256::pow2(252).fraction() == doctest::Approx(1.0 / 16.0));
  CHECK(Threshold256::zero().fraction() == 0.0);
  CHECK(Threshold256::max().fraction() == doctest::Approx(1.0));
  CHECK_THROWS_AS(Threshold256::pow2(256), std::invalid_argument);
  CHECK_THROWS_AS(Threshold256::pow2(-1), std::invalid_argument);

  const Threshold256 t = Threshold256::pow2(252);
  CHECK(Threshold256::from_hex(t.to_hex()) == t);
}

TEST_CASE("group construction validates the structure") {
  const Group& g = Group::test_group_61();
  CHECK(g.element_bytes() == 8);
  CHECK(g.p() == 2 * g.q() + 1);

  // order-2 element is rejected as a generator
  CHECK_THROWS_AS(Group(g.p(), g.q(), g.p() - 1), std::invalid_argument);
  // not a safe-prime pair
  CHECK_THROWS_AS(Group(g.p(), g.q() - 1, 4), std::invalid_argument);
  // composite modulus
  CHECK_THROWS_AS(Group(mpz_class(15), mpz_class(7), mpz_class(4)),
                  std::invalid_argument);
}

TEST_CASE("the 2048-bit group is available and shaped right") {
  const Group& g = Group::modp2048();
  CHECK(g.element_bytes() == 256);
  CHECK(mpz_sizeinbase(g.p().get_mpz_t(), 2) == 2048);
}

TEST_CASE("keygen is deterministic and consistent") {
  const Group& g = Group::test_group_61();
  const ValidatorKey a = keygen(g, 12345);
  const ValidatorKey b = keygen(g, 12345);
  CHECK(a.k == b.k);
  CHECK(a.pub == b.pub);
  CHECK(g.pow_g(a.k) == a.pub);
  CHECK(g.valid_scalar(a.k));
}

TEST_CASE("distinct seeds give distinct keys") {
  const Group& g = Group::test_group_61();
  std::set<std::string> seen;
  for (std::uint64_t seed = 0; seed < 10000; ++seed) {
    seen.insert(keygen(g, seed).k.get_str(16));
  }
  // collisions would need ~2^30 draws in a 2^60 group; zero expected here
  CHECK(seen.size() == 10000);
}

TEST_CASE("challenges are deterministic and binding") {
  const Group& g = Group::test_group_61();
  const mpz_class r = scalar_from_seed(g, 7, 0);
  const Challenge c1 = make_challenge(g, kX, kFx, r, Threshold256::pow2(255));
  const Challenge c2 = make_challenge(g, kX, kFx, r, Threshold256::pow2(255));
  CHECK(c1.gr == c2.gr);
  CHECK(c1.commitment == c2.commitment);

  // a different claimed result produces a different commitment
  const Challenge c3 = make_challenge(g, kX, kWrongFx, r, Threshold256::pow2(255));
  CHECK(c3.commitment != c1.commitment);

  CHECK_THROWS_AS(make_challenge(g, kX, kFx, mpz_class(0), Threshold256::max()),
                  std::invalid_argument);
  CHECK_THROWS_AS(make_challenge(g, kX, kFx, g.q(), Threshold256::max()),
                  std::invalid_argument);
}

TEST_CASE("challenge JSON round-trips bit-exactly") {
  const Group& g = Group::test_group_61();
  const Challenge c =
      make_challenge(g, kX, kFx, scalar_from_seed(g, 9, 0), Threshold256::pow2(200));
  const Challenge back = challenge_from_json(challenge_to_json(g, c));
  CHECK(back.x == c.x);
  CHECK(back.gr == c.gr);
  CHECK(back.commitment == c.commitment);
  CHECK(back.T == c.T);
  CHECK(challenge_to_json(g, back) == challenge_to_json(g, c));
}

TEST_CASE("Diffie-Hellman symmetry and predicate agreement") {
  const Group& g = Group::test_group_61();
  StreamRng rng(100, 0);
  for (int trial = 0; trial < 200; ++trial) {
    const ValidatorKey key = keygen(g, rng.next_u64());
    const mpz_class r = scalar_from_seed(g, rng.next_u64(), 1);
    CHECK(g.pow(g.pow_g(r), key.k) == g.pow(key.pub, r));

    Bytes fx(8);
    for (auto& b : fx) b = static_cast<std::uint8_t>(rng.next_u64());
    const Threshold256 T = Threshold256::pow2(248 + static_cast<int>(rng.next_u64() % 8));
    const Challenge c = make_challenge(g, kX, fx, r, T);
    CHECK(should_respond(g, key, c, fx) ==
          expected_response(g, r, key.pub, fx, T));
  }
}

TEST_CASE("degenerate thresholds") {
  const Group& g = Group::test_group_61();
  StreamRng rng(101, 0);
  for (int trial = 0; trial < 100; ++trial) {
    const ValidatorKey key = keygen(g, rng.next_u64());
    const mpz_class r = scalar_from_seed(g, rng.next_u64(), 2);
    const Challenge never = make_challenge(g, kX, kFx, r, Threshold256::zero());
    CHECK_FALSE(should_respond(g, key, never, kFx));
    const Challenge always = make_challenge(g, kX, kFx, r, Threshold256::max());
    CHECK(should_respond(g, key, always, kFx));
  }
}

TEST_CASE("response rate tracks T / 2^256") {
  const Group& g = Group::test_group_61();
  StreamRng rng(102, 0);
  const int trials = 20000;
  int responded = 0;
  const Threshold256 T = Threshold256::pow2(255);
  for (int trial = 0; trial < trials; ++trial) {
    const ValidatorKey key = keygen(g, rng.next_u64());
    const mpz_class r = scalar_from_seed(g, rng.next_u64(), 3);
    Bytes fx(8);
    for (auto& b : fx) b = static_cast<std::uint8_t>(rng.next_u64());
    responded += should_respond(g, key, make_challenge(g, kX, fx, r, T), fx);
  }
  const double rate = static_cast<double>(responded) / trials;
  CHECK(std::abs(rate - 0.5) < 3.0 * std::sqrt(0.25 / trials));
}

TEST_CASE("adjudication: honest responders are never slashed") {
  const Group& g = Group::test_group_61();
  StreamRng rng(103, 0);
  for (int trial = 0; trial < 500; ++trial) {
    const ValidatorKey key = keygen(g, rng.next_u64());
    const mpz_class r = scalar_from_seed(g, rng.next_u64(), 4);
    const Threshold256 T = Threshold256::pow2(static_cast<int>(rng.next_u64() % 256));
    const Challenge c = make_challenge(g, kX, kFx, r, T);
    ResponseRecord record{7, should_respond(g, key, c, kFx), 1};
    const Verdict v = adjudicate(g, c, r, record, key.pub, kFx, true, 100.0);
    CHECK_FALSE(v.valid_accusation);
    CHECK(v.seized == 0.0);
  }
}

TEST_CASE("adjudication: a silent validator with an expected response is slashed") {
  const Group& g = Group::test_group_61();
  const ValidatorKey key = keygen(g, 31337);
  const mpz_class r = scalar_from_seed(g, 4242, 0);
  // T = max makes the expected bit true with certainty
  const Challenge c = make_challenge(g, kX, kFx, r, Threshold256::max());
  const ResponseRecord silent{3, false, 1};

  const Verdict v = adjudicate(g, c, r, silent, key.pub, kFx, true, 100.0);
  CHECK(v.valid_accusation);
  CHECK(v.seized == 100.0);
  CHECK(v.to_asserter == 50.0);
  CHECK(v.burned == 50.0);
  CHECK(v.to_asserter + v.burned == v.seized);

  // rejected claim: the same accusation is ignored
  const Verdict ignored = adjudicate(g, c, r, silent, key.pub, kFx, false, 100.0);
  CHECK_FALSE(ignored.valid_accusation);
  CHECK(ignored.seized == 0.0);
}

TEST_CASE("adjudication: odd stakes in integer-unit mode") {
  const Group& g = Group::test_group_61();
  const ValidatorKey key = keygen(g, 5150);
  const mpz_class r = scalar_from_seed(g, 77, 0);
  const Challenge c = make_challenge(g, kX, kFx, r, Threshold256::max());
  const ResponseRecord silent{3, false, 1};
  const Verdict v = adjudicate(g, c, r, silent, key.pub, kFx, true, 101.0, true);
  CHECK(v.seized == 101.0);
  CHECK(v.to_asserter == 50.0);  // floor of half
  CHECK(v.burned == 51.0);
}

TEST_CASE("adjudication rejects malformed evidence") {
  const Group& g = Group::test_group_61();
  const ValidatorKey key = keygen(g, 11);
  const mpz_class r = scalar_from_seed(g, 22, 0);
  const Challenge c = make_challenge(g, kX, kFx, r, Threshold256::pow2(255));
  const ResponseRecord record{1, true, 1};

  CHECK_THROWS_AS(adjudicate(g, c, r + 1, record, key.pub, kFx, true, 100.0),
                  ProtocolError);
  try {
    adjudicate(g, c, r + 1, record, key.pub, kFx, true, 100.0);
  } catch (const ProtocolError& e) {
    CHECK(e.code() == ProtocolError::Code::kMalformedAccusation);
  }
  try {
    adjudicate(g, c, r, record, key.pub, kWrongFx, true, 100.0);
  } catch (const ProtocolError& e) {
    CHECK(e.code() == ProtocolError::Code::kCommitmentMismatch);
  }
}

TEST_CASE("protocol round: honest validators are never seized") {
  const Group& g = Group::test_group_61();
  RoundInputs inputs;
  inputs.x = kX;
  inputs.true_fx = kFx;
  inputs.claimed_fx = kFx;
  inputs.T = Threshold256::pow2(255);
  inputs.stake = 100.0;
  inputs.seed = 2024;

  std::vector<RoundValidator> validators;
  for (int i = 0; i < 5; ++i) {
    validators.push_back({static_cast<std::uint64_t>(i + 1), keygen(g, 500 + i),
                          ValidatorBehavior::kHonest});
  }
  const Transcript t = run_protocol_round(g, inputs, validators);
  CHECK(t.claim_confirmed);
  REQUIRE(t.verdicts.size() == 5);
  for (const Verdict& v : t.verdicts) {
    CHECK_FALSE(v.valid_accusation);
    CHECK(v.seized == 0.0);
  }
  // transcript is ordered by validator id
  for (std::size_t i = 1; i < t.responses.size(); ++i) {
    CHECK(t.responses[i].validator_id > t.responses[i - 1].validator_id);
  }
}

TEST_CASE("protocol round: a skipping validator is seized iff expected") {
  const Group& g = Group::test_group_61();
  RoundInputs inputs;
  inputs.x = kX;
  inputs.true_fx = kFx;
  inputs.claimed_fx = kFx;
  inputs.stake = 60.0;

  int seized_rounds = 0;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    inputs.seed = seed;
    inputs.T = Threshold256::pow2(255);
    std::vector<RoundValidator> validators{
        {1, keygen(g, 900 + seed), ValidatorBehavior::kSkipCheck}};
    const Transcript t = run_protocol_round(g, inputs, validators);
    const bool expected = expected_response(g, t.revealed_r,
                                            validators[0].key.pub,
                                            inputs.claimed_fx, inputs.T);
    CHECK(t.verdicts[0].valid_accusation == expected);
    if (expected) {
      CHECK(t.verdicts[0].seized == 60.0);
      CHECK(t.verdicts[0].to_asserter == 30.0);
      CHECK(t.verdicts[0].burned == 30.0);
      ++seized_rounds;
    }
  }
  CHECK(seized_rounds > 5);  // T = 2^255: roughly half the rounds
  CHECK(seized_rounds < 35);
}

TEST_CASE("protocol round: a lying asserter cannot slash anyone") {
  const Group& g = Group::test_group_61();
  RoundInputs inputs;
  inputs.x = kX;
  inputs.true_fx = kFx;
  inputs.claimed_fx = kWrongFx;  // rejected on-chain
  inputs.T = Threshold256::max();
  inputs.stake = 100.0;
  inputs.seed = 5;

  std::vector<RoundValidator> validators{
      {1, keygen(g, 1), ValidatorBehavior::kHonest},
      {2, keygen(g, 2), ValidatorBehavior::kSkipCheck}};
  const Transcript t = run_protocol_round(g, inputs, validators);
  CHECK_FALSE(t.claim_confirmed);
  for (const Verdict& v : t.verdicts) {
    CHECK_FALSE(v.valid_accusation);
    CHECK(v.seized == 0.0);
  }
}

TEST_CASE("protocol round: transcripts replay deterministically") {
  const Group& g = Group::test_group_61();
  RoundInputs inputs;
  inputs.x = kX;
  inputs.true_fx = kFx;
  inputs.claimed_fx = kFx;
  inputs.T = Threshold256::pow2(254);
  inputs.stake = 10.0;
  inputs.seed = 321;

  std::vector<RoundValidator> validators{
      {2, keygen(g, 10), ValidatorBehavior::kHonest},
      {1, keygen(g, 11), ValidatorBehavior::kWrongResult},
      {3, keygen(g, 12), ValidatorBehavior::kSkipCheck}};
  const std::string a = transcript_to_json(g, run_protocol_round(g, inputs, validators));
  const std::string b = transcript_to_json(g, run_protocol_round(g, inputs, validators));
  CHECK(a == b);

  std::vector<RoundValidator> dup{{1, keygen(g, 10)}, {1, keygen(g, 11)}};
  CHECK_THROWS_AS(run_protocol_round(g, inputs, dup), std::invalid_argument);
}

TEST_CASE("seizure arithmetic is conserved across random rounds") {
  const Group& g = Group::test_group_61();
  StreamRng rng(104, 0);
  for (int round = 0; round < 200; ++round) {
    RoundInputs inputs;
    inputs.x = kX;
    inputs.true_fx = kFx;
    inputs.claimed_fx = kFx;
    inputs.T = Threshold256::pow2(250 + static_cast<int>(rng.next_u64() % 6));
    inputs.stake = 1.0 + rng.next_double() * 100.0;
    inputs.seed = rng.next_u64();
    std::vector<RoundValidator> validators{
        {1, keygen(g, rng.next_u64()),
         rng.bernoulli(0.5) ? ValidatorBehavior::kHonest
                            : ValidatorBehavior::kSkipCheck}};
    const Transcript t = run_protocol_round(g, inputs, validators);
    for (const Verdict& v : t.verdicts) {
      CHECK(v.to_asserter + v.burned == v.seized);
      if (v.seized > 0.0) CHECK(v.to_asserter == v.seized / 2.0);
    }
  }
}
