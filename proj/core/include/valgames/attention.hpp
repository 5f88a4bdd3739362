#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "valgames/errors.hpp"

// Desk-scale attention-challenge protocol. An asserter claiming f(x)
// publishes (x, g^r, H(x, g^r, f(x))); a validator holding key k must post a
// response iff H(g^{rk}, f(x)) < T. Only the two Diffie-Hellman parties can
// evaluate the predicate, and evaluating it requires knowing f(x), so a
// correct response stream proves attention. The on-chain contract's checks
// are simulated in-process; f(x) itself is an opaque byte string supplied by
// the caller.
namespace valgames::attention {

using Bytes = std::vector<std::uint8_t>;
using Digest = std::array<std::uint8_t, 32>;  // SHA-256 output, big-endian

std::string hex(const Bytes& bytes);
std::string hex(const Digest& digest);

// All protocol hashes use a versioned, unambiguous byte layout:
//   SHA-256( 0x01 || be32(len(f1)) || f1 || be32(len(f2)) || f2 || ... )
Digest hash_fields(const std::vector<Bytes>& fields);

// 256-bit response threshold, compared against digests as big-endian
// unsigned integers.
struct Threshold256 {
  std::array<std::uint8_t, 32> be{};

  static Threshold256 zero();           // nobody ever responds
  static Threshold256 max();            // 2^256 - 1: responds ~always
  static Threshold256 pow2(int bits);   // 2^bits, 0 <= bits <= 255
  static Threshold256 from_hex(const std::string& hex);

  double fraction() const;  // T / 2^256, the expected response rate
  std::string to_hex() const;
  friend bool operator==(const Threshold256&, const Threshold256&) = default;
};

bool digest_below(const Digest& digest, const Threshold256& threshold);

// Prime-order subgroup of Z_p^*: p = 2q + 1 a safe prime, g a generator of
// the order-q subgroup of quadratic residues. Exponents live in [1, q).
class Group {
 public:
  // 62-bit safe prime; fast enough for exhaustive-style tests. The discrete
  // log is easy at this size — test use only.
  static const Group& test_group_61();

  // RFC 3526 2048-bit MODP modulus with generator 4 (a quadratic residue,
  // hence of prime order q). Realistic hardness; the default for demos.
  static const Group& modp2048();

  Group(mpz_class p, mpz_class q, mpz_class g);  // validates the structure

  const mpz_class& p() const { return p_; }
  const mpz_class& q() const { return q_; }
  const mpz_class& g() const { return g_; }

  mpz_class pow(const mpz_class& base, const mpz_class& exponent) const;
  mpz_class pow_g(const mpz_class& exponent) const { return pow(g_, exponent); }

  bool valid_scalar(const mpz_class& s) const { return s >= 1 && s < q_; }

  // Fixed-width big-endian encoding of a group element (width = byte length
  // of p), used by every hash and by the wire format.
  std::size_t element_bytes() const { return element_bytes_; }
  Bytes serialize(const mpz_class& element) const;

 private:
  mpz_class p_, q_, g_;
  std::size_t element_bytes_ = 0;
};

struct ValidatorKey {
  mpz_class k;    // secret scalar in [1, q)
  mpz_class pub;  // g^k
};

// Deterministic for a fixed seed; distinct seeds give independent keys.
ValidatorKey keygen(const Group& group, std::uint64_t seed);

// Uniform-ish scalar in [1, q) from a seeded stream (negligible mod bias).
mpz_class scalar_from_seed(const Group& group, std::uint64_t seed,
                           std::uint64_t stream);

struct Challenge {
  Bytes x;            // the input whose f(x) is being claimed
  mpz_class gr;       // g^r, the asserter's ephemeral public value
  Digest commitment;  // H(x, g^r, f(x)); binds f(x) before any reveal
  Threshold256 T;
};

// Builds the challenge for claimed result fx. fx itself is NOT part of the
// published challenge — only its commitment.
Challenge make_challenge(const Group& group, const Bytes& x, const Bytes& fx,
                         const mpz_class& r, const Threshold256& T);

std::string challenge_to_json(const Group& group, const Challenge& challenge);
Challenge challenge_from_json(const std::string& json_text);

// Validator-side predicate: respond iff H(g^{rk}, fx_local) < T, where
// fx_local is the validator's own computed result.
bool should_respond(const Group& group, const ValidatorKey& key,
                    const Challenge& challenge, const Bytes& fx_local);

// Asserter-side view of the correct response bit for a validator public key;
// equals should_respond whenever fx_local = fx (Diffie-Hellman symmetry).
bool expected_response(const Group& group, const mpz_class& r,
                       const mpz_class& validator_pub, const Bytes& fx,
                       const Threshold256& T);

struct ResponseRecord {
  std::uint64_t validator_id = 0;
  bool responded = false;
  std::uint64_t window_id = 0;
};

struct Verdict {
  std::uint64_t accused = 0;
  bool valid_accusation = false;
  double seized = 0.0;
  double to_asserter = 0.0;  // seized/2 (floor in integer-unit mode)
  double burned = 0.0;       // seized - to_asserter
};

// Settles one accusation. Preconditions: g^revealed_r must reproduce the
// challenge's g^r (else kMalformedAccusation) and confirmed_fx must match
// the commitment (else kCommitmentMismatch). If the asserter's claim was not
// confirmed the accusation is ignored. Otherwise the validator is slashed
// iff its recorded response differs from the expected bit; half the seized
// stake goes to the asserter and the rest is burned.
Verdict adjudicate(const Group& group, const Challenge& challenge,
                   const mpz_class& revealed_r, const ResponseRecord& record,
                   const mpz_class& validator_pub, const Bytes& confirmed_fx,
                   bool asserter_claim_confirmed, double stake,
                   bool integer_units = false);

enum class ValidatorBehavior {
  kHonest,       // computes f(x) and follows the predicate
  kSkipCheck,    // never computes, never responds
  kWrongResult,  // computes a wrong f(x) and follows the predicate on it
};

struct RoundValidator {
  std::uint64_t id = 0;
  ValidatorKey key;
  ValidatorBehavior behavior = ValidatorBehavior::kHonest;
};

struct RoundInputs {
  Bytes x;
  Bytes true_fx;     // what honest computation yields
  Bytes claimed_fx;  // what the asserter commits to
  Threshold256 T;
  std::uint64_t window_id = 0;
  double stake = 0.0;
  std::uint64_t seed = 0;  // drives r; the transcript replays from it
};

struct Transcript {
  Challenge challenge;
  std::vector<ResponseRecord> responses;  // validator id ascending
  mpz_class revealed_r;
  bool claim_confirmed = false;
  std::vector<Verdict> verdicts;  // one per validator, same order
};

// One full round: challenge, response window, reveal, adjudication of every
// validator. Validator ids must be distinct. Deterministic given the seed.
Transcript run_protocol_round(const Group& group, const RoundInputs& inputs,
                              std::vector<RoundValidator> validators);

std::string transcript_to_json(const Group& group, const Transcript& transcript);

}  // namespace valgames::attention
