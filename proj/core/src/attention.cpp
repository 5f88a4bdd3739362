#include "valgames/attention.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <stdexcept>

#include <openssl/evp.h>

#include "json.hpp"
#include "valgames/rng.hpp"

namespace valgames::attention {

namespace {

constexpr std::uint8_t kHashLayoutVersion = 0x01;

const char* kModp2048Hex =
    "FFFFFFFFFFFFFFFFC90FDAA22168C234C4C6628B80DC1CD129024E088A67CC74"
    "020BBEA63B139B22514A08798E3404DDEF9519B3CD3A431B302B0A6DF25F1437"
    "4FE1356D6D51C245E485B576625E7EC6F44C42E9A637ED6B0BFF5CB6F406B7ED"
    "EE386BFB5A899FA5AE9F24117C4B1FE649286651ECE45B3DC2007CB8A163BF05"
    "98DA48361C55D39A69163FA8FD24CF5F83655D23DCA3AD961C62F356208552BB"
    "9ED529077096966D670C354E4ABC9804F1746C08CA18217C32905E462E36CE3B"
    "E39E772C180E86039B2783A2EC07A28FB5C55DF06F4C52C9DE2BCBF695581718"
    "3995497CEA956AE515D2261898FA051015728E5A8AACAA68FFFFFFFFFFFFFFFF";

int hex_nibble(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  throw std::invalid_argument("invalid hex digit");
}

Bytes bytes_from_hex(const std::string& s) {
  if (s.size() % 2 != 0) throw std::invalid_argument("odd-length hex string");
  Bytes out(s.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = static_cast<std::uint8_t>(hex_nibble(s[2 * i]) * 16 +
                                       hex_nibble(s[2 * i + 1]));
  }
  return out;
}

std::string hex_of(const std::uint8_t* data, std::size_t size) {
  static const char* digits = "0123456789abcdef";
  std::string out;
  out.reserve(size * 2);
  for (std::size_t i = 0; i < size; ++i) {
    out.push_back(digits[data[i] >> 4]);
    out.push_back(digits[data[i] & 0x0F]);
  }
  return out;
}

mpz_class mpz_from_hex(const std::string& s) {
  mpz_class v;
  if (mpz_set_str(v.get_mpz_t(), s.c_str(), 16) != 0) {
    throw std::invalid_argument("invalid hex integer");
  }
  return v;
}

Digest sha256(const Bytes& data) {
  Digest digest{};
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest.data(), &len, EVP_sha256(),
                 nullptr) != 1 ||
      len != digest.size()) {
    throw std::runtime_error("SHA-256 failed");
  }
  return digest;
}

void append_be32(Bytes& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 24));
  out.push_back(static_cast<std::uint8_t>(v >> 16));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

Bytes wrong_result_of(const Bytes& fx) {
  Bytes wrong = fx;
  if (wrong.empty()) wrong.push_back(0);
  for (auto& b : wrong) b = static_cast<std::uint8_t>(~b);
  return wrong;
}

}  // namespace

std::string hex(const Bytes& bytes) { return hex_of(bytes.data(), bytes.size()); }
std::string hex(const Digest& digest) {
  return hex_of(digest.data(), digest.size());
}

Digest hash_fields(const std::vector<Bytes>& fields) {
  Bytes buffer;
  std::size_t total = 1;
  for (const Bytes& f : fields) total += 4 + f.size();
  buffer.reserve(total);
  buffer.push_back(kHashLayoutVersion);
  for (const Bytes& f : fields) {
    if (f.size() > 0xFFFFFFFFull) throw std::invalid_argument("field too long");
    append_be32(buffer, static_cast<std::uint32_t>(f.size()));
    buffer.insert(buffer.end(), f.begin(), f.end());
  }
  return sha256(buffer);
}

Threshold256 Threshold256::zero() { return {}; }

Threshold256 Threshold256::max() {
  Threshold256 t;
  t.be.fill(0xFF);
  return t;
}

Threshold256 Threshold256::pow2(int bits) {
  if (bits < 0 || bits > 255) {
    throw std::invalid_argument("threshold bits must be in [0, 255]");
  }
  Threshold256 t;
  t.be[static_cast<std::size_t>(31 - bits / 8)] =
      static_cast<std::uint8_t>(1u << (bits % 8));
  return t;
}

Threshold256 Threshold256::from_hex(const std::string& hex_text) {
  const Bytes raw = bytes_from_hex(hex_text);
  if (raw.size() > 32) throw std::invalid_argument("threshold wider than 256 bits");
  Threshold256 t;
  std::copy(raw.begin(), raw.end(), t.be.begin() + (32 - raw.size()));
  return t;
}

double Threshold256::fraction() const {
  double f = 0.0;
  for (int i = 31; i >= 0; --i) {
    f = (f + be[static_cast<std::size_t>(i)]) / 256.0;
  }
  return f;
}

std::string Threshold256::to_hex() const { return hex_of(be.data(), be.size()); }

bool digest_below(const Digest& digest, const Threshold256& threshold) {
  return std::memcmp(digest.data(), threshold.be.data(), digest.size()) < 0;
}

Group::Group(mpz_class p, mpz_class q, mpz_class g)
    : p_(std::move(p)), q_(std::move(q)), g_(std::move(g)) {
  if (p_ < 5 || q_ < 2 || g_ <= 1 || g_ >= p_) {
    throw std::invalid_argument("group: need p >= 5, q >= 2, 1 < g < p");
  }
  if (p_ != 2 * q_ + 1) {
    throw std::invalid_argument("group: p = 2q + 1 required");
  }
  if (mpz_probab_prime_p(p_.get_mpz_t(), 25) == 0) {
    throw std::invalid_argument("group: p must be prime");
  }
  if (mpz_probab_prime_p(q_.get_mpz_t(), 25) == 0) {
    throw std::invalid_argument("group: q must be prime");
  }
  mpz_class check;
  mpz_powm(check.get_mpz_t(), g_.get_mpz_t(), q_.get_mpz_t(), p_.get_mpz_t());
  if (check != 1) {
    throw std::invalid_argument("group: g must generate the order-q subgroup");
  }
  element_bytes_ = (mpz_sizeinbase(p_.get_mpz_t(), 2) + 7) / 8;
}

const Group& Group::test_group_61() {
  static const Group group(mpz_class("2305843009213699919"),
                           mpz_class("1152921504606849959"), mpz_class(4));
  return group;
}

const Group& Group::modp2048() {
  static const Group group = [] {
    const mpz_class p = mpz_from_hex(kModp2048Hex);
    return Group(p, (p - 1) / 2, mpz_class(4));
  }();
  return group;
}

mpz_class Group::pow(const mpz_class& base, const mpz_class& exponent) const {
  mpz_class out;
  mpz_powm(out.get_mpz_t(), base.get_mpz_t(), exponent.get_mpz_t(),
           p_.get_mpz_t());
  return out;
}

Bytes Group::serialize(const mpz_class& element) const {
  if (element < 0 || element >= p_) {
    throw std::invalid_argument("element outside [0, p)");
  }
  Bytes out(element_bytes_, 0);
  std::size_t count = 0;
  mpz_export(out.data(), &count, 1, 1, 1, 0, element.get_mpz_t());
  // mpz_export writes the minimal prefix; right-align it.
  if (count > 0 && count < element_bytes_) {
    std::move_backward(out.begin(), out.begin() + count, out.end());
    std::fill(out.begin(), out.begin() + (element_bytes_ - count), 0);
  }
  return out;
}

mpz_class scalar_from_seed(const Group& group, std::uint64_t seed,
                           std::uint64_t stream) {
  StreamRng rng(seed, stream);
  const std::size_t bits = mpz_sizeinbase(group.q().get_mpz_t(), 2);
  const std::size_t words = bits / 64 + 2;  // extra word keeps mod bias negligible
  mpz_class z = 0;
  for (std::size_t i = 0; i < words; ++i) {
    mpz_mul_2exp(z.get_mpz_t(), z.get_mpz_t(), 64);
    const std::uint64_t w = rng.next_u64();
    mpz_class word;
    mpz_import(word.get_mpz_t(), 1, 1, sizeof w, 0, 0, &w);
    z |= word;
  }
  mpz_class k = z % (group.q() - 1);
  return k + 1;  // uniform-ish in [1, q)
}

ValidatorKey keygen(const Group& group, std::uint64_t seed) {
  ValidatorKey key;
  key.k = scalar_from_seed(group, seed, 0);
  key.pub = group.pow_g(key.k);
  return key;
}

Challenge make_challenge(const Group& group, const Bytes& x, const Bytes& fx,
                         const mpz_class& r, const Threshold256& T) {
  if (!group.valid_scalar(r)) {
    throw std::invalid_argument("challenge scalar r outside [1, q)");
  }
  Challenge challenge;
  challenge.x = x;
  challenge.gr = group.pow_g(r);
  challenge.commitment = hash_fields({x, group.serialize(challenge.gr), fx});
  challenge.T = T;
  return challenge;
}

std::string challenge_to_json(const Group& group, const Challenge& challenge) {
  nlohmann::json j;
  j["x"] = hex(challenge.x);
  j["gr"] = hex(group.serialize(challenge.gr));
  j["commitment"] = hex(challenge.commitment);
  j["T"] = challenge.T.to_hex();
  return j.dump();
}

Challenge challenge_from_json(const std::string& json_text) {
  const auto j = nlohmann::json::parse(json_text);
  Challenge challenge;
  challenge.x = bytes_from_hex(j.at("x").get<std::string>());
  challenge.gr = mpz_from_hex(j.at("gr").get<std::string>());
  const Bytes commitment = bytes_from_hex(j.at("commitment").get<std::string>());
  if (commitment.size() != challenge.commitment.size()) {
    throw std::invalid_argument("commitment must be 32 bytes");
  }
  std::copy(commitment.begin(), commitment.end(), challenge.commitment.begin());
  challenge.T = Threshold256::from_hex(j.at("T").get<std::string>());
  return challenge;
}

bool should_respond(const Group& group, const ValidatorKey& key,
                    const Challenge& challenge, const Bytes& fx_local) {
  const mpz_class shared = group.pow(challenge.gr, key.k);
  const Digest digest = hash_fields({group.serialize(shared), fx_local});
  return digest_below(digest, challenge.T);
}

bool expected_response(const Group& group, const mpz_class& r,
                       const mpz_class& validator_pub, const Bytes& fx,
                       const Threshold256& T) {
  const mpz_class shared = group.pow(validator_pub, r);
  const Digest digest = hash_fields({group.serialize(shared), fx});
  return digest_below(digest, T);
}

Verdict adjudicate(const Group& group, const Challenge& challenge,
                   const mpz_class& revealed_r, const ResponseRecord& record,
                   const mpz_class& validator_pub, const Bytes& confirmed_fx,
                   bool asserter_claim_confirmed, double stake,
                   bool integer_units) {
  if (!group.valid_scalar(revealed_r) ||
      group.pow_g(revealed_r) != challenge.gr) {
    throw ProtocolError(ProtocolError::Code::kMalformedAccusation,
                        "revealed r does not reproduce the challenge g^r");
  }
  if (hash_fields({challenge.x, group.serialize(challenge.gr), confirmed_fx}) !=
      challenge.commitment) {
    throw ProtocolError(ProtocolError::Code::kCommitmentMismatch,
                        "confirmed f(x) does not match the commitment");
  }
  Verdict verdict;
  verdict.accused = record.validator_id;
  if (!asserter_claim_confirmed) {
    return verdict;  // rejected claim: the accusation is ignored
  }
  const bool expected = expected_response(group, revealed_r, validator_pub,
                                          confirmed_fx, challenge.T);
  verdict.valid_accusation = record.responded != expected;
  if (verdict.valid_accusation) {
    verdict.seized = stake;
    verdict.to_asserter = integer_units ? std::floor(stake / 2.0) : stake / 2.0;
    verdict.burned = verdict.seized - verdict.to_asserter;
  }
  return verdict;
}

Transcript run_protocol_round(const Group& group, const RoundInputs& inputs,
                              std::vector<RoundValidator> validators) {
  std::sort(validators.begin(), validators.end(),
            [](const RoundValidator& a, const RoundValidator& b) {
              return a.id < b.id;
            });
  for (std::size_t i = 1; i < validators.size(); ++i) {
    if (validators[i].id == validators[i - 1].id) {
      throw std::invalid_argument("validator ids must be distinct");
    }
  }

  Transcript transcript;
  transcript.revealed_r = scalar_from_seed(group, inputs.seed, 0);
  transcript.challenge = make_challenge(group, inputs.x, inputs.claimed_fx,
                                        transcript.revealed_r, inputs.T);
  transcript.claim_confirmed = inputs.claimed_fx == inputs.true_fx;

  for (const RoundValidator& v : validators) {
    ResponseRecord record;
    record.validator_id = v.id;
    record.window_id = inputs.window_id;
    switch (v.behavior) {
      case ValidatorBehavior::kHonest:
        record.responded =
            should_respond(group, v.key, transcript.challenge, inputs.true_fx);
        break;
      case ValidatorBehavior::kSkipCheck:
        record.responded = false;  // cannot evaluate the predicate
        break;
      case ValidatorBehavior::kWrongResult:
        record.responded = should_respond(group, v.key, transcript.challenge,
                                          wrong_result_of(inputs.true_fx));
        break;
    }
    transcript.responses.push_back(record);
  }

  for (std::size_t i = 0; i < validators.size(); ++i) {
    transcript.verdicts.push_back(adjudicate(
        group, transcript.challenge, transcript.revealed_r,
        transcript.responses[i], validators[i].key.pub, inputs.claimed_fx,
        transcript.claim_confirmed, inputs.stake));
  }
  return transcript;
}

std::string transcript_to_json(const Group& group, const Transcript& transcript) {
  nlohmann::json j;
  j["challenge"] =
      nlohmann::json::parse(challenge_to_json(group, transcript.challenge));
  j["responses"] = nlohmann::json::array();
  for (const ResponseRecord& r : transcript.responses) {
    j["responses"].push_back({{"validator_id", r.validator_id},
                              {"responded", r.responded},
                              {"window_id", r.window_id}});
  }
  j["revealed_r"] = transcript.revealed_r.get_str(16);
  j["claim_confirmed"] = transcript.claim_confirmed;
  j["verdicts"] = nlohmann::json::array();
  for (const Verdict& v : transcript.verdicts) {
    j["verdicts"].push_back({{"accused", v.accused},
                             {"valid_accusation", v.valid_accusation},
                             {"seized", v.seized},
                             {"to_asserter", v.to_asserter},
                             {"burned", v.burned}});
  }
  return j.dump(2);
}

}  // namespace valgames::attention
