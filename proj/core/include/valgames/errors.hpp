#pragma once

#include <stdexcept>
#include <string>

namespace valgames {

// Thrown when game parameters violate a model invariant. what() is a
// one-line diagnostic naming the invariant, suitable for CLI output.
class ValidationError : public std::invalid_argument {
 public:
  enum class Code {
    kDominantStrategy,  // C >= R + L
    kNonPositive,       // C <= 0 or U <= 0
    kBadCounts,         // t > n, n < 1, or negative counts
    kBadSlash,          // s_w outside [0, L]
    kBadRange,          // malformed numeric range or bounds
  };

  ValidationError(Code code, const std::string& what)
      : std::invalid_argument(what), code_(code) {}

  Code code() const noexcept { return code_; }

 private:
  Code code_;
};

// Thrown when a solver cannot produce the requested equilibrium.
class SolveError : public std::runtime_error {
 public:
  enum class Code {
    kNoConvergence,
    kNoTotallyMixedEquilibrium,
  };

  SolveError(Code code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  Code code() const noexcept { return code_; }

 private:
  Code code_;
};

// Thrown by attention-challenge adjudication on malformed evidence.
class ProtocolError : public std::runtime_error {
 public:
  enum class Code {
    kMalformedAccusation,  // revealed r does not reproduce g^r
    kCommitmentMismatch,   // confirmed f(x) does not match the commitment
  };

  ProtocolError(Code code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  Code code() const noexcept { return code_; }

 private:
  Code code_;
};

}  // namespace valgames
