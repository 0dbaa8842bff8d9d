#pragma once

#include <stdexcept>
#include <string>

namespace qdstcon {

// Bad user input: malformed files, parameters outside a documented domain.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A structural invariant failed at runtime. Indicates a bug, not bad input.
struct InvariantViolation : std::logic_error {
  using std::logic_error::logic_error;
};

struct GraphFormatError : InputError { using InputError::InputError; };
struct BadPath : InputError { using InputError::InputError; };
struct CapExceeded : InputError { using InputError::InputError; };
struct Disconnected : InputError { using InputError::InputError; };
struct ZeroZ : InputError { using InputError::InputError; };
struct NegativePrefix : InputError { using InputError::InputError; };
struct InvalidParams : InputError { using InputError::InputError; };
struct DomainError : InputError { using InputError::InputError; };
struct ConfigError : InputError { using InputError::InputError; };

struct IllegalMove : InvariantViolation { using InvariantViolation::InvariantViolation; };
struct RankDeficient : InvariantViolation { using InvariantViolation::InvariantViolation; };
struct BasisMismatch : InvariantViolation { using InvariantViolation::InvariantViolation; };

}  // namespace qdstcon
