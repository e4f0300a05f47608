// Exception types shared across the library.
#pragma once

#include <stdexcept>
#include <string>

namespace cake {

// Base class for all library errors so callers can catch them in one place.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed input (JSON, rational literals, mechanism names).
struct ParseError : Error {
  using Error::Error;
};

// A density integrates to zero where a positive total is required.
struct ZeroTotalValue : Error {
  using Error::Error;
};

// cut() asked for more value than remains to the right of the start point.
struct RequestExceedsRemaining : Error {
  using Error::Error;
};

// Profile size does not match the allocation or mechanism arity.
struct AgentCountMismatch : Error {
  using Error::Error;
};

// Opponent tuples whose arity disagrees with the scenario.
struct ProfileMismatch : Error {
  using Error::Error;
};

// Counterexample parameter outside its documented range.
struct EpsOutOfRange : Error {
  using Error::Error;
};

// Epsilon too large for a construction (breakpoint window or gadget bound).
struct EpsTooLarge : Error {
  using Error::Error;
};

// Brute-force search over an empty candidate set.
struct SearchSpaceEmpty : Error {
  using Error::Error;
};

// Gadget instance requested before the driver filled the needed pieces.
struct StateIncomplete : Error {
  using Error::Error;
};

// External mechanism spoke the line protocol incorrectly.
struct ProtocolError : Error {
  using Error::Error;
};

}  // namespace cake
