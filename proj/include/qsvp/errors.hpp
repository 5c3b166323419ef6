#pragma once

// Error taxonomy shared across the library.  The CLI maps these onto its
// exit codes: input errors -> 2, resource/capacity limits -> 3, verification
// failures -> 4.

#include <stdexcept>
#include <string>

namespace qsvp {

// A requested computation exceeds a configured resource cap (simulation
// width, enumeration volume, materialized gate count, ...).
struct CapacityError : std::runtime_error {
  explicit CapacityError(const std::string& msg) : std::runtime_error(msg) {}
};

// A width plan cannot represent every intermediate value without overflow.
struct PlanError : std::runtime_error {
  explicit PlanError(const std::string& msg) : std::runtime_error(msg) {}
};

// A checked property (oracle truth table, ancilla restoration, ...) failed.
struct VerificationError : std::runtime_error {
  explicit VerificationError(const std::string& msg)
      : std::runtime_error(msg) {}
};

}  // namespace qsvp
