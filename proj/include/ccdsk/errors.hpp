#pragma once

#include <stdexcept>
#include <string>

namespace ccdsk {

// Each error class maps to one CLI exit code (see cli.hpp).

/// Malformed input: bad files, invalid parameters, broken preconditions.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An exhaustive routine was asked to run beyond its documented size guard.
class SizeGuardError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The instance cannot generate the requested number of keys.
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Randomized coefficient search did not produce a verified protocol.
class SynthesisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A protocol failed a decodability, secrecy or uniformity check.
class VerificationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ccdsk
