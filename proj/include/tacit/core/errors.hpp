#pragma once

#include <stdexcept>
#include <string>

namespace tacit {

// Bad input: unknown task, malformed document, out-of-range parameter.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Filesystem problems: missing files, unwritable directories.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A generator could not satisfy its postconditions for this seed; the
// caller retries with a derived seed.
class GenerationRetry : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A release build gate failed (solution rejected, distractor accepted, ...).
class GateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace tacit
