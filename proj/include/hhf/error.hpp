#pragma once

#include <stdexcept>
#include <string>

namespace hhf {

// Base for every failure the library reports. Subclasses let callers (the
// CLI in particular) map failures onto distinct exit statuses.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

// The generator sum c is (numerically) zero, so u cannot be identified from
// row sums of Y.
class Unrecoverable : public Error {
 public:
  using Error::Error;
};

// Y carries no signal at all (all-zero data makes theta_hat = 0).
class DegenerateInput : public Error {
 public:
  using Error::Error;
};

// Exact recovery needs two distinct nonzero columns.
class NeedsDistinctColumns : public Error {
 public:
  using Error::Error;
};

// Exhaustive search refused because 2^n guesses exceeds the configured cap.
class ResourceLimit : public Error {
 public:
  using Error::Error;
};

class SamplingFailure : public Error {
 public:
  using Error::Error;
};

// Unreadable, unwritable or malformed files.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace hhf
