#pragma once

#include <stdexcept>
#include <string>

namespace brt {

// Base for every error raised by the library. The message is the stable,
// user-facing text (CLI prints it verbatim).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad caller input: empty samples, arity mismatch, invalid configuration.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Malformed CSV or raw-series input.
class DataError : public Error {
 public:
  using Error::Error;
};

// Model document could not be read.
class ModelParseError : public Error {
 public:
  using Error::Error;
};

// Analytics precondition not met (no splits, zero prediction variance).
class DegenerateModel : public Error {
 public:
  using Error::Error;
};

}  // namespace brt
