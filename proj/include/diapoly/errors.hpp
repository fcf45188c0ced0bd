#pragma once

#include <stdexcept>
#include <string>

namespace diapoly {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Vector or matrix lengths disagree with the model they are used against.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// An exhaustive routine was asked to run past its configured size cap.
class CapExceededError : public Error {
 public:
  using Error::Error;
};

/// The model has no feasible 0/1 point where one is required.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

/// Malformed input text (model, instance, inequality or rational literal).
class ParseError : public Error {
 public:
  using Error::Error;
};

/// A vector handed to a decoder does not encode a valid permutation or tour.
class EncodingError : public Error {
 public:
  using Error::Error;
};

}  // namespace diapoly
