#pragma once

#include <stdexcept>
#include <string>

namespace pptfarm {

// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A parameter is outside its admissible range (n < 2, q outside [0,1], ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// A multi-index component is outside its factor dimension.
class InvalidIndexError : public Error {
 public:
  using Error::Error;
};

// Shapes, spaces, or block orders do not fit together.
class StructureError : public Error {
 public:
  using Error::Error;
};

// The request would materialize a dense matrix above the supported order.
class CapacityError : public Error {
 public:
  using Error::Error;
};

// Non-finite data or a decomposition that failed to converge.
class NumericError : public Error {
 public:
  using Error::Error;
};

// File or serialization failure.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace pptfarm
