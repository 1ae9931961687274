#pragma once

#include <stdexcept>
#include <string>

namespace sepnet {

// Base for every error raised by the library. The CLI maps subclasses onto
// exit codes: input-side errors are 2, construction failures are 3.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A value outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Dimension mismatch between networks, points or maps.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// Operation not defined for the given inputs (mixed depths, ...).
class Unsupported : public Error {
 public:
  using Error::Error;
};

// Activation kind not supported by the requested operation.
class UnsupportedActivation : public Unsupported {
 public:
  using Unsupported::Unsupported;
};

// A construction would exceed two hidden layers.
class DepthBudgetError : public Error {
 public:
  using Error::Error;
};

// Invalid combination of options (scheme vs dimension, budgets, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Malformed document or CSV. The message carries the location.
class ParseError : public Error {
 public:
  using Error::Error;
};

// Input clouds violate a precondition (overlap, conflicting labels, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// Adaptive construction or iteration budget exhausted.
class ConstructionError : public Error {
 public:
  using Error::Error;
};

}  // namespace sepnet
