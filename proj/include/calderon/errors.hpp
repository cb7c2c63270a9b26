#pragma once

#include <stdexcept>
#include <string>

namespace calderon {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parameter lies outside the domain of a chart or operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Invalid configuration or operator parameter (e.g. a non-positive weight).
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// The geometry is too large for the log-kernel single layer operator to be
/// coercive, or an assembled operator failed the positive definiteness check.
class CoercivityError : public Error {
 public:
  using Error::Error;
};

/// Cholesky factorization met a non-positive pivot.
class FactorizationError : public Error {
 public:
  using Error::Error;
};

/// Damped Richardson iteration would not contract.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

/// The local bubble space cannot satisfy the biorthogonality constraints.
class EnrichmentError : public Error {
 public:
  using Error::Error;
};

}  // namespace calderon
