#pragma once

#include <stdexcept>
#include <string>

namespace geninv {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Two subspaces that were required to form a direct sum do not.
class ComplementError : public Error {
 public:
  using Error::Error;
};

/// A perturbed operator lies outside the admissible ball around the base.
class NeighborhoodError : public Error {
 public:
  using Error::Error;
};

/// A matrix claimed to be a generalized inverse fails the defining equations.
class NotAGenInverse : public Error {
 public:
  using Error::Error;
};

/// Newton iteration did not reach the requested tolerance.
class NoConvergence : public Error {
 public:
  using Error::Error;
};

/// The Newton step system is numerically singular.
class SingularJacobian : public Error {
 public:
  using Error::Error;
};

/// A point left the co-final set of the distribution family.
class NotCofinal : public Error {
 public:
  using Error::Error;
};

/// A point is outside the family's domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Invalid step size or grid parameter for an integration run.
class StepError : public Error {
 public:
  using Error::Error;
};

/// Malformed configuration or data file.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Experiment name not present in the registry.
class UnknownExperiment : public Error {
 public:
  using Error::Error;
};

}  // namespace geninv
