#pragma once

#include <stdexcept>
#include <string>

namespace ctmc {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A state code cannot be encoded or decoded (out of codec range, wrong
/// family).
class EncodingError : public Error {
 public:
  using Error::Error;
};

/// A caller-supplied constant or object violates a documented precondition
/// (p outside (1/2,1), r <= 1, empty target set, ...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// A certificate audit cannot run on the supplied window (window not
/// generator-closed, field metadata missing, target outside window).
class AuditError : public Error {
 public:
  using Error::Error;
};

/// A field or drift evaluation produced a non-finite value.  The message
/// names the offending state code.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// An evaluation outside the domain of an iterated-log expression.  The
/// message names the domain threshold.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The linear-algebra backend failed (singular truncation, residual blowup).
class SolverError : public Error {
 public:
  using Error::Error;
};

/// A configuration document violates the published schema.
class SchemaError : public Error {
 public:
  using Error::Error;
};

}  // namespace ctmc
