#pragma once

#include <stdexcept>
#include <string>

namespace unirate {

enum class ErrorKind {
  UnknownFactor,
  DomainError,
  BadKernel,
  PreconditionViolated,
  ShapeMismatch,
  Blowup,
  OutOfRange,
  StructureError,
  TooLarge,
  SingularCovariance,
  DimensionMismatch,
  ParseError,
  SchemaError,
  UnknownEntry,
  Overflow,
};

const char* error_kind_name(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(error_kind_name(kind)) + ": " + what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace unirate
