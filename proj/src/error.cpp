#include "unirate/error.hpp"

namespace unirate {

const char* error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::UnknownFactor: return "UnknownFactor";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::BadKernel: return "BadKernel";
    case ErrorKind::PreconditionViolated: return "PreconditionViolated";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::Blowup: return "Blowup";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::StructureError: return "StructureError";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::SingularCovariance: return "SingularCovariance";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::SchemaError: return "SchemaError";
    case ErrorKind::UnknownEntry: return "UnknownEntry";
    case ErrorKind::Overflow: return "Overflow";
  }
  return "Error";
}

}  // namespace unirate
