#include "ffsieve/error.hpp"

namespace ffsieve {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonPrimeP: return "NonPrimeP";
    case ErrorKind::ReducibleModulus: return "ReducibleModulus";
    case ErrorKind::DivisionByZero: return "DivisionByZero";
    case ErrorKind::SpecMismatch: return "SpecMismatch";
    case ErrorKind::IncompatibleFields: return "IncompatibleFields";
    case ErrorKind::FieldTooLarge: return "FieldTooLarge";
    case ErrorKind::EnumerationCapExceeded: return "EnumerationCapExceeded";
    case ErrorKind::PointNotOnScheme: return "PointNotOnScheme";
    case ErrorKind::SchemeNotSmooth: return "SchemeNotSmooth";
    case ErrorKind::UnsupportedPresentation: return "UnsupportedPresentation";
    case ErrorKind::DivergentArgument: return "DivergentArgument";
    case ErrorKind::InsufficientProfile: return "InsufficientProfile";
    case ErrorKind::MissingProfile: return "MissingProfile";
    case ErrorKind::ProfileMismatch: return "ProfileMismatch";
    case ErrorKind::NoSmoothHypersurfaceFound: return "NoSmoothHypersurfaceFound";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::UsageError: return "UsageError";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace ffsieve
