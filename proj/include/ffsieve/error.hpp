#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ffsieve {

enum class ErrorKind {
  NonPrimeP,
  ReducibleModulus,
  DivisionByZero,
  SpecMismatch,
  IncompatibleFields,
  FieldTooLarge,
  EnumerationCapExceeded,
  PointNotOnScheme,
  SchemeNotSmooth,
  UnsupportedPresentation,
  DivergentArgument,
  InsufficientProfile,
  MissingProfile,
  ProfileMismatch,
  NoSmoothHypersurfaceFound,
  ParseError,
  UsageError,
  InvalidArgument,
};

std::string_view to_string(ErrorKind kind);

// Every module reports failures through this type; `where` names the
// module and operation, e.g. "gf.make_field".
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string where, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + " in " + where + ": " + message),
        kind_(kind),
        where_(std::move(where)) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& where() const noexcept { return where_; }

 private:
  ErrorKind kind_;
  std::string where_;
};

}  // namespace ffsieve
