#pragma once

#include <stdexcept>
#include <string>

namespace hilbund {

// Base class for all toolkit errors. Subclasses map to distinct CLI exit
// diagnostics, so keep the hierarchy flat and the names stable.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct DimensionError : Error {
  using Error::Error;
};

struct DegenerateBodyError : Error {
  using Error::Error;
};

struct DegenerateEllipsoidError : Error {
  using Error::Error;
};

struct DegenerateNormError : Error {
  using Error::Error;
};

struct NotEnclosingError : Error {
  using Error::Error;
};

struct ValidationError : Error {
  using Error::Error;
};

struct SectionError : Error {
  using Error::Error;
};

struct AnchorError : Error {
  using Error::Error;
};

struct CertificateError : Error {
  using Error::Error;
};

struct NetError : Error {
  using Error::Error;
};

struct EnumerationCapError : Error {
  using Error::Error;
};

// Invariants the code itself guarantees; reaching one is a bug.
struct InternalError : Error {
  using Error::Error;
};

}  // namespace hilbund
