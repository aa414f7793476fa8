#pragma once

#include <stdexcept>
#include <string>

namespace fglab {

/// Truncation degree or p-adic precision is too small for the requested
/// computation to be exact.
class PrecisionError : public std::runtime_error {
 public:
  explicit PrecisionError(const std::string& what) : std::runtime_error(what) {}
};

/// A computed object failed a mathematical certification (impure Newton
/// polygon, non-integral group law, failed axiom).  Either the input is not
/// what it claims to be or there is a bug.
class CertificationError : public std::runtime_error {
 public:
  explicit CertificationError(const std::string& what) : std::runtime_error(what) {}
};

/// Operation invoked outside its precondition (non-full-height group passed
/// to a full-height-only routine, and so on).
class PreconditionError : public std::logic_error {
 public:
  explicit PreconditionError(const std::string& what) : std::logic_error(what) {}
};

}  // namespace fglab
