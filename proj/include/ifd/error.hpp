#pragma once

#include <stdexcept>
#include <string>

namespace ifd {

/// Base class for every domain failure the library reports. The CLI maps
/// these to exit code 1.
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A metric-axiom or structural invariant was violated by input data.
class InvariantError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// A map that was required to be an isometric embedding is not.
class IsometryError : public DomainError {
 public:
  IsometryError(const std::string& what, std::size_t worst_i, std::size_t worst_j,
                double worst_error)
      : DomainError(what), worst_i_(worst_i), worst_j_(worst_j), worst_error_(worst_error) {}

  std::size_t worst_i() const noexcept { return worst_i_; }
  std::size_t worst_j() const noexcept { return worst_j_; }
  double worst_error() const noexcept { return worst_error_; }

 private:
  std::size_t worst_i_;
  std::size_t worst_j_;
  double worst_error_;
};

/// A problem instance exceeds the limits of an exhaustive method.
class SizeError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// A parameter set fails a generator's stated hypothesis.
class HypothesisError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Malformed input (JSON shape, missing field, wrong type).
class ParseError : public DomainError {
 public:
  using DomainError::DomainError;
};

}  // namespace ifd
