#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace crint {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  enum class Kind { syntax, unknown_identifier, non_integer_exponent };

  ParseError(Kind kind, std::size_t offset, const std::string& what)
      : Error("parse error at byte " + std::to_string(offset) + ": " + what),
        kind_(kind),
        offset_(offset) {}

  Kind kind() const noexcept { return kind_; }
  std::size_t offset() const noexcept { return offset_; }

 private:
  Kind kind_;
  std::size_t offset_;
};

/// A value was requested outside the domain of an expression (ln of a
/// non-positive number, division by zero, non-finite intermediate).
/// `subtree()` is the unparsed text of the failing node.
class DomainError : public Error {
 public:
  DomainError(const std::string& what, std::string subtree)
      : Error(what), subtree_(std::move(subtree)) {}

  const std::string& subtree() const noexcept { return subtree_; }

 private:
  std::string subtree_;
};

/// A line-integration path left the domain of the Hamiltonian's partials.
class PathDomainError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// The Hamiltonian is constant on the sampled region.
class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

/// The symbolic invariant builder only handles polynomial Hamiltonians.
class UnsupportedClassError : public Error {
 public:
  using Error::Error;
};

/// The Cauchy-Riemann one-form is not exact (integrability conditions fail).
class NonExactError : public Error {
 public:
  using Error::Error;
};

/// T mentions a coordinate or V mentions a momentum.
class SeparationError : public Error {
 public:
  using Error::Error;
};

/// Invalid argument combination (bad domain, leapfrog on a non-separable H, ...).
class UsageError : public Error {
 public:
  using Error::Error;
};

}  // namespace crint
