#ifndef QINFO_ERRORS_HPP
#define QINFO_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace qinfo {

/// Root of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A value object failed one of its invariants (normalization, ranges).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Dimensions of two operands do not fit together.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// A density matrix has an eigenvalue below the clamping window.
class PositivityError : public Error {
 public:
  using Error::Error;
};

/// An iterative or spectral routine did not reach its tolerance.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

namespace detail {

template <class E>
inline void require(bool ok, const std::string& what) {
  if (!ok) throw E(what);
}

}  // namespace detail
}  // namespace qinfo

#endif  // QINFO_ERRORS_HPP
