#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace relcomp {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on shapes, sizes or parameter ranges was violated.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Vectors or samples whose dimensions do not agree.
class DimensionMismatch : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// A score function returned NaN or Inf.
class NonFiniteScore : public Error {
 public:
  NonFiniteScore(std::size_t index, const std::string& what)
      : Error(what), index_(index) {}
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

/// The truncated-normal mass between the truncation points is numerically zero.
class TruncationError : public Error {
 public:
  TruncationError(double lower, double upper, const std::string& what)
      : Error(what), lower_(lower), upper_(upper) {}
  double lower() const noexcept { return lower_; }
  double upper() const noexcept { return upper_; }

 private:
  double lower_;
  double upper_;
};

}  // namespace relcomp
