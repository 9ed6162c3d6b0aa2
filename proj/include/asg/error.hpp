#pragma once

#include <stdexcept>
#include <string>

namespace asg {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller-supplied value violates a documented precondition.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A root finder was handed an interval without a sign change.
class BracketError : public Error {
 public:
  BracketError(const std::string& what, double f_lo, double f_hi)
      : Error(what), f_lo_(f_lo), f_hi_(f_hi) {}
  double f_lo() const noexcept { return f_lo_; }
  double f_hi() const noexcept { return f_hi_; }

 private:
  double f_lo_;
  double f_hi_;
};

/// A chain reached a state the algorithm forbids (K(x) = 0, slice membership lost).
class InvalidState : public Error {
 public:
  using Error::Error;
};

/// The kernel is numerically zero everywhere the support estimator looked.
class UnsupportedKernel : public Error {
 public:
  using Error::Error;
};

/// Both support-estimation paths failed; the message carries a CDF dump.
class SupportError : public Error {
 public:
  using Error::Error;
};

/// Autocorrelation of a constant (or too short) series.
class DegenerateSeries : public Error {
 public:
  using Error::Error;
};

}  // namespace asg
