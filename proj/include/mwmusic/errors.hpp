#pragma once

#include <stdexcept>
#include <string>

namespace mwmusic {

// Bad input: configs, index sets, grid mismatch, unreadable files.
// The CLI maps this family to exit code 1.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class OverlapError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class BoundsError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class DimensionError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// Numerical failure: singular kernels, zero matrices, series that do not
// converge. The CLI maps this family to exit code 2.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DomainError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class RangeError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class CoincidenceError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class ConvergenceError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// Non-fatal conditions (failed small-anomaly check, empty supports) are
// reported through this sink. Defaults to stderr; tests may swap it out.
using WarningSink = void (*)(const std::string&);
void set_warning_sink(WarningSink sink);
void warn(const std::string& message);

}  // namespace mwmusic
