#pragma once

#include <stdexcept>
#include <string>

namespace fraccert {

// Base of every error raised by the library.  The CLI maps ConfigError
// to exit code 2 and every other subclass to exit code 3.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParameterError : public Error { using Error::Error; };
class PoleError : public Error { using Error::Error; };
class DomainError : public Error { using Error::Error; };
class ConvergenceError : public Error { using Error::Error; };
class TailTruncationError : public Error { using Error::Error; };
class SingularityError : public Error { using Error::Error; };
class CalibrationError : public Error { using Error::Error; };
class BoxTooSmallError : public Error { using Error::Error; };
class StabilityError : public Error { using Error::Error; };
class RadiusError : public Error { using Error::Error; };
class DimensionError : public Error { using Error::Error; };
class DegenerateFitError : public Error { using Error::Error; };
class BudgetError : public Error { using Error::Error; };
class ConfigError : public Error { using Error::Error; };

}  // namespace fraccert
