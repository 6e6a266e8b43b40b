#pragma once

#include <stdexcept>
#include <string>

namespace casimir {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error { using Error::Error; };
class GeometryError : public Error { using Error::Error; };
class ConfigurationError : public Error { using Error::Error; };
class IncompleteCampaign : public Error { using Error::Error; };
class SolverError : public Error { using Error::Error; };
class IoError : public Error { using Error::Error; };

// Config text problems: unknown or duplicate keys, malformed values.
class ParseError : public Error { using Error::Error; };
// Well-formed config whose values break a constraint.
class ValidationError : public Error { using Error::Error; };

class BudgetExceeded : public Error {
 public:
  BudgetExceeded(const std::string& what, double best_delta)
      : Error(what), best_delta_(best_delta) {}
  double best_delta() const { return best_delta_; }

 private:
  double best_delta_;
};

}  // namespace casimir
