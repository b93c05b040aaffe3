#pragma once

#include <complex>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cusp {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input outside the domain of a function (poles of Gamma, bad dimension, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class ResourceError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  explicit ConvergenceError(const std::string& what,
                            double best = std::numeric_limits<double>::quiet_NaN(),
                            double error = std::numeric_limits<double>::quiet_NaN(),
                            std::vector<double> diagnostics = {})
      : Error(what), best_(best), error_(error), diagnostics_(std::move(diagnostics)) {}
  double best_estimate() const { return best_; }
  double error_estimate() const { return error_; }
  const std::vector<double>& diagnostics() const { return diagnostics_; }

 private:
  double best_;
  double error_;
  std::vector<double> diagnostics_;
};

class ContourProximityError : public Error {
 public:
  ContourProximityError(const std::string& what, std::complex<double> point)
      : Error(what), point_(point) {}
  std::complex<double> point() const { return point_; }

 private:
  std::complex<double> point_;
};

class PoleError : public Error {
 public:
  PoleError(const std::string& what, std::complex<double> nearest)
      : Error(what), nearest_(nearest) {}
  std::complex<double> nearest() const { return nearest_; }

 private:
  std::complex<double> nearest_;
};

}  // namespace cusp
