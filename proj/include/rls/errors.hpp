#pragma once

#include <stdexcept>
#include <string>

namespace rls {

/// Base class for every failure raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A transfer-function denominator vanished on the imaginary axis.
class PoleOnAxisError : public Error {
 public:
  PoleOnAxisError(double omega, const std::string& what)
      : Error(what), omega_(omega) {}
  double omega() const { return omega_; }

 private:
  double omega_;
};

/// |L_1| in dB does not change sign across the requested bracket.
class BracketError : public Error {
 public:
  using Error::Error;
};

/// A design target exceeds what the constraints allow.
class InfeasibleTargetError : public Error {
 public:
  InfeasibleTargetError(double limit_deg, const std::string& what)
      : Error(what), limit_deg_(limit_deg) {}
  double limit_deg() const { return limit_deg_; }

 private:
  double limit_deg_;
};

/// Simulation state blew past the divergence threshold.
class DivergenceError : public Error {
 public:
  DivergenceError(double time, const std::string& what)
      : Error(what), time_(time) {}
  double time() const { return time_; }

 private:
  double time_;
};

/// A trace window is unsuitable for the requested analysis.
class WindowError : public Error {
 public:
  using Error::Error;
};

}  // namespace rls
