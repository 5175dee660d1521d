#pragma once

#include <stdexcept>
#include <string>

namespace oldb2d {

/// Bad configuration value, unknown key, or violated parameter invariant.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or mismatched on-disk data (snapshots, time series).
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// NaN, overflow, blow-up guard or step-size underflow.
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A runtime invariant monitor failed. Carries the monitor name, the
/// simulation time and the offending value.
class MonitorViolation : public std::runtime_error {
 public:
  MonitorViolation(std::string monitor, double time, double value,
                   const std::string& detail)
      : std::runtime_error("monitor '" + monitor + "' violated at t=" +
                           std::to_string(time) + ": " + detail),
        monitor_(std::move(monitor)),
        time_(time),
        value_(value) {}

  const std::string& monitor() const { return monitor_; }
  double time() const { return time_; }
  double value() const { return value_; }

 private:
  std::string monitor_;
  double time_;
  double value_;
};

}  // namespace oldb2d
