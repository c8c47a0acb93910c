#pragma once

#include <stdexcept>
#include <string>

namespace pmcf {

/// Base class of every recoverable numerical failure raised by the library.
class FlowError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The spatial metric of a chart is not positive definite at a queried point.
class DomainError : public FlowError {
 public:
  using FlowError::FlowError;
};

/// A graph node reached sigma^{ij} u_i u_j >= 1 - eps_guard.
class SpacelikeViolation : public FlowError {
 public:
  SpacelikeViolation(const std::string& what, std::size_t node)
      : FlowError(what), node_(node) {}
  std::size_t node() const { return node_; }

 private:
  std::size_t node_;
};

/// H <= 0 where a fractional power H^p is required.
class NonpositiveCurvature : public FlowError {
 public:
  NonpositiveCurvature(const std::string& what, std::size_t node)
      : FlowError(what), node_(node) {}
  std::size_t node() const { return node_; }

 private:
  std::size_t node_;
};

/// The explicit stability limit fell below the usable time step floor.
class StiffnessError : public FlowError {
 public:
  using FlowError::FlowError;
};

/// Malformed or out-of-range configuration. Carries the offending key and line (0 if unknown).
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& key, int line, const std::string& message)
      : std::runtime_error(format(key, line, message)), key_(key), line_(line), message_(message) {}
  const std::string& key() const { return key_; }
  int line() const { return line_; }
  /// The diagnostic without the line/key prefix.
  const std::string& message() const { return message_; }

 private:
  static std::string format(const std::string& key, int line, const std::string& message) {
    std::string out;
    if (line > 0) out += "line " + std::to_string(line) + ": ";
    if (!key.empty()) out += "key '" + key + "': ";
    return out + message;
  }
  std::string key_;
  int line_;
  std::string message_;
};

}  // namespace pmcf
