#pragma once

#include <stdexcept>
#include <string>

namespace infousage {

/// Bad argument to a single operation (empty vector, parameter out of range).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Inconsistent configuration: rule/ensemble mismatch, non-PSD covariance,
/// unknown experiment or parameter.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An analyst script broke the query protocol.
class ProtocolError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Output directory missing or not writable.
class FilesystemError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A query session refused to answer because its information budget is spent.
class BudgetExhausted : public std::runtime_error {
 public:
  BudgetExhausted(double spent, double limit)
      : std::runtime_error("information budget exhausted: spent " + std::to_string(spent) +
                           " nats of " + std::to_string(limit)),
        spent_(spent),
        limit_(limit) {}

  double spent() const noexcept { return spent_; }
  double limit() const noexcept { return limit_; }

 private:
  double spent_;
  double limit_;
};

}  // namespace infousage
