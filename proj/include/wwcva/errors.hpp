#pragma once

#include <stdexcept>
#include <string>

namespace wwcva {

// Invalid argument to a pricing or probability routine (empty interval,
// negative vol, recovery >= 1, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Market inputs that violate no-arbitrage (e.g. a non-convex call curve).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class CalibrationError : public std::runtime_error {
 public:
  CalibrationError(const std::string& what, double expiry)
      : std::runtime_error(what), expiry_(expiry) {}

  double expiry() const noexcept { return expiry_; }

 private:
  double expiry_;
};

// Mismatched grids or invalid run configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace wwcva
