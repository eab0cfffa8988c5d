#pragma once

#include <stdexcept>
#include <string>

namespace pdc {

/// Argument outside the physically validated domain (wavelength band, evanescent mode, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Invalid or inconsistent configuration. `key()` holds the dotted key path.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& what)
      : std::runtime_error(key + ": " + what), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

/// Integration produced non-finite values.
class PropagationError : public std::runtime_error {
 public:
  PropagationError(const std::string& what, double z_um, int step)
      : std::runtime_error(what + " (z = " + std::to_string(z_um) + " um, step " +
                           std::to_string(step) + ")"),
        z_um_(z_um), step_(step) {}
  double z_um() const noexcept { return z_um_; }
  int step() const noexcept { return step_; }

 private:
  double z_um_;
  int step_;
};

/// A formula was invoked outside the premise it was derived under.
class UnsupportedPremise : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Two artifact sets that cannot be compared.
class ComparisonError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace pdc
