#pragma once

#include <stdexcept>
#include <string>

namespace cechlab {

/// Raised when an operation receives arguments outside its domain.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised for invalid experiment / sampler configuration (exit code 1 in the CLI).
class ConfigurationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A self-check inside the library failed; indicates a bug, not bad input.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// An audited inequality was violated (exit code 2 in the CLI).
class AuditFailure : public std::runtime_error {
 public:
  AuditFailure(const std::string& what, std::string repro_path)
      : std::runtime_error(what), repro_path_(std::move(repro_path)) {}
  const std::string& repro_path() const noexcept { return repro_path_; }

 private:
  std::string repro_path_;
};

}  // namespace cechlab
