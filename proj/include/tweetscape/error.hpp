#pragma once

#include <stdexcept>
#include <string>

namespace tweetscape {

/// Input bytes that do not follow a documented file format.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A value outside the domain an operation accepts. `reason()` is a short
/// machine-readable code (e.g. "empty-query") suitable for API responses.
class DomainError : public std::domain_error {
 public:
  DomainError(std::string reason, const std::string& message)
      : std::domain_error(message), reason_(std::move(reason)) {}
  explicit DomainError(const std::string& reason) : DomainError(reason, reason) {}

  const std::string& reason() const noexcept { return reason_; }

 private:
  std::string reason_;
};

/// Filesystem failures (unreadable input, unwritable output).
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace tweetscape
