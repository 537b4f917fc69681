#pragma once

#include <stdexcept>
#include <string>

namespace flcc {

// Raised when input data violates a type invariant. `field()` names the
// offending field so the CLI can report it.
class ValidationError : public std::runtime_error {
 public:
  ValidationError(std::string field, const std::string& what)
      : std::runtime_error(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

// Malformed text (JSON syntax, truncated ORLIB file, ...).
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An exact/exponential routine was asked to run beyond its desk-scale limit.
class ScaleGuardError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace flcc
