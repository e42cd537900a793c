#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace cmclab {

/// A point or parameter lies outside the set where an operation is defined.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Invalid parameter values (H <= 0, t outside its interval, ...).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Inconsistent configuration: unknown data tags, mismatched grids, bad schema.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numerical procedure failed to reach its tolerance.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A curve left the region where a discrete field is defined.
class PartialCoverageError : public std::runtime_error {
 public:
  PartialCoverageError(const std::string& what, std::vector<std::size_t> offending)
      : std::runtime_error(what), offending_(std::move(offending)) {}

  /// Indices of the curve samples that fell outside the valid region.
  const std::vector<std::size_t>& offending() const noexcept { return offending_; }

 private:
  std::vector<std::size_t> offending_;
};

}  // namespace cmclab
