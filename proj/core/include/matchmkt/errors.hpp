#pragma once

#include <stdexcept>
#include <string>

namespace matchmkt {

/// Invalid user-supplied configuration (bad distribution parameters,
/// oversized signal count, malformed scenario file, ...).
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// A precondition on the mathematical domain was violated (same-side
/// utility query, availability between non-neighbors, unbounded support
/// where a maximum is required, ...).
class DomainError : public std::runtime_error {
 public:
  explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

/// An internal contract was broken (unstable matching fed to a routine
/// that requires stability, malformed preference lists, ...).
class ContractError : public std::runtime_error {
 public:
  explicit ContractError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace matchmkt
