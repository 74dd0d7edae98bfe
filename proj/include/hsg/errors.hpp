#pragma once

#include <stdexcept>
#include <string>

namespace hsg {

// Input outside the mathematical domain of an operation.
struct DomainError : std::runtime_error {
  explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

// Resource guard tripped (word depth, enumeration size).
struct ResourceError : std::runtime_error {
  explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

// An iterative solver failed to converge.
struct IterationError : std::runtime_error {
  explicit IterationError(const std::string& what) : std::runtime_error(what) {}
};

// Invalid run configuration (CLI flags or config file).
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Filesystem failure while emitting reports.
struct IoError : std::runtime_error {
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace hsg
