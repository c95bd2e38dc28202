// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace crossflow {

/// Base class for all toolkit errors. `where` names the engine or config
/// section that raised the error so CLI diagnostics can point at it.
class Error : public std::runtime_error {
 public:
  Error(std::string where, const std::string& what)
      : std::runtime_error(where + ": " + what), where_(std::move(where)) {}

  const std::string& where() const { return where_; }

 private:
  std::string where_;
};

/// Malformed or invalid configuration input (missing fields, bad values,
/// violated invariants, unknown keys in strict mode).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A component cannot be realized within its resource allocation.
class SizingError : public Error {
 public:
  using Error::Error;
};

/// Parallelism transformation cannot be applied (e.g. sharding factor
/// exceeds a tensor dimension).
class TransformError : public Error {
 public:
  using Error::Error;
};

/// Device placement or routing failure.
class MappingError : public Error {
 public:
  using Error::Error;
};

/// Kernel working set exceeds main memory; signals strategy infeasibility.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// Event simulation failure (cycles, unschedulable tasks).
class SimulationError : public Error {
 public:
  using Error::Error;
};

}  // namespace crossflow
