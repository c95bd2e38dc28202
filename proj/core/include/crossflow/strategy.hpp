// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>

namespace crossflow {

/// Kernel parallelism flavor: RC shards the first matrix across rows and the
/// second across columns (inner product); CR cuts both along the contraction
/// dimension (outer product, needs a partial-sum reduction).
enum class KernelKind { kRC, kCR };

/// Parsed parallelism strategy string, e.g. "RC-4-2-d3-p2" or "CR-8-d8-p1".
struct ParallelismStrategy {
  KernelKind kind = KernelKind::kRC;
  int kp1 = 1;
  int kp2 = 1;  // always 1 for CR
  int dp = 1;
  int lp = 1;

  std::int64_t total_devices() const {
    return static_cast<std::int64_t>(kp1) * kp2 * dp * lp;
  }

  /// Canonical strategy string; parse_strategy(to_string()) round-trips.
  std::string to_string() const;
};

/// Parse a strategy string. The RC/CR token is case-insensitive; the
/// 'd' and 'p' markers are case-sensitive. Throws ConfigError with the
/// offending position on malformed input.
ParallelismStrategy parse_strategy(const std::string& text);

}  // namespace crossflow
