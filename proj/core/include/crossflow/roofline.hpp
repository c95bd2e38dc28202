// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "crossflow/arch.hpp"
#include "crossflow/graph.hpp"

namespace crossflow {

/// Per-level GEMM tile (x,y,z) <-> (m,n,k).
struct TileDims {
  std::int64_t x = 1, y = 1, z = 1;
};

/// Nested tiles, one per on-chip level, registers (L0) first.
struct Tiling {
  std::vector<TileDims> levels;
};

/// Byte traffic served by each memory level for one kernel execution.
struct AccessProfile {
  std::vector<std::int64_t> level_bytes;  // aligned with ArchSpec::mem_levels
  std::int64_t main_bytes = 0;
};

struct RooflineProfile {
  double time = 0;          // s
  std::string bound;        // "compute", a level name, or "main_mem"
  std::vector<double> level_oi;  // flops per byte at each level
  double main_oi = 0;
  AccessProfile accesses;
  Tiling tiling;
};

/// #RegAccess = #Flops * (Nx Ny + K Nx + K Ny) / (2 K Nx Ny), ceil'd.
std::int64_t reg_accesses(std::int64_t flops, std::int64_t reuse, int nx, int ny);

/// Reuse factor K for the register tile under a dataflow; `auto` returns the
/// best (largest) of the three. Output-stationary accumulation depth uses
/// Nz_eff = min(Tz, Nx).
std::int64_t reuse_factor(const TileDims& t0, int nx, int ny, Dataflow df);

/// Traffic per level for a fixed nested tiling. Level l traffic follows the
/// re-streaming rule between the tile resident at l and the tile at l-1
/// (A repeats with the y sweep, B with the x sweep, C pays read+write per
/// extra partial-sum pass), times the number of tile instances; L0 traffic
/// follows the register dataflow equation.
AccessProfile accesses_for_tiling(const KernelNode& kernel, const ArchSpec& arch,
                                  const Tiling& tiling, int precision_bytes);

/// Capacity feasibility of one tile at one level.
bool tile_fits(const TileDims& t, double capacity_bits, int precision_bytes);

struct TilingSearchResult {
  Tiling tiling;
  AccessProfile accesses;
  double time = 0;
  std::int64_t candidates_evaluated = 0;
};

/// Sample `samples_per_level` capacity-feasible tiles per level (log-uniform
/// dims rounded to MCU multiples) and return the nested combination with the
/// smallest predicted kernel time. Deterministic for a fixed seed. Throws
/// CapacityError when the kernel cannot fit main memory or a level cannot
/// hold a single MCU tile.
TilingSearchResult search_tilings(const KernelNode& kernel, const ArchSpec& arch,
                                  int samples_per_level, std::uint64_t seed,
                                  int precision_bytes);

/// Classic roofline composition over explicit counts: max of the compute
/// term and every traffic/bandwidth term. Bytes pair with bits/s bandwidths.
double kernel_time_from_counts(
    double flops, double effective_throughput,
    std::span<const std::pair<std::int64_t, double>> bytes_and_bandwidth);

/// Hierarchical roofline for a kernel with known access counts.
/// max_utilization derates the compute throughput here (not in ArchSpec).
RooflineProfile kernel_time(const KernelNode& kernel, const ArchSpec& arch,
                            const TilingSearchResult& tiles, int precision_bytes);

/// Transfer time: payload over the derated bandwidth plus per-hop latency.
double edge_time(std::int64_t bytes, double effective_bw, double total_latency);

inline constexpr int kDefaultTilingSamples = 20;

}  // namespace crossflow
