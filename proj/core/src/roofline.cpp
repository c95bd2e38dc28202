// SPDX-License-Identifier: Apache-2.0
#include "crossflow/roofline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "crossflow/errors.hpp"

namespace crossflow {

namespace {

std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return (a + b - 1) / b; }

std::int64_t working_set_bytes(const TileDims& t, int precision) {
  return (t.x * t.z + t.z * t.y + t.x * t.y) * precision;
}

}  // namespace

std::int64_t reg_accesses(std::int64_t flops, std::int64_t reuse, int nx, int ny) {
  // ceil(flops * (NxNy + K Nx + K Ny) / (2 K Nx Ny)) in integer arithmetic.
  std::int64_t num = flops * (static_cast<std::int64_t>(nx) * ny + reuse * nx + reuse * ny);
  std::int64_t den = 2 * reuse * static_cast<std::int64_t>(nx) * ny;
  return ceil_div(num, den);
}

std::int64_t reuse_factor(const TileDims& t0, int nx, int ny, Dataflow df) {
  switch (df) {
    case Dataflow::kWeightStationary:
      return ceil_div(t0.x, nx);
    case Dataflow::kActivationStationary:
      return ceil_div(t0.y, ny);
    case Dataflow::kOutputStationary: {
      std::int64_t nz_eff = std::min<std::int64_t>(t0.z, nx);
      return ceil_div(t0.z, nz_eff);
    }
    case Dataflow::kAuto: {
      std::int64_t best = 1;
      for (Dataflow d : {Dataflow::kWeightStationary, Dataflow::kActivationStationary,
                         Dataflow::kOutputStationary}) {
        best = std::max(best, reuse_factor(t0, nx, ny, d));
      }
      return best;
    }
  }
  return 1;
}

bool tile_fits(const TileDims& t, double capacity_bits, int precision_bytes) {
  return static_cast<double>(working_set_bytes(t, precision_bytes)) * 8.0 <=
         capacity_bits;
}

namespace {

// Bytes moved between an outer tile (resident at the far level) and the
// inner tile sweeping it. C pays one write per pass plus a read back for
// every partial-sum re-stream: 2 * passes - 1 occurrences.
std::int64_t pass_traffic(const TileDims& outer, const TileDims& inner, int precision) {
  std::int64_t a = outer.x * outer.z * precision;
  std::int64_t b = outer.z * outer.y * precision;
  std::int64_t c = outer.x * outer.y * precision;
  std::int64_t z_passes = ceil_div(outer.z, inner.z);
  return a * ceil_div(outer.y, inner.y) + b * ceil_div(outer.x, inner.x) +
         c * (2 * z_passes - 1);
}

}  // namespace

AccessProfile accesses_for_tiling(const KernelNode& kernel, const ArchSpec& arch,
                                  const Tiling& tiling, int precision_bytes) {
  const int levels = static_cast<int>(arch.mem_levels.size());
  if (static_cast<int>(tiling.levels.size()) != levels) {
    throw CapacityError("roofline", "tiling must cover every on-chip level");
  }
  AccessProfile prof;
  prof.level_bytes.assign(levels, 0);

  TileDims full{kernel.m, kernel.n, kernel.k};
  const TileDims& last = tiling.levels[levels - 1];
  prof.main_bytes = pass_traffic(full, last, precision_bytes);

  for (int l = levels - 1; l >= 1; --l) {
    const TileDims& outer = tiling.levels[l];
    const TileDims& inner = tiling.levels[l - 1];
    std::int64_t instances = ceil_div(kernel.m, outer.x) * ceil_div(kernel.n, outer.y) *
                             ceil_div(kernel.k, outer.z);
    prof.level_bytes[l] = instances * pass_traffic(outer, inner, precision_bytes);
  }

  std::int64_t reuse =
      reuse_factor(tiling.levels[0], arch.mcu.array_x, arch.mcu.array_y,
                   arch.mcu.dataflow);
  prof.level_bytes[0] =
      reg_accesses(kernel.gemm_flops(), reuse, arch.mcu.array_x, arch.mcu.array_y) *
      precision_bytes;
  return prof;
}

double kernel_time_from_counts(
    double flops, double effective_throughput,
    std::span<const std::pair<std::int64_t, double>> bytes_and_bandwidth) {
  double t = flops / effective_throughput;
  for (const auto& [bytes, bw] : bytes_and_bandwidth) {
    t = std::max(t, static_cast<double>(bytes) * 8.0 / bw);
  }
  return t;
}

RooflineProfile kernel_time(const KernelNode& kernel, const ArchSpec& arch,
                            const TilingSearchResult& tiles, int precision_bytes) {
  RooflineProfile prof;
  prof.accesses = tiles.accesses;
  prof.tiling = tiles.tiling;

  double eff_tput = arch.compute_throughput * arch.mcu.max_utilization;
  double best = static_cast<double>(kernel.flops()) / eff_tput;
  prof.bound = "compute";

  const int levels = static_cast<int>(arch.mem_levels.size());
  prof.level_oi.resize(levels);
  for (int l = 0; l < levels; ++l) {
    double bytes = static_cast<double>(tiles.accesses.level_bytes[l]);
    prof.level_oi[l] = static_cast<double>(kernel.gemm_flops()) / bytes;
    double t = bytes * 8.0 / arch.mem_levels[l].bandwidth;
    if (t > best) {
      best = t;
      prof.bound = arch.mem_levels[l].name;
    }
  }
  {
    double bytes = static_cast<double>(tiles.accesses.main_bytes);
    prof.main_oi = static_cast<double>(kernel.gemm_flops()) / bytes;
    double t = bytes * 8.0 / arch.main_mem.bandwidth;
    if (t > best) {
      best = t;
      prof.bound = "main_mem";
    }
  }
  prof.time = best;
  return prof;
}

namespace {

double combo_time(const KernelNode& kernel, const ArchSpec& arch,
                  const AccessProfile& prof) {
  double eff_tput = arch.compute_throughput * arch.mcu.max_utilization;
  double best = static_cast<double>(kernel.flops()) / eff_tput;
  for (size_t l = 0; l < prof.level_bytes.size(); ++l) {
    best = std::max(best, static_cast<double>(prof.level_bytes[l]) * 8.0 /
                              arch.mem_levels[l].bandwidth);
  }
  best = std::max(best,
                  static_cast<double>(prof.main_bytes) * 8.0 / arch.main_mem.bandwidth);
  return best;
}

}  // namespace

TilingSearchResult search_tilings(const KernelNode& kernel, const ArchSpec& arch,
                                  int samples_per_level, std::uint64_t seed,
                                  int precision_bytes) {
  const int levels = static_cast<int>(arch.mem_levels.size());
  TileDims full{kernel.m, kernel.n, kernel.k};
  if (static_cast<double>(working_set_bytes(full, precision_bytes)) * 8.0 >
      arch.main_mem.capacity) {
    throw CapacityError("roofline", "kernel working set exceeds main memory");
  }

  const std::int64_t gx = arch.mcu.array_x;
  const std::int64_t gy = arch.mcu.array_y;
  const std::int64_t gz = arch.mcu.array_x;  // z granule mirrors the array depth

  auto min_tile = [&]() {
    TileDims t;
    t.x = std::min<std::int64_t>(gx, kernel.m);
    t.y = std::min<std::int64_t>(gy, kernel.n);
    t.z = std::min<std::int64_t>(gz, kernel.k);
    return t;
  }();

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  auto sample_dim = [&](std::int64_t granule, std::int64_t dim) {
    // Log-uniform in [granule, dim], rounded down to a granule multiple.
    if (dim <= granule) return dim;
    double lo = std::log(static_cast<double>(granule));
    double hi = std::log(static_cast<double>(dim));
    auto v = static_cast<std::int64_t>(std::exp(lo + (hi - lo) * unit(rng)));
    v = std::max(granule, std::min(dim, v));
    v = (v / granule) * granule;
    return std::min(dim, std::max(granule, v));
  };

  // Candidate tiles per level: always include the minimal MCU tile so a
  // nested combination exists, then rejection-sample the rest.
  std::vector<std::vector<TileDims>> candidates(levels);
  for (int l = 0; l < levels; ++l) {
    double cap = arch.mem_levels[l].capacity;
    if (!tile_fits(min_tile, cap, precision_bytes)) {
      throw CapacityError("roofline", "level " + arch.mem_levels[l].name +
                                          " cannot hold one MCU tile");
    }
    auto& list = candidates[l];
    list.push_back(min_tile);
    int attempts = 0;
    const int max_attempts = samples_per_level * 100;
    while (static_cast<int>(list.size()) < samples_per_level &&
           attempts < max_attempts) {
      ++attempts;
      TileDims t;
      t.x = sample_dim(gx, kernel.m);
      t.y = sample_dim(gy, kernel.n);
      t.z = sample_dim(gz, kernel.k);
      if (!tile_fits(t, cap, precision_bytes)) continue;
      list.push_back(t);
    }
  }

  TilingSearchResult best;
  best.time = std::numeric_limits<double>::infinity();

  Tiling current;
  current.levels.assign(levels, TileDims{});
  std::vector<int> pick(levels, 0);

  // Exhaustive walk over the sampled cross product, skipping non-nested
  // combinations.
  std::int64_t evaluated = 0;
  while (true) {
    bool nested = true;
    for (int l = 0; l < levels; ++l) {
      current.levels[l] = candidates[l][pick[l]];
      if (l > 0) {
        const TileDims& inner = current.levels[l - 1];
        const TileDims& outer = current.levels[l];
        if (inner.x > outer.x || inner.y > outer.y || inner.z > outer.z) {
          nested = false;
          break;
        }
      }
    }
    if (nested) {
      ++evaluated;
      AccessProfile prof = accesses_for_tiling(kernel, arch, current, precision_bytes);
      double t = combo_time(kernel, arch, prof);
      if (t < best.time) {
        best.time = t;
        best.tiling = current;
        best.accesses = prof;
      }
    }
    int l = levels - 1;
    while (l >= 0) {
      if (++pick[l] < static_cast<int>(candidates[l].size())) break;
      pick[l] = 0;
      --l;
    }
    if (l < 0) break;
  }

  best.candidates_evaluated = evaluated;
  if (!std::isfinite(best.time)) {
    throw CapacityError("roofline", "no feasible nested tiling found");
  }
  return best;
}

double edge_time(std::int64_t bytes, double effective_bw, double total_latency) {
  double transfer = effective_bw > 0
                        ? static_cast<double>(bytes) * 8.0 / effective_bw
                        : 0.0;
  return transfer + total_latency;
}

}  // namespace crossflow
