// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "crossflow/arch.hpp"
#include "crossflow/mapping.hpp"
#include "crossflow/roofline.hpp"
#include "crossflow/schedule.hpp"
#include "crossflow/supergraph.hpp"
#include "crossflow/system.hpp"

namespace crossflow {

struct PerfOptions {
  int num_microbatches = 0;  // 0 = one per pipeline stage
  int tiling_samples = kDefaultTilingSamples;
  std::uint64_t seed = 0;
  bool overlap_collectives = true;  // dependency-driven overlap when true
};

struct KernelTaskReport {
  int node = 0;
  int microbatch = 0;
  std::string role;
  double time = 0;
  std::string bound;
  std::int64_t m = 0, n = 0, k = 0;  // slowest shard dims
};

struct EdgeTaskReport {
  int node = -1;       // owning node for collectives, -1 for activations
  int base_edge = -1;  // base-graph edge for activation transfers
  std::string role;
  int microbatch = -1;  // -1 for once-per-iteration collectives
  int steps = 1;
  double step_time = 0;
  double total_time = 0;
};

struct TimingReport {
  double end_to_end = 0;
  std::vector<KernelTaskReport> per_kernel;
  std::vector<EdgeTaskReport> per_edge;
  std::map<std::string, double> bound_histogram;  // label -> summed kernel time
  ScheduleResult schedule;
  std::vector<std::string> resource_names;
  std::vector<std::string> task_labels;
  int num_microbatches = 1;
};

/// Collapse the supergraph onto representative devices (replicas are timed
/// identically) and run the resource-constrained event simulation: one
/// kernel per device, one transfer per link direction, ring collectives as
/// explicit step-task chains, pipeline stages overlapping across
/// microbatches.
TimingReport simulate(const SuperGraph& sg, const Mapping& mapping,
                      const SystemGraph& sys, const ArchSpec& arch,
                      const PerfOptions& opt);

std::string timing_report_to_json(const TimingReport& report);
std::string schedule_trace_to_csv(const TimingReport& report);

}  // namespace crossflow
