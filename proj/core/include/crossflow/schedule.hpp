// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace crossflow {

/// One schedulable task. A task holds every resource in `resources` for its
/// whole duration (a device slot, or each link direction along a route).
struct Task {
  double duration = 0;
  std::vector<int> deps;       // predecessor task indices
  std::vector<int> resources;  // resource ids, each capacity 1
  std::string label;
};

struct ScheduledTask {
  int task = 0;
  double start = 0;
  double end = 0;
};

struct ScheduleResult {
  double makespan = 0;
  std::vector<ScheduledTask> trace;  // indexed by task
};

/// Deterministic resource-constrained list scheduling. Priority: longest
/// remaining critical path (including own duration) first, smaller index on
/// ties; a ready task blocked on a busy resource does not hold back
/// lower-priority ready tasks. Throws SimulationError on dependency cycles.
ScheduleResult list_schedule(const std::vector<Task>& tasks, int num_resources);

}  // namespace crossflow
