// SPDX-License-Identifier: Apache-2.0
#include "crossflow/schedule.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <set>

#include "crossflow/errors.hpp"

namespace crossflow {

namespace {

// Longest path to any sink, own duration included. Also validates acyclicity.
std::vector<double> critical_paths(const std::vector<Task>& tasks) {
  const int n = static_cast<int>(tasks.size());
  std::vector<std::vector<int>> succ(n);
  std::vector<int> outdeg(n, 0);
  for (int i = 0; i < n; ++i) {
    for (int d : tasks[i].deps) {
      if (d < 0 || d >= n) throw SimulationError("schedule", "bad dependency index");
      succ[d].push_back(i);
      ++outdeg[d];
    }
  }
  // Reverse topological order via Kahn on successor counts.
  std::vector<double> cp(n, 0.0);
  std::vector<int> remaining = outdeg;
  std::queue<int> q;
  for (int i = 0; i < n; ++i) {
    if (remaining[i] == 0) q.push(i);
  }
  int seen = 0;
  std::vector<int> order;
  order.reserve(n);
  while (!q.empty()) {
    int u = q.front();
    q.pop();
    order.push_back(u);
    ++seen;
    for (int d : tasks[u].deps) {
      if (--remaining[d] == 0) q.push(d);
    }
  }
  if (seen != n) throw SimulationError("schedule", "task graph has a cycle");
  for (int u : order) {
    double best = 0;
    for (int v : succ[u]) best = std::max(best, cp[v]);
    cp[u] = tasks[u].duration + best;
  }
  return cp;
}

}  // namespace

ScheduleResult list_schedule(const std::vector<Task>& tasks, int num_resources) {
  const int n = static_cast<int>(tasks.size());
  std::vector<double> cp = critical_paths(tasks);

  std::vector<int> unmet(n, 0);
  std::vector<std::vector<int>> succ(n);
  for (int i = 0; i < n; ++i) {
    unmet[i] = static_cast<int>(tasks[i].deps.size());
    for (int d : tasks[i].deps) succ[d].push_back(i);
  }

  // Ready tasks ordered by (-critical path, index).
  auto cmp = [&](int a, int b) {
    if (cp[a] != cp[b]) return cp[a] > cp[b];
    return a < b;
  };
  std::set<int, decltype(cmp)> ready(cmp);
  for (int i = 0; i < n; ++i) {
    if (unmet[i] == 0) ready.insert(i);
  }

  std::vector<double> resource_free(std::max(num_resources, 0), 0.0);
  auto resource_available = [&](const Task& t, double now) {
    for (int r : t.resources) {
      if (r < 0 || r >= num_resources) {
        throw SimulationError("schedule", "resource id out of range");
      }
      if (resource_free[r] > now) return false;
    }
    return true;
  };

  ScheduleResult result;
  result.trace.assign(n, {});
  using Event = std::pair<double, int>;  // (end time, task)
  std::priority_queue<Event, std::vector<Event>, std::greater<>> running;

  double now = 0;
  int done = 0;
  while (done < n) {
    // Start every ready task whose resources are idle, in priority order.
    bool started = true;
    while (started) {
      started = false;
      for (auto it = ready.begin(); it != ready.end(); ++it) {
        int t = *it;
        if (!resource_available(tasks[t], now)) continue;
        double end = now + tasks[t].duration;
        for (int r : tasks[t].resources) resource_free[r] = end;
        result.trace[t] = {t, now, end};
        running.emplace(end, t);
        ready.erase(it);
        started = true;
        break;
      }
    }
    if (running.empty()) {
      if (done < n) throw SimulationError("schedule", "no runnable task");
      break;
    }
    // Advance to the next completion and release its successors.
    now = running.top().first;
    while (!running.empty() && running.top().first == now) {
      int t = running.top().second;
      running.pop();
      ++done;
      for (int s : succ[t]) {
        if (--unmet[s] == 0) ready.insert(s);
      }
    }
    result.makespan = std::max(result.makespan, now);
  }
  return result;
}

}  // namespace crossflow
