// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "crossflow/strategy.hpp"

namespace crossflow {

/// Black-box objective over the flattened budget-fraction vector W
/// (`groups` simplex groups of `group_size` entries each).
using Objective = std::function<double(const std::vector<double>&)>;

struct SearchConfig {
  double eta = 0.05;   // learning rate
  double beta = 0.5;   // exponential parameter-averaging factor
  int max_steps = 100;  // T
  int restarts = 10;    // S
  double fd_step = 1e-3;
  double tolerance = 1e-6;
  std::uint64_t seed = 0;
  int groups = 3;
  int group_size = 7;
};

struct SearchTracePoint {
  int step = 0;
  std::vector<double> w;
  double value = 0;
};

struct SearchResult {
  std::vector<double> w;
  double value = 0;
  int best_start = 0;
  std::vector<std::vector<SearchTracePoint>> traces;  // one per restart
};

/// Per-group Euclidean projection onto {x >= 0, sum(x) <= 1}. Clips
/// negatives; falls back to the sorting-based simplex projection only when
/// the clipped sum still exceeds 1.
std::vector<double> project_constraints(std::vector<double> v, int groups,
                                        int group_size);

/// Central finite differences; probe points are projected to feasibility
/// before evaluation.
std::vector<double> estimate_gradient(const Objective& f,
                                      const std::vector<double>& w, double h,
                                      int groups, int group_size);

/// Projected gradient descent with exponential averaging in parameter space.
/// Each step: W <- W - eta*g; renormalize only when ||W|| exceeds 1 (an
/// unconditional divide would push feasible interior points toward the
/// simplex corners); average M <- beta*M + (1-beta)*What; project. Returns
/// the best-seen iterate, not the last.
SearchResult gd_search(const Objective& f, const SearchConfig& cfg,
                       const std::vector<double>& init);

/// S restarts from uniform Dirichlet starting points per group; returns the
/// best result (ties: lowest start index).
SearchResult multi_start(const Objective& f, const SearchConfig& cfg);

/// All factorizations of total_devices into strategy shapes: (kp1,kp2,dp,lp)
/// for RC and (kp1,dp,lp) for CR, with lp capped at max_lp. Memory
/// feasibility of each candidate is the caller's concern.
std::vector<ParallelismStrategy> enumerate_strategies(std::int64_t total_devices,
                                                      int max_lp);

}  // namespace crossflow
