// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "crossflow/graph.hpp"
#include "crossflow/strategy.hpp"

namespace crossflow {

enum class CrossRole { kRingAllreduceStep, kKpReduceStep, kPipelineActivation };

const char* to_string(CrossRole role);

/// Device coordinate in the 4-D parallel space.
struct DeviceCoord {
  int lp = 0, dp = 0, kp1 = 0, kp2 = 0;

  bool operator==(const DeviceCoord&) const = default;
};

/// One kernel shard: the sharded kernel plus its position in parallel space.
struct Shard {
  int node_id = 0;  // original graph node
  int dp = 0, kp1 = 0, kp2 = 0;
  int stage = 0;  // pipeline stage of the node's layer
  KernelNode kernel;

  DeviceCoord device() const { return {stage, dp, kp1, kp2}; }
};

struct SuperEdge {
  int src = 0;  // shard indices
  int dst = 0;
  std::int64_t bytes = 0;  // total payload over all ring steps
  bool cross = false;
  CrossRole role = CrossRole::kPipelineActivation;
  int steps = 1;       // sequential ring steps folded into this edge
  int base_edge = -1;  // originating ComputeGraph edge, -1 for collectives
};

/// Parallelism-transformed compute graph. Shards with equal device
/// coordinates live on the same physical device.
struct SuperGraph {
  ComputeGraph base;
  ParallelismStrategy strategy;
  std::vector<Shard> shards;
  std::vector<SuperEdge> edges;
  std::vector<int> stage_of_layer;

  int num_stages() const { return strategy.lp; }
  std::int64_t num_device_coords() const { return strategy.total_devices(); }

  /// Linear device index, axes nested (lp, dp, kp1, kp2).
  std::int64_t device_index(const DeviceCoord& c) const {
    return ((static_cast<std::int64_t>(c.lp) * strategy.dp + c.dp) * strategy.kp1 +
            c.kp1) *
               strategy.kp2 +
           c.kp2;
  }

  std::int64_t total_shard_flops() const;
  std::int64_t cross_edge_count() const;
};

/// Split `dim` into `parts` contiguous pieces: the first dim%parts pieces get
/// the ceiling size. Throws TransformError when parts > dim.
std::vector<std::int64_t> split_sizes(std::int64_t dim, int parts);

/// Apply pipeline, data and kernel parallelism to the graph:
///  - lp slices layers into contiguous stages balanced by forward flops;
///  - dp splits the batch dimension and rings weight-gradient shards with
///    the all-reduce schedule (2(dp-1) steps of tensor/dp per edge);
///  - RC tiles every node over a kp1 x kp2 torus (m/kp1, n/kp2, k) with
///    output all-gather rings along both axes; CR cuts the contraction dim
///    kp1 ways and all-reduces the partial outputs.
SuperGraph transform(const ComputeGraph& graph, const ParallelismStrategy& strategy);

/// Balanced contiguous layer->stage assignment (greedy prefix split on
/// cumulative forward flops).
std::vector<int> slice_pipeline_stages(const ComputeGraph& graph, int lp);

std::string supergraph_to_dot(const SuperGraph& sg);
std::string supergraph_to_json(const SuperGraph& sg);

}  // namespace crossflow
