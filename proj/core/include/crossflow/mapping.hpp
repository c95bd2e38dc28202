// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "crossflow/supergraph.hpp"
#include "crossflow/system.hpp"

namespace crossflow {

/// Directed physical link. For inter-package hops the endpoints are the
/// packages' egress nodes.
struct Link {
  int level = 0;  // 0 = intra-package, 1 = inter-package
  std::int64_t from = 0;
  std::int64_t to = 0;

  auto operator<=>(const Link&) const = default;
};

using Route = std::vector<Link>;

/// X-Y (dimension-ordered) path between two nodes. Tori take the shorter
/// wrap direction; hierarchical routes leave through the source package's
/// egress node (local coordinate 0), cross packages X-Y, and enter through
/// the destination package's egress.
Route route(std::int64_t a, std::int64_t b, const SystemGraph& sys);

/// One routed cross edge of the supergraph.
struct RoutedEdge {
  int edge_index = 0;  // index into SuperGraph::edges
  std::int64_t src_node = 0;
  std::int64_t dst_node = 0;
  Route links;
};

struct Mapping {
  /// Device linear index (SuperGraph::device_index) -> system node id.
  std::vector<std::int64_t> device_to_node;
  std::vector<RoutedEdge> edge_routes;  // cross edges only
  std::map<Link, int> link_sharing;
  std::array<int, 4> chosen_order{};  // axes 0=kp1 1=kp2 2=dp 3=lp, innermost first
  int chosen_order_index = 0;
  int max_sharing = 0;
  std::int64_t total_hops = 0;

  std::int64_t node_of(const SuperGraph& sg, const DeviceCoord& c) const {
    return device_to_node[sg.device_index(c)];
  }
};

/// Greedy wrap-around layout evaluated over all 24 axis orderings; returns
/// the candidate minimizing max link sharing (ties: total hops, then lowest
/// ordering index). Throws MappingError when devices outnumber nodes.
Mapping map_devices(const SuperGraph& sg, const SystemGraph& sys);

/// Layout for one fixed axis ordering (exposed for the optimality checks).
Mapping map_devices_with_order(const SuperGraph& sg, const SystemGraph& sys,
                               const std::array<int, 4>& order, int order_index);

/// Per routed edge: min over its links of bandwidth/sharing (bits/s).
std::vector<double> effective_bandwidths(const Mapping& m, const SystemGraph& sys);

/// Sum of per-hop link latencies along a route.
double route_latency(const Route& r, const SystemGraph& sys);

std::string mapping_to_json(const Mapping& m, const SuperGraph& sg);

}  // namespace crossflow
