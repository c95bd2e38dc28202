// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace crossflow {

enum class TopologyKind { kMesh, kTorus, kCrossbar };

const char* to_string(TopologyKind k);

/// A regular topology at one network level; dims multiply to the endpoint
/// count. Crossbar is any-to-any single hop (dims = {n}).
struct Topology {
  TopologyKind kind = TopologyKind::kMesh;
  std::vector<int> dims;

  std::int64_t size() const;
  /// Number of outgoing ports of one endpoint; the node's aggregate network
  /// bandwidth at this level is split evenly across them.
  int ports() const;
};

/// Per-level physical link characteristics, filled by arch generation or
/// given directly in the system config.
struct LinkSpec {
  double bandwidth = 0;  // bits/s per topology link
  double latency = 0;    // s per hop
};

/// Two-level system: packages connected by the inter topology, nodes within
/// a package by the intra topology.
struct SystemGraph {
  int num_packages = 1;
  int nodes_per_package = 1;
  Topology intra_topology;
  Topology inter_topology;
  LinkSpec intra_link;  // bandwidth 0 = must be filled from ArchSpec
  LinkSpec inter_link;

  std::int64_t total_nodes() const {
    return static_cast<std::int64_t>(num_packages) * nodes_per_package;
  }

  /// Throws ConfigError unless topology dims multiply to the node/package
  /// counts at each level.
  void validate() const;

  int package_of(std::int64_t node) const {
    return static_cast<int>(node / nodes_per_package);
  }
  int local_of(std::int64_t node) const {
    return static_cast<int>(node % nodes_per_package);
  }
  std::int64_t node_id(int package, int local) const {
    return static_cast<std::int64_t>(package) * nodes_per_package + local;
  }
};

}  // namespace crossflow
