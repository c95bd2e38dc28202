// SPDX-License-Identifier: Apache-2.0
#include "crossflow/system.hpp"

namespace crossflow {

std::int64_t Topology::size() const {
  std::int64_t n = 1;
  for (int d : dims) n *= d;
  return n;
}

int Topology::ports() const {
  if (kind == TopologyKind::kCrossbar) {
    return static_cast<int>(size()) - 1;
  }
  // Mesh/torus: one port per direction per dimension, skipping degenerate
  // dims of extent 1.
  int p = 0;
  for (int d : dims) {
    if (d > 1) p += 2;
  }
  return p;
}

}  // namespace crossflow
