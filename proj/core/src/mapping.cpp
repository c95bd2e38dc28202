// SPDX-License-Identifier: Apache-2.0
#include "crossflow/mapping.hpp"

#include <algorithm>
#include <limits>
#include <set>
#include <sstream>

#include "nlohmann/json.hpp"

#include "crossflow/errors.hpp"

namespace crossflow {

namespace {

std::vector<int> coords_of(std::int64_t index, const std::vector<int>& dims) {
  // Row-major: the last dim varies fastest.
  std::vector<int> c(dims.size());
  for (int d = static_cast<int>(dims.size()) - 1; d >= 0; --d) {
    c[d] = static_cast<int>(index % dims[d]);
    index /= dims[d];
  }
  return c;
}

std::int64_t index_of(const std::vector<int>& coords, const std::vector<int>& dims) {
  std::int64_t idx = 0;
  for (size_t d = 0; d < dims.size(); ++d) {
    idx = idx * dims[d] + coords[d];
  }
  return idx;
}

// Steps along one dimension from `from` toward `to`; torus picks the shorter
// wrap direction (ties go forward).
std::vector<int> dim_path(int from, int to, int extent, bool torus) {
  std::vector<int> path;
  if (from == to) return path;
  int fwd = (to - from + extent) % extent;
  int bwd = (from - to + extent) % extent;
  bool forward = torus ? fwd <= bwd : to > from;
  int cur = from;
  int remaining = torus ? std::min(fwd, bwd) : std::abs(to - from);
  for (int s = 0; s < remaining; ++s) {
    cur = forward ? (cur + 1) % extent : (cur - 1 + extent) % extent;
    path.push_back(cur);
  }
  return path;
}

// Dimension-ordered route within one regular topology; emits endpoint
// indices (not yet node ids).
std::vector<std::int64_t> topology_route(std::int64_t a, std::int64_t b,
                                         const Topology& topo) {
  std::vector<std::int64_t> nodes;
  if (a == b) return nodes;
  if (topo.kind == TopologyKind::kCrossbar) {
    nodes.push_back(b);
    return nodes;
  }
  bool torus = topo.kind == TopologyKind::kTorus;
  std::vector<int> cur = coords_of(a, topo.dims);
  std::vector<int> dst = coords_of(b, topo.dims);
  for (size_t d = 0; d < topo.dims.size(); ++d) {
    for (int step : dim_path(cur[d], dst[d], topo.dims[d], torus)) {
      cur[d] = step;
      nodes.push_back(index_of(cur, topo.dims));
    }
  }
  return nodes;
}

void append_intra(Route& r, std::int64_t a, std::int64_t b, int package,
                  const SystemGraph& sys) {
  std::int64_t prev = a;
  for (std::int64_t local : topology_route(sys.local_of(a), sys.local_of(b),
                                           sys.intra_topology)) {
    std::int64_t node = sys.node_id(package, static_cast<int>(local));
    r.push_back({0, prev, node});
    prev = node;
  }
}

}  // namespace

Route route(std::int64_t a, std::int64_t b, const SystemGraph& sys) {
  if (a < 0 || b < 0 || a >= sys.total_nodes() || b >= sys.total_nodes()) {
    throw MappingError("route", "node id out of range");
  }
  Route r;
  if (a == b) return r;
  int pa = sys.package_of(a);
  int pb = sys.package_of(b);
  if (pa == pb) {
    append_intra(r, a, b, pa, sys);
    return r;
  }
  // Egress through local coordinate 0 of each package.
  std::int64_t egress_a = sys.node_id(pa, 0);
  std::int64_t egress_b = sys.node_id(pb, 0);
  append_intra(r, a, egress_a, pa, sys);
  std::int64_t prev_pkg = pa;
  for (std::int64_t pkg : topology_route(pa, pb, sys.inter_topology)) {
    r.push_back({1, sys.node_id(static_cast<int>(prev_pkg), 0),
                 sys.node_id(static_cast<int>(pkg), 0)});
    prev_pkg = pkg;
  }
  append_intra(r, egress_b, b, pb, sys);
  return r;
}

Mapping map_devices_with_order(const SuperGraph& sg, const SystemGraph& sys,
                               const std::array<int, 4>& order, int order_index) {
  const std::int64_t devices = sg.num_device_coords();
  if (devices > sys.total_nodes()) {
    throw MappingError("map_devices",
                       "supergraph needs " + std::to_string(devices) +
                           " devices but the system has " +
                           std::to_string(sys.total_nodes()) + " nodes");
  }

  // extents indexed by axis id: 0=kp1, 1=kp2, 2=dp, 3=lp.
  const std::array<int, 4> extent = {sg.strategy.kp1, sg.strategy.kp2,
                                     sg.strategy.dp, sg.strategy.lp};

  Mapping m;
  m.chosen_order = order;
  m.chosen_order_index = order_index;
  m.device_to_node.assign(devices, -1);

  // Mixed-radix walk: order[0] varies fastest; linear position l maps to
  // the l-th system node in row-major package/local order.
  for (std::int64_t l = 0; l < devices; ++l) {
    std::int64_t rest = l;
    std::array<int, 4> axis_val{};
    for (int a = 0; a < 4; ++a) {
      axis_val[order[a]] = static_cast<int>(rest % extent[order[a]]);
      rest /= extent[order[a]];
    }
    DeviceCoord c{axis_val[3], axis_val[2], axis_val[0], axis_val[1]};
    m.device_to_node[sg.device_index(c)] = l;
  }

  for (int e = 0; e < static_cast<int>(sg.edges.size()); ++e) {
    const SuperEdge& se = sg.edges[e];
    if (!se.cross) continue;
    RoutedEdge re;
    re.edge_index = e;
    re.src_node = m.device_to_node[sg.device_index(sg.shards[se.src].device())];
    re.dst_node = m.device_to_node[sg.device_index(sg.shards[se.dst].device())];
    re.links = route(re.src_node, re.dst_node, sys);
    for (const Link& link : re.links) {
      ++m.link_sharing[link];
    }
    m.total_hops += static_cast<std::int64_t>(re.links.size());
    m.edge_routes.push_back(std::move(re));
  }

  m.max_sharing = 0;
  for (const auto& [link, count] : m.link_sharing) {
    m.max_sharing = std::max(m.max_sharing, count);
  }
  return m;
}

Mapping map_devices(const SuperGraph& sg, const SystemGraph& sys) {
  std::array<int, 4> axes = {0, 1, 2, 3};
  Mapping best;
  bool have_best = false;
  std::set<std::vector<std::int64_t>> seen_layouts;

  int order_index = 0;
  std::array<int, 4> perm = axes;
  std::sort(perm.begin(), perm.end());
  do {
    Mapping cand = map_devices_with_order(sg, sys, perm, order_index);
    ++order_index;
    if (!seen_layouts.insert(cand.device_to_node).second) continue;
    if (!have_best || cand.max_sharing < best.max_sharing ||
        (cand.max_sharing == best.max_sharing && cand.total_hops < best.total_hops)) {
      best = std::move(cand);
      have_best = true;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));

  return best;
}

std::vector<double> effective_bandwidths(const Mapping& m, const SystemGraph& sys) {
  std::vector<double> out;
  out.reserve(m.edge_routes.size());
  for (const auto& re : m.edge_routes) {
    double bw = std::numeric_limits<double>::infinity();
    for (const Link& link : re.links) {
      double raw = link.level == 0 ? sys.intra_link.bandwidth : sys.inter_link.bandwidth;
      int share = m.link_sharing.at(link);
      bw = std::min(bw, raw / share);
    }
    out.push_back(bw);
  }
  return out;
}

double route_latency(const Route& r, const SystemGraph& sys) {
  double total = 0;
  for (const Link& link : r) {
    total += link.level == 0 ? sys.intra_link.latency : sys.inter_link.latency;
  }
  return total;
}

std::string mapping_to_json(const Mapping& m, const SuperGraph& sg) {
  nlohmann::json j;
  j["order"] = m.chosen_order;
  j["order_index"] = m.chosen_order_index;
  j["max_link_sharing"] = m.max_sharing;
  j["total_hops"] = m.total_hops;
  j["device_to_node"] = m.device_to_node;
  nlohmann::json routes = nlohmann::json::array();
  for (const auto& re : m.edge_routes) {
    nlohmann::json links = nlohmann::json::array();
    for (const Link& l : re.links) {
      links.push_back({{"level", l.level}, {"from", l.from}, {"to", l.to}});
    }
    routes.push_back({{"edge", re.edge_index},
                      {"src_node", re.src_node},
                      {"dst_node", re.dst_node},
                      {"links", links}});
  }
  j["routes"] = routes;
  nlohmann::json hist = nlohmann::json::object();
  std::map<int, int> sharing_hist;
  for (const auto& [link, count] : m.link_sharing) ++sharing_hist[count];
  for (const auto& [count, links] : sharing_hist) {
    hist[std::to_string(count)] = links;
  }
  j["link_sharing_histogram"] = hist;
  (void)sg;
  return j.dump(2);
}

}  // namespace crossflow
