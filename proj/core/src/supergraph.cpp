// SPDX-License-Identifier: Apache-2.0
#include "crossflow/supergraph.hpp"

#include <map>
#include <sstream>

#include "nlohmann/json.hpp"

#include "crossflow/errors.hpp"

namespace crossflow {

const char* to_string(CrossRole role) {
  switch (role) {
    case CrossRole::kRingAllreduceStep: return "ring_allreduce_step";
    case CrossRole::kKpReduceStep: return "kp_reduce_step";
    case CrossRole::kPipelineActivation: return "pipeline_activation";
  }
  return "?";
}

std::vector<std::int64_t> split_sizes(std::int64_t dim, int parts) {
  if (parts > dim) {
    throw TransformError("transform", "sharding factor " + std::to_string(parts) +
                                          " exceeds dimension " + std::to_string(dim));
  }
  std::vector<std::int64_t> sizes(parts);
  std::int64_t base = dim / parts;
  std::int64_t rem = dim % parts;
  for (int i = 0; i < parts; ++i) {
    sizes[i] = base + (i < rem ? 1 : 0);
  }
  return sizes;
}

std::vector<int> slice_pipeline_stages(const ComputeGraph& graph, int lp) {
  int layers = graph.num_layers;
  if (lp > layers) {
    throw TransformError("transform", "pipeline depth " + std::to_string(lp) +
                                          " exceeds layer count " +
                                          std::to_string(layers));
  }
  std::vector<double> fwd_flops(layers, 0.0);
  for (const auto& node : graph.nodes) {
    if (node.role == KernelRole::kGemmFwd) {
      fwd_flops[node.layer] += static_cast<double>(node.flops());
    }
  }
  double total = 0;
  for (double f : fwd_flops) total += f;

  std::vector<int> stage(layers, 0);
  double cum = 0;
  int s = 0;
  for (int l = 0; l < layers; ++l) {
    stage[l] = s;
    cum += fwd_flops[l];
    bool must_cut = (layers - l - 1) == (lp - s - 1);  // one layer per stage left
    bool reached = cum >= total * static_cast<double>(s + 1) / lp;
    if (s < lp - 1 && (reached || must_cut)) ++s;
  }
  return stage;
}

SuperGraph transform(const ComputeGraph& graph, const ParallelismStrategy& strategy) {
  graph.validate();
  SuperGraph sg;
  sg.base = graph;
  sg.strategy = strategy;
  sg.stage_of_layer = slice_pipeline_stages(graph, strategy.lp);

  const int dp = strategy.dp;
  const int kp1 = strategy.kp1;
  const int kp2 = strategy.kp2;
  const bool rc = strategy.kind == KernelKind::kRC;
  const int prec = graph.precision_bytes;

  // shard index lookup: (node, dp, kp1, kp2) -> shard id
  auto shard_key = [&](int node, int d, int i, int j) {
    return ((static_cast<std::int64_t>(node) * dp + d) * kp1 + i) * kp2 + j;
  };
  std::vector<int> index(static_cast<size_t>(graph.nodes.size()) * dp * kp1 * kp2);

  for (const auto& node : graph.nodes) {
    bool batch_on_k = node.role == KernelRole::kGemmBwdWeight;
    std::vector<std::int64_t> dp_batch =
        split_sizes(batch_on_k ? node.k : node.m, dp);

    // Pointwise surcharge coefficient per (m*n) element, exact by builder
    // construction; contraction-split shards replicate partial products, so
    // the pointwise work is chargeable once (on the first contraction shard).
    std::int64_t pointwise_per_elem =
        node.elementwise_flops > 0 ? node.elementwise_flops / (node.m * node.n) : 0;

    for (int d = 0; d < dp; ++d) {
      std::vector<std::int64_t> ms, ns, ks;
      if (rc) {
        ms = split_sizes(batch_on_k ? node.m : dp_batch[d], kp1);
        ns = split_sizes(node.n, kp2);
        ks = {batch_on_k ? dp_batch[d] : node.k};
      } else {
        ms = {batch_on_k ? node.m : dp_batch[d]};
        ns = {node.n};
        ks = split_sizes(batch_on_k ? dp_batch[d] : node.k, kp1);
      }
      for (int i = 0; i < kp1; ++i) {
        for (int j = 0; j < kp2; ++j) {
          Shard sh;
          sh.node_id = node.id;
          sh.dp = d;
          sh.kp1 = i;
          sh.kp2 = j;
          sh.stage = sg.stage_of_layer[node.layer];
          sh.kernel = node;
          sh.kernel.m = rc ? ms[i] : ms[0];
          sh.kernel.n = rc ? ns[j] : ns[0];
          sh.kernel.k = rc ? ks[0] : ks[i];
          bool first_k_shard = rc ? true : (i == 0);
          sh.kernel.elementwise_flops =
              first_k_shard ? pointwise_per_elem * sh.kernel.m * sh.kernel.n : 0;
          index[shard_key(node.id, d, i, j)] = static_cast<int>(sg.shards.size());
          sg.shards.push_back(sh);
        }
      }
    }
  }

  auto shard_at = [&](int node, int d, int i, int j) -> int {
    return index[shard_key(node, d, i, j)];
  };
  auto out_bytes = [&](const Shard& s) { return s.kernel.m * s.kernel.n * prec; };

  // Data-dependency edges follow the original edges, replica by replica.
  for (int be = 0; be < static_cast<int>(graph.edges.size()); ++be) {
    const GraphEdge& e = graph.edges[be];
    int stage_src = sg.stage_of_layer[graph.nodes[e.src].layer];
    int stage_dst = sg.stage_of_layer[graph.nodes[e.dst].layer];
    for (int d = 0; d < dp; ++d) {
      for (int i = 0; i < kp1; ++i) {
        for (int j = 0; j < kp2; ++j) {
          SuperEdge se;
          se.src = shard_at(e.src, d, i, j);
          se.dst = shard_at(e.dst, d, i, j);
          se.bytes = out_bytes(sg.shards[se.src]);
          se.cross = stage_src != stage_dst;
          se.role = CrossRole::kPipelineActivation;
          se.steps = 1;
          se.base_edge = be;
          sg.edges.push_back(se);
        }
      }
    }
  }

  // Kernel-parallel collectives. RC: output blocks are all-gathered along
  // both torus axes so consumers can assemble their operands; only nodes with
  // successors pay for it. CR: partial sums must always be reduced.
  std::vector<bool> has_successor(graph.nodes.size(), false);
  for (const auto& e : graph.edges) has_successor[e.src] = true;

  for (const auto& node : graph.nodes) {
    if (rc) {
      if (!has_successor[node.id]) continue;
      for (int d = 0; d < dp; ++d) {
        for (int i = 0; i < kp1; ++i) {
          for (int j = 0; j < kp2; ++j) {
            int src = shard_at(node.id, d, i, j);
            std::int64_t block = out_bytes(sg.shards[src]);
            if (kp1 > 1) {
              SuperEdge se;
              se.src = src;
              se.dst = shard_at(node.id, d, (i + 1) % kp1, j);
              se.steps = kp1 - 1;
              se.bytes = static_cast<std::int64_t>(se.steps) * block;
              se.cross = true;
              se.role = CrossRole::kKpReduceStep;
              sg.edges.push_back(se);
            }
            if (kp2 > 1) {
              SuperEdge se;
              se.src = src;
              se.dst = shard_at(node.id, d, i, (j + 1) % kp2);
              se.steps = kp2 - 1;
              se.bytes = static_cast<std::int64_t>(se.steps) * block;
              se.cross = true;
              se.role = CrossRole::kKpReduceStep;
              sg.edges.push_back(se);
            }
          }
        }
      }
    } else if (kp1 > 1) {
      for (int d = 0; d < dp; ++d) {
        for (int i = 0; i < kp1; ++i) {
          int src = shard_at(node.id, d, i, 0);
          std::int64_t output = out_bytes(sg.shards[src]);
          std::int64_t step_bytes = (output + kp1 - 1) / kp1;
          SuperEdge se;
          se.src = src;
          se.dst = shard_at(node.id, d, (i + 1) % kp1, 0);
          se.steps = 2 * (kp1 - 1);
          se.bytes = static_cast<std::int64_t>(se.steps) * step_bytes;
          se.cross = true;
          se.role = CrossRole::kKpReduceStep;
          sg.edges.push_back(se);
        }
      }
    }
  }

  // Data-parallel gradient exchange: a ring per weight tensor shard.
  if (dp > 1) {
    for (const auto& node : graph.nodes) {
      if (node.role != KernelRole::kGemmBwdWeight) continue;
      for (int i = 0; i < kp1; ++i) {
        for (int j = 0; j < kp2; ++j) {
          for (int d = 0; d < dp; ++d) {
            int src = shard_at(node.id, d, i, j);
            std::int64_t tensor = out_bytes(sg.shards[src]);
            std::int64_t step_bytes = (tensor + dp - 1) / dp;
            SuperEdge se;
            se.src = src;
            se.dst = shard_at(node.id, (d + 1) % dp, i, j);
            se.steps = 2 * (dp - 1);
            se.bytes = static_cast<std::int64_t>(se.steps) * step_bytes;
            se.cross = true;
            se.role = CrossRole::kRingAllreduceStep;
            sg.edges.push_back(se);
          }
        }
      }
    }
  }

  return sg;
}

std::int64_t SuperGraph::total_shard_flops() const {
  std::int64_t total = 0;
  for (const auto& s : shards) total += s.kernel.flops();
  return total;
}

std::int64_t SuperGraph::cross_edge_count() const {
  std::int64_t n = 0;
  for (const auto& e : edges) n += e.cross ? 1 : 0;
  return n;
}

std::string supergraph_to_dot(const SuperGraph& sg) {
  std::ostringstream out;
  out << "digraph supergraph {\n";
  for (size_t i = 0; i < sg.shards.size(); ++i) {
    const Shard& s = sg.shards[i];
    out << "  s" << i << " [label=\"n" << s.node_id << " " << to_string(s.kernel.role)
        << "\\n(" << s.kernel.m << "," << s.kernel.n << "," << s.kernel.k << ")\\nd"
        << s.dp << " k" << s.kp1 << "." << s.kp2 << " p" << s.stage << "\"];\n";
  }
  for (const auto& e : sg.edges) {
    out << "  s" << e.src << " -> s" << e.dst;
    if (e.cross) {
      out << " [color=red,label=\"" << to_string(e.role) << " " << e.bytes << "B\"]";
    }
    out << ";\n";
  }
  out << "}\n";
  return out.str();
}

std::string supergraph_to_json(const SuperGraph& sg) {
  nlohmann::json j;
  j["strategy"] = sg.strategy.to_string();
  j["num_shards"] = sg.shards.size();
  j["num_device_coords"] = sg.num_device_coords();
  nlohmann::json shards = nlohmann::json::array();
  for (const auto& s : sg.shards) {
    shards.push_back({{"node", s.node_id},
                      {"role", to_string(s.kernel.role)},
                      {"dp", s.dp},
                      {"kp1", s.kp1},
                      {"kp2", s.kp2},
                      {"stage", s.stage},
                      {"m", s.kernel.m},
                      {"n", s.kernel.n},
                      {"k", s.kernel.k}});
  }
  j["shards"] = shards;
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& e : sg.edges) {
    edges.push_back({{"src", e.src},
                     {"dst", e.dst},
                     {"bytes", e.bytes},
                     {"kind", e.cross ? "cross" : "local"},
                     {"role", e.cross ? to_string(e.role) : "local"},
                     {"steps", e.steps}});
  }
  j["edges"] = edges;
  return j.dump(2);
}

}  // namespace crossflow
