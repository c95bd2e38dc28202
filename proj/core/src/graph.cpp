// SPDX-License-Identifier: Apache-2.0
#include "crossflow/graph.hpp"

#include <algorithm>
#include <queue>

#include "crossflow/errors.hpp"

namespace crossflow {

const char* to_string(KernelRole role) {
  switch (role) {
    case KernelRole::kGemmFwd: return "gemm_fwd";
    case KernelRole::kGemmBwdInput: return "gemm_bwd_input";
    case KernelRole::kGemmBwdWeight: return "gemm_bwd_weight";
    case KernelRole::kElementwise: return "elementwise";
  }
  return "?";
}

std::int64_t ComputeGraph::total_flops() const {
  std::int64_t total = 0;
  for (const auto& n : nodes) total += n.flops();
  return total;
}

void ComputeGraph::validate() const {
  int n = static_cast<int>(nodes.size());
  for (const auto& e : edges) {
    if (e.src < 0 || e.src >= n || e.dst < 0 || e.dst >= n) {
      throw ConfigError("graph", "edge endpoint out of range");
    }
  }
  // Kahn toposort for acyclicity.
  std::vector<int> indeg(n, 0);
  for (const auto& e : edges) ++indeg[e.dst];
  std::queue<int> q;
  for (int i = 0; i < n; ++i) {
    if (indeg[i] == 0) q.push(i);
  }
  int seen = 0;
  std::vector<std::vector<int>> out(n);
  for (const auto& e : edges) out[e.src].push_back(e.dst);
  while (!q.empty()) {
    int u = q.front();
    q.pop();
    ++seen;
    for (int v : out[u]) {
      if (--indeg[v] == 0) q.push(v);
    }
  }
  if (seen != n) throw ConfigError("graph", "compute graph has a cycle");
}

namespace {

void check_gemm_dims(std::int64_t m, std::int64_t n, std::int64_t k) {
  if (m < 1 || n < 1 || k < 1) {
    throw ConfigError("graph", "GEMM dims must be >= 1");
  }
}

std::int64_t out_bytes(const KernelNode& node, int precision) {
  return node.m * node.n * precision;
}

}  // namespace

ComputeGraph build_gemm_graph(std::int64_t m, std::int64_t n, std::int64_t k,
                              int precision_bytes) {
  check_gemm_dims(m, n, k);
  ComputeGraph g;
  g.precision_bytes = precision_bytes;
  g.num_layers = 1;
  KernelNode node;
  node.id = 0;
  node.role = KernelRole::kGemmFwd;
  node.m = m;
  node.n = n;
  node.k = k;
  node.layer = 0;
  g.nodes.push_back(node);
  return g;
}

ComputeGraph build_ffn_graph(int layers, std::int64_t m, std::int64_t n,
                             std::int64_t k, int precision_bytes) {
  check_gemm_dims(m, n, k);
  if (layers < 1) throw ConfigError("graph", "layer count must be >= 1");
  ComputeGraph g;
  g.precision_bytes = precision_bytes;
  g.num_layers = layers;
  for (int l = 0; l < layers; ++l) {
    KernelNode node;
    node.id = l;
    node.role = KernelRole::kGemmFwd;
    node.m = m;
    node.n = n;
    node.k = k;
    node.layer = l;
    g.nodes.push_back(node);
    if (l > 0) {
      g.edges.push_back({l - 1, l, out_bytes(g.nodes[l - 1], precision_bytes)});
    }
  }
  return g;
}

ComputeGraph build_lm_graph(const ModelSpec::Lm& lm, int precision_bytes) {
  ModelSpec spec;
  spec.kind = ModelSpec::Kind::kLm;
  spec.lm = lm;
  spec.precision_bytes = precision_bytes;
  spec.validate();

  ComputeGraph g;
  g.precision_bytes = precision_bytes;
  int layers = static_cast<int>(lm.num_layers);
  g.num_layers = layers + 1;  // recurrent layers + projection

  std::int64_t tokens = lm.batch_size * lm.seq_len;
  std::int64_t hidden = lm.hidden_dim;

  // Forward chain: fused cell GEMM per recurrent layer, then the projection.
  std::vector<int> fwd_ids;
  auto add_fwd = [&](std::int64_t n, std::int64_t k, int layer,
                     std::int64_t pointwise) {
    KernelNode node;
    node.id = static_cast<int>(g.nodes.size());
    node.role = KernelRole::kGemmFwd;
    node.m = tokens;
    node.n = n;
    node.k = k;
    node.layer = layer;
    node.elementwise_flops = pointwise;
    g.nodes.push_back(node);
    fwd_ids.push_back(node.id);
    return node.id;
  };

  for (int l = 0; l < layers; ++l) {
    std::int64_t pointwise = kLstmPointwiseFlopsPerGateElement * tokens * 4 * hidden;
    int id = add_fwd(4 * hidden, 2 * hidden, l, pointwise);
    if (l > 0) {
      g.edges.push_back({fwd_ids[l - 1], id, out_bytes(g.nodes[fwd_ids[l - 1]],
                                                       precision_bytes)});
    }
  }
  int proj = add_fwd(lm.vocab_size, hidden, layers, 0);
  if (layers > 0) {
    g.edges.push_back(
        {fwd_ids[layers - 1], proj, out_bytes(g.nodes[fwd_ids[layers - 1]],
                                              precision_bytes)});
  }

  // Backward pair per forward GEMM: grad-input (m,k,n), grad-weight (k,n,m).
  // The gradient flows from the projection's grad-input node back down the
  // layer chain; each layer's grad-weight consumes that same gradient plus
  // the activations of the layer below.
  auto add_bwd = [&](const KernelNode& fwd, KernelRole role) {
    KernelNode node;
    node.id = static_cast<int>(g.nodes.size());
    node.role = role;
    if (role == KernelRole::kGemmBwdInput) {
      node.m = fwd.m;
      node.n = fwd.k;
      node.k = fwd.n;
    } else {
      node.m = fwd.k;
      node.n = fwd.n;
      node.k = fwd.m;
    }
    node.layer = fwd.layer;
    g.nodes.push_back(node);
    return node.id;
  };

  int grad_src = -1;  // producer of the gradient flowing into the layer
  for (int idx = static_cast<int>(fwd_ids.size()) - 1; idx >= 0; --idx) {
    const KernelNode fwd = g.nodes[fwd_ids[idx]];
    int bwd_input = add_bwd(fwd, KernelRole::kGemmBwdInput);
    int bwd_weight = add_bwd(fwd, KernelRole::kGemmBwdWeight);
    if (grad_src < 0) {
      // Topmost layer: backward starts once the forward pass finished.
      g.edges.push_back({fwd.id, bwd_input, out_bytes(fwd, precision_bytes)});
      g.edges.push_back({fwd.id, bwd_weight, out_bytes(fwd, precision_bytes)});
    } else {
      std::int64_t grad_bytes = out_bytes(g.nodes[grad_src], precision_bytes);
      g.edges.push_back({grad_src, bwd_input, grad_bytes});
      g.edges.push_back({grad_src, bwd_weight, grad_bytes});
    }
    if (idx > 0) {
      // Activations of the layer below feed this layer's weight gradient.
      int below = fwd_ids[idx - 1];
      g.edges.push_back({below, bwd_weight, out_bytes(g.nodes[below], precision_bytes)});
    }
    grad_src = bwd_input;
  }

  g.validate();
  return g;
}

ComputeGraph build_graph(const ModelSpec& spec) {
  spec.validate();
  if (spec.kind == ModelSpec::Kind::kGemm) {
    return build_gemm_graph(spec.gemm.m, spec.gemm.n, spec.gemm.k,
                            spec.precision_bytes);
  }
  return build_lm_graph(spec.lm, spec.precision_bytes);
}

}  // namespace crossflow
