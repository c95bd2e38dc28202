// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "crossflow/model.hpp"

namespace crossflow {

enum class KernelRole { kGemmFwd, kGemmBwdInput, kGemmBwdWeight, kElementwise };

const char* to_string(KernelRole role);

/// One kernel in the compute graph. GEMM semantics: C[m,n] = A[m,k] * B[k,n],
/// A holds activations, B holds weights.
struct KernelNode {
  int id = 0;
  KernelRole role = KernelRole::kGemmFwd;
  std::int64_t m = 1, n = 1, k = 1;
  int layer = 0;  // pipeline-sliceable layer index
  std::int64_t elementwise_flops = 0;  // fused pointwise surcharge

  std::int64_t flops() const { return 2 * m * n * k + elementwise_flops; }
  std::int64_t gemm_flops() const { return 2 * m * n * k; }
};

struct GraphEdge {
  int src = 0;
  int dst = 0;
  std::int64_t bytes = 0;
};

/// DAG of kernels connected by local (same-device until transformed) edges.
struct ComputeGraph {
  std::vector<KernelNode> nodes;
  std::vector<GraphEdge> edges;
  int precision_bytes = 4;
  int num_layers = 1;

  std::int64_t total_flops() const;
  /// Throws ConfigError on dangling edges or cycles.
  void validate() const;
};

/// Single forward GEMM workload.
ComputeGraph build_gemm_graph(std::int64_t m, std::int64_t n, std::int64_t k,
                              int precision_bytes);

/// LSTM-style LM: per recurrent layer one fused cell GEMM
/// (m = batch*seq, n = 4*hidden, k = 2*hidden) and per layer plus the vocab
/// projection the rule-generated backward pair: grad-input (m,k,n) and
/// grad-weight (k,n,m). Gate pointwise math is folded into a flop surcharge
/// on the cell GEMMs rather than separate nodes.
ComputeGraph build_lm_graph(const ModelSpec::Lm& lm, int precision_bytes);

/// Forward-only layer chain of identical GEMMs; the shape that pipeline and
/// kernel parallelism examples are usually drawn with.
ComputeGraph build_ffn_graph(int layers, std::int64_t m, std::int64_t n,
                             std::int64_t k, int precision_bytes);

ComputeGraph build_graph(const ModelSpec& spec);

/// Pointwise LSTM cell work per gate output element (sigmoid/tanh plus the
/// cell/hidden update ops), charged on top of the 2mnk GEMM flops.
inline constexpr std::int64_t kLstmPointwiseFlopsPerGateElement = 2;

}  // namespace crossflow
