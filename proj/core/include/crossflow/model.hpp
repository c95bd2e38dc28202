// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>

namespace crossflow {

/// Workload description: a single GEMM or an LSTM-style language model.
struct ModelSpec {
  enum class Kind { kGemm, kLm };

  struct Gemm {
    std::int64_t m = 1;
    std::int64_t n = 1;
    std::int64_t k = 1;
  };

  struct Lm {
    std::int64_t hidden_dim = 1;
    std::int64_t batch_size = 1;
    std::int64_t vocab_size = 1;
    std::int64_t num_layers = 1;
    std::int64_t seq_len = 1;
  };

  Kind kind = Kind::kGemm;
  Gemm gemm;
  Lm lm;
  int precision_bytes = 4;

  /// Layers available for pipeline slicing (recurrent layers + projection
  /// for LM; 1 for a lone GEMM).
  std::int64_t pipeline_layers() const {
    return kind == Kind::kGemm ? 1 : lm.num_layers + 1;
  }

  void validate() const;
};

}  // namespace crossflow
