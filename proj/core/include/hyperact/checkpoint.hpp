#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "hyperact/dataset.hpp"
#include "hyperact/graph.hpp"
#include "hyperact/model.hpp"

namespace hyperact {

/// Everything needed to classify new signals and to inspect the learned
/// node space without the training data: the model configuration and
/// parameters, the label space, the fitted normalizer and the eval-mode node
/// embeddings.
struct Checkpoint {
    std::uint64_t seed = 0;
    ModelParams params;          // carries the ModelConfig
    LabelSpace space;
    std::size_t num_users = 0;
    std::vector<std::string> node_names;
    Normalizer normalizer;
    Matrix node_embeddings;      // |V| x embed_dim, dropout off
    double best_val_mcc = 0.0;
    std::uint64_t best_epoch = 0;

    std::vector<NodeType> node_types() const;
};

// --- file format -------------------------------------------------------------
//
// Binary, all integers and doubles little-endian regardless of host order.
//
//   bytes 0..15   magic "HYPERACTCKPT0001"
//   u64           seed
//   model config: u64 num_layers, embed_dim, head_dim, input_dim;
//                 f64 dropout; u8 activation (0 leaky_relu, 1 relu, 2 sigmoid);
//                 u8 normalization (0 symmetric, 1 row);
//                 u8 edge_hetero, u8 contrastive
//   label space:  u64 |C| then |C| strings; u64 |A| then |A| strings
//                 (string = u64 byte length + UTF-8 bytes)
//   u64           num_users
//   u64 node count, then that many strings (node names, global order)
//   normalizer:   u8 mode (0 zscore, 1 minmax); u64 M; M f64 shifts;
//                 M f64 scales; u64 degenerate count + that many u64 indices
//   f64           best_val_mcc; u64 best_epoch
//   matrices:     u64 count, then per matrix: string name, u64 rows,
//                 u64 cols, rows*cols f64 row-major values. The parameter
//                 matrices appear in ModelParams::named() order, followed by
//                 one extra matrix named "node_embeddings".

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace hyperact
