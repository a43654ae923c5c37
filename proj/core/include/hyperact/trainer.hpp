#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hyperact/checkpoint.hpp"
#include "hyperact/graph.hpp"
#include "hyperact/loss.hpp"
#include "hyperact/metrics.hpp"
#include "hyperact/model.hpp"
#include "hyperact/optimizer.hpp"

namespace hyperact {

struct TrainConfig {
    OptimizerConfig optimizer;
    LossConfig loss;
    ModelConfig model;
    std::size_t batch_size = 256;
    std::size_t epochs = 200;
    std::uint64_t seed = 0;
    /// Early stopping: stop after this many epochs without a validation
    /// improvement. Off by default (fixed epoch budget).
    std::optional<std::size_t> patience;
    /// Keep the best-validation parameters as the checkpoint; with false the
    /// final epoch wins and validation only feeds the log.
    bool select_best = true;
    double threshold = 0.5;

    void validate() const;
};

struct EpochStats {
    std::size_t epoch = 0;          // 1-based
    double train_bce = 0.0;         // mean over the epoch's steps
    double train_contrastive = 0.0;
    double val_mcc = 0.0;           // overall, dropout off
};

struct TrainState {
    ModelParams params;              // final-epoch parameters
    ModelParams best_params;         // validation-selected checkpoint
    Matrix best_node_embeddings;     // eval-mode embeddings of best_params
    double best_val_mcc = 0.0;
    std::size_t best_epoch = 0;
    std::vector<EpochStats> history;
};

/// Minibatch training of the full objective. The graph must be built from
/// the training set only; every step recomputes the full graph forward (the
/// node set is tiny) plus the batch classification, then takes one optimizer
/// update over all parameters. Per epoch the validation set is scored with
/// dropout disabled. Deterministic per (config, seed): identical runs give
/// bit-identical loss histories.
///
/// When `log` is given, one tab-separated line per epoch:
///   epoch, train BCE, train contrastive, val overall MCC.
///
/// Throws NumericError with epoch/batch diagnostics if the loss goes
/// non-finite.
TrainState train(const HeteroHypergraph& graph,
                 const std::vector<LabeledInstance>& train_set,
                 const std::vector<LabeledInstance>& val_set, const LabelSpace& space,
                 const TrainConfig& cfg, std::ostream* log = nullptr);

/// Batched eval-mode scoring of a dataset against fixed node embeddings.
MetricsReport evaluate_instances(ModelParams& params, const HeteroHypergraph& graph,
                                 const GraphOperators& ops, const Matrix& node_embeddings,
                                 const std::vector<LabeledInstance>& dataset,
                                 const LabelSpace& space, double threshold = 0.5,
                                 std::size_t batch_size = 1024);

/// Checkpoint-level evaluation on raw (unnormalized) instances; applies the
/// stored normalizer first. The dataset's label space must match the
/// checkpoint's exactly, else ConfigError.
MetricsReport evaluate(const Checkpoint& ckpt, std::vector<LabeledInstance> dataset,
                       const LabelSpace& space, double threshold = 0.5);

/// Assembles the persisted artifact from a finished run.
Checkpoint make_checkpoint(const TrainState& state, const HeteroHypergraph& graph,
                           const LabelSpace& space, const Normalizer& normalizer,
                           std::uint64_t seed);

struct AblationOutcome {
    std::string variant;  // "full", "no_edge_hetero", "no_contrastive"
    bool ok = false;
    std::string error;
    double best_val_mcc = 0.0;
    MetricsReport test_report;
};

/// Trains the full model and the two reduced variants from the same seed and
/// scores each on the held-out set. A variant that throws is reported with
/// its error while the others continue.
std::vector<AblationOutcome> run_ablation(const HeteroHypergraph& graph,
                                          const std::vector<LabeledInstance>& train_set,
                                          const std::vector<LabeledInstance>& val_set,
                                          const std::vector<LabeledInstance>& test_set,
                                          const LabelSpace& space, const TrainConfig& base,
                                          std::ostream* log = nullptr);

}  // namespace hyperact
