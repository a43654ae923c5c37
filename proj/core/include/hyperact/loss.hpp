#pragma once

#include <vector>

#include "hyperact/dataset.hpp"
#include "hyperact/graph.hpp"
#include "hyperact/matrix.hpp"
#include "hyperact/tape.hpp"

namespace hyperact {

enum class BceWeightMode { MissingMask, InverseFrequencyMask };

struct LossConfig {
    /// Contrastive pair weights: same-type pairs pull with lambda_same,
    /// cross-type pairs push with -lambda_cross. Both zero disables the term.
    double lambda_same = 0.03;
    double lambda_cross = 0.01;
    BceWeightMode bce_weights = BceWeightMode::MissingMask;
    /// Per-label class weights for InverseFrequencyMask, computed on the
    /// training targets; empty otherwise.
    std::vector<double> positive_weight;
    std::vector<double> negative_weight;

    void validate() const;
};

/// Fills positive_weight/negative_weight from training-set label frequency:
/// w_class = n_known / (2 * max(1, n_class)) per label, so each class of a
/// balanced label weighs 1.
LossConfig with_inverse_frequency_weights(LossConfig cfg, const TargetMatrix& train_targets);

/// Masked multi-label binary cross-entropy, averaged over the batch size N:
///   -(1/N) sum_n sum_c w(n,c) [y log p + (1-y) log(1-p)]
/// Missing targets weigh zero; log arguments clamp at 1e-12. When every
/// target is missing the loss is 0 and *all_missing is set.
double bce_loss(const Matrix& probs, const TargetMatrix& targets, const LossConfig& cfg,
                bool* all_missing = nullptr);

/// Fully-pairwise node-type contrast over ordered pairs (i != j):
///   (1 / (|V| (|V|-1))) sum W(i,j) (1 - cos(V_i, V_j))
/// with W = lambda_same for same-type pairs and -lambda_cross otherwise.
/// Zero-norm rows have no cosine and are excluded from the sum (counted in
/// *excluded_rows); the normalizer stays |V|(|V|-1).
double contrastive_loss(const Matrix& embeddings, const std::vector<NodeType>& types,
                        const LossConfig& cfg, std::size_t* excluded_rows = nullptr);

double total_loss(const Matrix& probs, const TargetMatrix& targets,
                  const Matrix& embeddings, const std::vector<NodeType>& types,
                  const LossConfig& cfg);

/// Differentiable versions. Scalars come back as 1x1 tape vars; the forward
/// values agree exactly with the plain functions above (same kernels).
Var bce_loss(Tape& tape, Var probs, const TargetMatrix& targets, const LossConfig& cfg);
Var contrastive_loss(Tape& tape, Var embeddings, const std::vector<NodeType>& types,
                     const LossConfig& cfg);
Var total_loss(Tape& tape, Var probs, const TargetMatrix& targets, Var embeddings,
               const std::vector<NodeType>& types, const LossConfig& cfg);

}  // namespace hyperact
