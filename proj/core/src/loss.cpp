#include "hyperact/loss.hpp"

#include <cmath>

#include "hyperact/errors.hpp"

namespace hyperact {

namespace {

constexpr double kLogClamp = 1e-12;

double entry_weight(const LossConfig& cfg, TriState target, std::size_t label) {
    if (target == TriState::Missing) return 0.0;
    if (cfg.bce_weights == BceWeightMode::MissingMask) return 1.0;
    if (label >= cfg.positive_weight.size() || label >= cfg.negative_weight.size()) {
        throw ConfigError("bce_loss: inverse-frequency mode needs per-label weights; "
                          "call with_inverse_frequency_weights on the train targets");
    }
    return target == TriState::Positive ? cfg.positive_weight[label]
                                        : cfg.negative_weight[label];
}

/// Shared kernel: loss value, optionally d(loss)/d(probs).
double bce_kernel(const Matrix& probs, const TargetMatrix& targets, const LossConfig& cfg,
                  Matrix* dprobs, bool* all_missing) {
    if (probs.rows() != targets.rows || probs.cols() != targets.cols) {
        throw ShapeError("bce_loss: probs " + probs.shape_str() + " vs targets " +
                         std::to_string(targets.rows) + "x" + std::to_string(targets.cols));
    }
    if (probs.rows() == 0) throw ShapeError("bce_loss: empty batch");
    double n = static_cast<double>(probs.rows());
    double acc = 0.0;
    bool any_known = false;
    for (std::size_t i = 0; i < probs.rows(); ++i) {
        for (std::size_t c = 0; c < probs.cols(); ++c) {
            TriState t = targets(i, c);
            double w = entry_weight(cfg, t, c);
            if (w == 0.0) continue;
            any_known = true;
            double p = probs(i, c);
            double y = t == TriState::Positive ? 1.0 : 0.0;
            double lp = std::log(std::max(p, kLogClamp));
            double lq = std::log(std::max(1.0 - p, kLogClamp));
            acc -= w * (y * lp + (1.0 - y) * lq);
            if (dprobs) {
                double g = 0.0;
                if (p > kLogClamp) g -= y / p;
                if (1.0 - p > kLogClamp) g += (1.0 - y) / (1.0 - p);
                (*dprobs)(i, c) += w * g / n;
            }
        }
    }
    if (all_missing) *all_missing = !any_known;
    return acc / n;
}

/// Shared kernel for the pairwise node-type contrast.
double contrast_kernel(const Matrix& emb, const std::vector<NodeType>& types,
                       const LossConfig& cfg, Matrix* demb, std::size_t* excluded_rows) {
    std::size_t n = emb.rows();
    if (emb.cols() == 0) throw ShapeError("contrastive_loss: zero-width embeddings");
    if (types.size() != n) {
        throw ShapeError("contrastive_loss: " + std::to_string(n) + " rows vs " +
                         std::to_string(types.size()) + " node types");
    }
    if (n < 2) throw ShapeError("contrastive_loss: need at least 2 nodes");

    std::vector<double> norms(n, 0.0);
    std::size_t excluded = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < emb.cols(); ++j) acc += emb(i, j) * emb(i, j);
        norms[i] = std::sqrt(acc);
        if (norms[i] == 0.0) ++excluded;
    }
    if (excluded_rows) *excluded_rows = excluded;

    double denom = static_cast<double>(n) * static_cast<double>(n - 1);
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (norms[i] == 0.0) continue;
        for (std::size_t j = i + 1; j < n; ++j) {
            if (norms[j] == 0.0) continue;
            double w = types[i] == types[j] ? cfg.lambda_same : -cfg.lambda_cross;
            if (w == 0.0) continue;
            double dot = 0.0;
            for (std::size_t k = 0; k < emb.cols(); ++k) dot += emb(i, k) * emb(j, k);
            double cos = dot / (norms[i] * norms[j]);
            // Ordered pairs (i,j) and (j,i) both contribute.
            double coef = 2.0 * w / denom;
            acc += coef * (1.0 - cos);
            if (demb) {
                // d cos / d V_i = V_j/(|V_i||V_j|) - cos * V_i/|V_i|^2
                for (std::size_t k = 0; k < emb.cols(); ++k) {
                    double dcos_di =
                        emb(j, k) / (norms[i] * norms[j]) - cos * emb(i, k) / (norms[i] * norms[i]);
                    double dcos_dj =
                        emb(i, k) / (norms[i] * norms[j]) - cos * emb(j, k) / (norms[j] * norms[j]);
                    (*demb)(i, k) -= coef * dcos_di;
                    (*demb)(j, k) -= coef * dcos_dj;
                }
            }
        }
    }
    return acc;
}

}  // namespace

void LossConfig::validate() const {
    if (lambda_same < 0.0 || lambda_cross < 0.0) {
        throw ConfigError("loss: lambda weights must be nonnegative");
    }
}

LossConfig with_inverse_frequency_weights(LossConfig cfg, const TargetMatrix& train_targets) {
    cfg.bce_weights = BceWeightMode::InverseFrequencyMask;
    cfg.positive_weight.assign(train_targets.cols, 0.0);
    cfg.negative_weight.assign(train_targets.cols, 0.0);
    for (std::size_t c = 0; c < train_targets.cols; ++c) {
        std::size_t pos = 0, neg = 0;
        for (std::size_t i = 0; i < train_targets.rows; ++i) {
            if (train_targets(i, c) == TriState::Positive) ++pos;
            if (train_targets(i, c) == TriState::Negative) ++neg;
        }
        double known = static_cast<double>(pos + neg);
        cfg.positive_weight[c] = known / (2.0 * std::max<std::size_t>(1, pos));
        cfg.negative_weight[c] = known / (2.0 * std::max<std::size_t>(1, neg));
    }
    return cfg;
}

double bce_loss(const Matrix& probs, const TargetMatrix& targets, const LossConfig& cfg,
                bool* all_missing) {
    return bce_kernel(probs, targets, cfg, nullptr, all_missing);
}

double contrastive_loss(const Matrix& embeddings, const std::vector<NodeType>& types,
                        const LossConfig& cfg, std::size_t* excluded_rows) {
    return contrast_kernel(embeddings, types, cfg, nullptr, excluded_rows);
}

double total_loss(const Matrix& probs, const TargetMatrix& targets,
                  const Matrix& embeddings, const std::vector<NodeType>& types,
                  const LossConfig& cfg) {
    return bce_loss(probs, targets, cfg) + contrastive_loss(embeddings, types, cfg);
}

Var bce_loss(Tape& tape, Var probs, const TargetMatrix& targets, const LossConfig& cfg) {
    double value = bce_kernel(tape.value(probs), targets, cfg, nullptr, nullptr);
    Matrix out(1, 1);
    out(0, 0) = value;
    return tape.custom(out, {probs}, [probs, targets, cfg](Tape& t, Var self) {
        if (!t.needs_grad(probs)) return;
        double upstream = t.grad_ref(self)(0, 0);
        if (upstream == 0.0) return;
        const Matrix& p = t.value(probs);
        Matrix dprobs(p.rows(), p.cols());
        bce_kernel(p, targets, cfg, &dprobs, nullptr);
        Matrix& acc = t.grad_ref(probs);
        for (std::size_t i = 0; i < acc.size(); ++i)
            acc.data()[i] += upstream * dprobs.data()[i];
    });
}

Var contrastive_loss(Tape& tape, Var embeddings, const std::vector<NodeType>& types,
                     const LossConfig& cfg) {
    double value = contrast_kernel(tape.value(embeddings), types, cfg, nullptr, nullptr);
    Matrix out(1, 1);
    out(0, 0) = value;
    return tape.custom(out, {embeddings}, [embeddings, types, cfg](Tape& t, Var self) {
        if (!t.needs_grad(embeddings)) return;
        double upstream = t.grad_ref(self)(0, 0);
        if (upstream == 0.0) return;
        const Matrix& e = t.value(embeddings);
        Matrix demb(e.rows(), e.cols());
        contrast_kernel(e, types, cfg, &demb, nullptr);
        Matrix& acc = t.grad_ref(embeddings);
        for (std::size_t i = 0; i < acc.size(); ++i)
            acc.data()[i] += upstream * demb.data()[i];
    });
}

Var total_loss(Tape& tape, Var probs, const TargetMatrix& targets, Var embeddings,
               const std::vector<NodeType>& types, const LossConfig& cfg) {
    return tape.add(bce_loss(tape, probs, targets, cfg),
                    contrastive_loss(tape, embeddings, types, cfg));
}

}  // namespace hyperact
