#include "hyperact/trainer.hpp"

#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>

#include "hyperact/errors.hpp"
#include "hyperact/rng.hpp"

namespace hyperact {

namespace {

Matrix rows_of(const Matrix& all, const std::vector<std::size_t>& indices,
               std::size_t first, std::size_t count) {
    Matrix out(count, all.cols());
    for (std::size_t i = 0; i < count; ++i) {
        std::size_t src = indices[first + i];
        for (std::size_t j = 0; j < all.cols(); ++j) out(i, j) = all(src, j);
    }
    return out;
}

TargetMatrix target_rows(const TargetMatrix& all, const std::vector<std::size_t>& indices,
                         std::size_t first, std::size_t count) {
    TargetMatrix out;
    out.rows = count;
    out.cols = all.cols;
    out.cells.resize(count * all.cols);
    for (std::size_t i = 0; i < count; ++i) {
        std::size_t src = indices[first + i];
        for (std::size_t j = 0; j < all.cols; ++j) out(i, j) = all(src, j);
    }
    return out;
}

double overall_mcc_of(ModelParams& params, const HeteroHypergraph& graph,
                      const GraphOperators& ops, const Matrix& embeddings,
                      const std::vector<LabeledInstance>& dataset,
                      const LabelSpace& space, double threshold) {
    if (dataset.empty()) return 0.0;
    return evaluate_instances(params, graph, ops, embeddings, dataset, space, threshold)
        .overall_mcc;
}

}  // namespace

void TrainConfig::validate() const {
    optimizer.validate();
    loss.validate();
    if (batch_size < 1) throw ConfigError("train: batch_size must be >= 1");
    if (epochs < 1) throw ConfigError("train: epochs must be >= 1");
    if (threshold <= 0.0 || threshold >= 1.0)
        throw ConfigError("train: threshold must lie in (0, 1)");
    if (patience && *patience < 1) throw ConfigError("train: patience must be >= 1");
}

TrainState train(const HeteroHypergraph& graph,
                 const std::vector<LabeledInstance>& train_set,
                 const std::vector<LabeledInstance>& val_set, const LabelSpace& space,
                 const TrainConfig& cfg, std::ostream* log) {
    cfg.validate();
    if (train_set.empty()) throw ConfigError("train: empty training set");

    ModelConfig model_cfg = cfg.model;
    model_cfg.input_dim = train_set[0].features.size();
    model_cfg.validate();

    LossConfig loss_cfg = cfg.loss;
    if (!model_cfg.contrastive) {
        loss_cfg.lambda_same = 0.0;
        loss_cfg.lambda_cross = 0.0;
    }
    TargetMatrix train_targets = TargetMatrix::from_instances(train_set, space);
    if (loss_cfg.bce_weights == BceWeightMode::InverseFrequencyMask &&
        loss_cfg.positive_weight.empty()) {
        loss_cfg = with_inverse_frequency_weights(loss_cfg, train_targets);
    }

    Rng rng(cfg.seed);
    TrainState state;
    state.params = ModelParams::init(model_cfg, rng);

    GraphOperators ops = GraphOperators::build(graph, model_cfg.normalization);
    std::vector<NodeType> node_types = graph.node_types();
    Matrix train_features = feature_matrix(train_set);

    auto param_list = state.params.all();
    Optimizer optimizer(cfg.optimizer, param_list);

    std::vector<std::size_t> order(train_set.size());
    std::iota(order.begin(), order.end(), 0);

    std::size_t epochs_since_best = 0;
    for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
        rng.shuffle(order);
        double epoch_bce = 0.0, epoch_contrast = 0.0;
        std::size_t steps = 0;

        for (std::size_t first = 0; first < order.size(); first += cfg.batch_size) {
            std::size_t count = std::min(cfg.batch_size, order.size() - first);
            Matrix signals = rows_of(train_features, order, first, count);
            TargetMatrix targets = target_rows(train_targets, order, first, count);

            Tape tape;
            ModelForward fwd(tape, state.params, graph, ops);
            Var embeddings = fwd.graph_forward(rng, true);
            Var probs = fwd.classify(embeddings, signals, rng, true);
            Var bce = bce_loss(tape, probs, targets, loss_cfg);
            Var contrast = contrastive_loss(tape, embeddings, node_types, loss_cfg);
            Var loss = tape.add(bce, contrast);

            double bce_v = tape.scalar_value(bce);
            double contrast_v = tape.scalar_value(contrast);
            if (!std::isfinite(bce_v) || !std::isfinite(contrast_v)) {
                char msg[160];
                std::snprintf(msg, sizeof msg,
                              "train: non-finite loss at epoch %zu batch %zu "
                              "(bce=%g contrastive=%g)",
                              epoch, first / cfg.batch_size, bce_v, contrast_v);
                throw NumericError(msg);
            }
            tape.backward(loss);

            std::vector<const Matrix*> grads;
            grads.reserve(param_list.size());
            for (Matrix* p : param_list) grads.push_back(&tape.grad_of(*p));
            optimizer.step(grads);

            epoch_bce += bce_v;
            epoch_contrast += contrast_v;
            ++steps;
        }

        Matrix eval_embeddings = eval_node_embeddings(state.params, graph, ops);
        double val_mcc = overall_mcc_of(state.params, graph, ops, eval_embeddings,
                                        val_set, space, cfg.threshold);

        EpochStats stats;
        stats.epoch = epoch;
        stats.train_bce = epoch_bce / static_cast<double>(steps);
        stats.train_contrastive = epoch_contrast / static_cast<double>(steps);
        stats.val_mcc = val_mcc;
        state.history.push_back(stats);
        if (log) {
            char line[160];
            std::snprintf(line, sizeof line, "%zu\t%.9g\t%.9g\t%.9g\n", epoch,
                          stats.train_bce, stats.train_contrastive, stats.val_mcc);
            *log << line;
        }

        if (cfg.select_best && (state.best_epoch == 0 || val_mcc > state.best_val_mcc)) {
            state.best_val_mcc = val_mcc;
            state.best_epoch = epoch;
            state.best_params = state.params;
            state.best_node_embeddings = eval_embeddings;
            epochs_since_best = 0;
        } else {
            ++epochs_since_best;
        }
        if (cfg.patience && epochs_since_best >= *cfg.patience) break;
    }

    if (!cfg.select_best) {
        state.best_params = state.params;
        state.best_node_embeddings =
            eval_node_embeddings(state.params, graph, ops);
        state.best_epoch = state.history.size();
        state.best_val_mcc = state.history.empty() ? 0.0 : state.history.back().val_mcc;
    }
    return state;
}

MetricsReport evaluate_instances(ModelParams& params, const HeteroHypergraph& graph,
                                 const GraphOperators& ops, const Matrix& node_embeddings,
                                 const std::vector<LabeledInstance>& dataset,
                                 const LabelSpace& space, double threshold,
                                 std::size_t batch_size) {
    if (dataset.empty()) throw ConfigError("evaluate: empty dataset");
    TargetMatrix targets = TargetMatrix::from_instances(dataset, space);
    Matrix features = feature_matrix(dataset);

    Matrix probs(dataset.size(), space.num_labels());
    for (std::size_t first = 0; first < dataset.size(); first += batch_size) {
        std::size_t count = std::min(batch_size, dataset.size() - first);
        Matrix batch(count, features.cols());
        for (std::size_t i = 0; i < count; ++i)
            for (std::size_t j = 0; j < features.cols(); ++j)
                batch(i, j) = features(first + i, j);
        Matrix batch_probs = eval_classify(params, graph, ops, node_embeddings, batch);
        for (std::size_t i = 0; i < count; ++i)
            for (std::size_t j = 0; j < batch_probs.cols(); ++j)
                probs(first + i, j) = batch_probs(i, j);
    }
    return aggregate_report(confusion(probs, targets, threshold), space);
}

MetricsReport evaluate(const Checkpoint& ckpt, std::vector<LabeledInstance> dataset,
                       const LabelSpace& space, double threshold) {
    if (!(space == ckpt.space)) {
        throw ConfigError("evaluate: dataset label space does not match the checkpoint");
    }
    dataset = apply_normalizer(ckpt.normalizer, std::move(dataset));

    // The head only needs the node block boundaries, not the edge structure.
    HeteroHypergraph blocks;
    blocks.num_users = ckpt.num_users;
    blocks.num_contexts = ckpt.space.num_contexts();
    blocks.num_activities = ckpt.space.num_activities();
    GraphOperators no_ops;

    ModelParams params = ckpt.params;
    return evaluate_instances(params, blocks, no_ops, ckpt.node_embeddings, dataset,
                              space, threshold);
}

Checkpoint make_checkpoint(const TrainState& state, const HeteroHypergraph& graph,
                           const LabelSpace& space, const Normalizer& normalizer,
                           std::uint64_t seed) {
    Checkpoint ckpt;
    ckpt.seed = seed;
    ckpt.params = state.best_params;
    ckpt.space = space;
    ckpt.num_users = graph.num_users;
    ckpt.node_names = graph.node_names;
    ckpt.normalizer = normalizer;
    ckpt.node_embeddings = state.best_node_embeddings;
    ckpt.best_val_mcc = state.best_val_mcc;
    ckpt.best_epoch = state.best_epoch;
    return ckpt;
}

std::vector<AblationOutcome> run_ablation(const HeteroHypergraph& graph,
                                          const std::vector<LabeledInstance>& train_set,
                                          const std::vector<LabeledInstance>& val_set,
                                          const std::vector<LabeledInstance>& test_set,
                                          const LabelSpace& space, const TrainConfig& base,
                                          std::ostream* log) {
    struct Variant {
        const char* name;
        TrainConfig cfg;
    };
    std::vector<Variant> variants;
    variants.push_back({"full", base});
    {
        TrainConfig cfg = base;
        cfg.model.edge_hetero = false;
        variants.push_back({"no_edge_hetero", cfg});
    }
    {
        TrainConfig cfg = base;
        cfg.model.contrastive = false;
        variants.push_back({"no_contrastive", cfg});
    }

    std::vector<AblationOutcome> outcomes;
    for (auto& variant : variants) {
        AblationOutcome outcome;
        outcome.variant = variant.name;
        try {
            TrainState state = train(graph, train_set, val_set, space, variant.cfg, log);
            GraphOperators ops =
                GraphOperators::build(graph, variant.cfg.model.normalization);
            outcome.test_report = evaluate_instances(
                state.best_params, graph, ops, state.best_node_embeddings, test_set,
                space, variant.cfg.threshold);
            outcome.best_val_mcc = state.best_val_mcc;
            outcome.ok = true;
        } catch (const std::exception& e) {
            outcome.error = e.what();
        }
        outcomes.push_back(std::move(outcome));
    }
    return outcomes;
}

}  // namespace hyperact
