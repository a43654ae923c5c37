#include "hyperact/model.hpp"

#include <cmath>

#include "hyperact/errors.hpp"

namespace hyperact {

LayerConfig ModelConfig::layer(std::size_t index) const {
    LayerConfig lc;
    lc.in_dim = index == 0 ? input_dim : embed_dim;
    lc.out_dim = embed_dim;
    lc.dropout_p = dropout_p;
    lc.activation = activation;
    return lc;
}

void ModelConfig::validate() const {
    if (num_layers < 1) throw ConfigError("model: num_layers must be >= 1");
    if (embed_dim < 1 || head_dim < 1 || input_dim < 1) {
        throw ConfigError("model: embed_dim, head_dim and input_dim must be >= 1");
    }
    if (dropout_p < 0.0 || dropout_p >= 1.0) {
        throw ConfigError("model: dropout must satisfy 0 <= p < 1");
    }
}

namespace {

LinearParams make_linear(std::size_t in, std::size_t out) {
    return LinearParams{Matrix(in, out), Matrix(1, out)};
}

void glorot_fill(Matrix& w, Rng& rng) {
    // Biases are 1 x out and keep their zeros.
    if (w.rows() == 1) return;
    double limit = std::sqrt(6.0 / static_cast<double>(w.rows() + w.cols()));
    for (double& v : w.values()) v = rng.uniform(-limit, limit);
}

}  // namespace

ModelParams ModelParams::init(const ModelConfig& config, Rng& rng) {
    config.validate();
    ModelParams p;
    p.config = config;
    for (std::size_t l = 0; l < config.num_layers; ++l) {
        LayerConfig lc = config.layer(l);
        LayerParams layer;
        layer.user_proj = make_linear(lc.in_dim, lc.out_dim);
        layer.context_proj = make_linear(lc.in_dim, lc.out_dim);
        layer.activity_proj = make_linear(lc.in_dim, lc.out_dim);
        std::size_t num_convs = config.edge_hetero ? 3 : 1;
        for (std::size_t s = 0; s < num_convs; ++s)
            layer.conv_weights.emplace_back(lc.out_dim, lc.out_dim);
        p.layers.push_back(std::move(layer));
    }
    p.head.signal_context = make_linear(config.input_dim, config.head_dim);
    p.head.signal_activity = make_linear(config.input_dim, config.head_dim);
    p.head.node_context = make_linear(config.embed_dim, config.head_dim);
    p.head.node_activity = make_linear(config.embed_dim, config.head_dim);

    for (auto& [name, m] : p.named()) glorot_fill(*m, rng);
    return p;
}

std::vector<std::pair<std::string, Matrix*>> ModelParams::named() {
    std::vector<std::pair<std::string, Matrix*>> out;
    auto push_linear = [&out](const std::string& prefix, LinearParams& lin) {
        out.emplace_back(prefix + ".weight", &lin.weight);
        out.emplace_back(prefix + ".bias", &lin.bias);
    };
    for (std::size_t l = 0; l < layers.size(); ++l) {
        std::string base = "layer" + std::to_string(l);
        push_linear(base + ".user_proj", layers[l].user_proj);
        push_linear(base + ".context_proj", layers[l].context_proj);
        push_linear(base + ".activity_proj", layers[l].activity_proj);
        for (std::size_t s = 0; s < layers[l].conv_weights.size(); ++s) {
            out.emplace_back(base + ".conv" + std::to_string(s),
                             &layers[l].conv_weights[s]);
        }
    }
    push_linear("head.signal_context", head.signal_context);
    push_linear("head.signal_activity", head.signal_activity);
    push_linear("head.node_context", head.node_context);
    push_linear("head.node_activity", head.node_activity);
    return out;
}

std::vector<std::pair<std::string, const Matrix*>> ModelParams::named() const {
    auto mutable_named = const_cast<ModelParams*>(this)->named();
    std::vector<std::pair<std::string, const Matrix*>> out;
    out.reserve(mutable_named.size());
    for (auto& [name, m] : mutable_named) out.emplace_back(name, m);
    return out;
}

std::vector<Matrix*> ModelParams::all() {
    std::vector<Matrix*> out;
    for (auto& [name, m] : named()) out.push_back(m);
    return out;
}

GraphOperators GraphOperators::build(const HeteroHypergraph& g, HgcNormalization norm) {
    GraphOperators ops;
    for (EdgeType t : kEdgeTypes)
        ops.per_type[static_cast<std::size_t>(t)] = propagation_matrix(g.sub(t), norm);
    ops.whole_graph = union_propagation_matrix(g, norm);
    return ops;
}

ModelForward::ModelForward(Tape& tape, ModelParams& params, const HeteroHypergraph& graph,
                           const GraphOperators& ops)
    : tape_(tape), params_(params), graph_(graph), ops_(ops) {
    for (auto& [name, m] : params_.named()) bound_.emplace(m, tape_.param(*m));
}

Var ModelForward::param_var(const Matrix& m) const {
    auto it = bound_.find(&m);
    if (it == bound_.end()) throw std::logic_error("ModelForward: unbound parameter");
    return it->second;
}

Var ModelForward::linear(Var x, const LinearParams& lin) {
    Var wx = tape_.matmul(x, param_var(lin.weight));
    return tape_.add_row(wx, param_var(lin.bias));
}

Var ModelForward::hetero_project(Var node_matrix, std::size_t layer, Rng& rng,
                                 bool training) {
    const LayerParams& lp = params_.layers.at(layer);
    LayerConfig lc = params_.config.layer(layer);
    const Matrix& in = tape_.value(node_matrix);
    if (in.rows() != graph_.num_nodes()) {
        throw ShapeError("hetero_project: " + in.shape_str() + " does not cover " +
                         std::to_string(graph_.num_nodes()) + " nodes");
    }

    struct Block {
        std::size_t first, count;
        const LinearParams* proj;
    };
    const Block blocks[3] = {
        {0, graph_.num_users, &lp.user_proj},
        {graph_.num_users, graph_.num_contexts, &lp.context_proj},
        {graph_.num_users + graph_.num_contexts, graph_.num_activities,
         &lp.activity_proj},
    };
    std::vector<Var> parts;
    for (const Block& b : blocks) {
        Var rows = tape_.row_block(node_matrix, b.first, b.count);
        Var projected = linear(rows, *b.proj);
        Var activated = tape_.activation(projected, lc.activation);
        parts.push_back(tape_.dropout(activated, lc.dropout_p, rng, training));
    }
    return tape_.concat_rows(parts);
}

Var ModelForward::graph_forward(Rng& rng, bool training) {
    Var v = tape_.constant(graph_.init_embeddings);
    for (std::size_t layer = 0; layer < params_.config.num_layers; ++layer) {
        const LayerParams& lp = params_.layers[layer];
        LayerConfig lc = params_.config.layer(layer);
        Var projected = hetero_project(v, layer, rng, training);

        auto conv_branch = [&](const Matrix& prop, const Matrix& weight) {
            Var xw = tape_.matmul(projected, param_var(weight));
            Var mixed = tape_.matmul(tape_.constant(prop), xw);
            Var activated = tape_.activation(mixed, lc.activation);
            return tape_.dropout(activated, lc.dropout_p, rng, training);
        };

        Var combined;
        if (params_.config.edge_hetero) {
            for (EdgeType t : kEdgeTypes) {
                std::size_t s = static_cast<std::size_t>(t);
                // Empty sub-hypergraphs contribute nothing and draw no
                // dropout mask, so adding one never shifts the stream.
                if (graph_.sub(t).edge_count() == 0) continue;
                Var branch = conv_branch(ops_.per_type[s], lp.conv_weights[s]);
                combined = combined.valid() ? tape_.add(combined, branch) : branch;
            }
            if (!combined.valid()) {
                throw ConfigError("graph_forward: graph has no edges");
            }
        } else {
            combined = conv_branch(ops_.whole_graph, lp.conv_weights[0]);
        }
        v = combined;
    }
    return v;
}

Var ModelForward::head_side(Var x, const LinearParams& lin, Rng& rng, bool training) {
    Var projected = linear(x, lin);
    Var activated = tape_.activation(projected, params_.config.activation);
    return tape_.dropout(activated, params_.config.dropout_p, rng, training);
}

Var ModelForward::classify(Var node_embeddings, const Matrix& signals, Rng& rng,
                           bool training) {
    if (signals.cols() != params_.config.input_dim) {
        throw ShapeError("classify: signals " + signals.shape_str() + " vs input_dim " +
                         std::to_string(params_.config.input_dim));
    }
    Var x = tape_.constant(signals);

    Var context_rows =
        tape_.row_block(node_embeddings, graph_.num_users, graph_.num_contexts);
    Var activity_rows = tape_.row_block(
        node_embeddings, graph_.num_users + graph_.num_contexts, graph_.num_activities);

    Var signal_c = head_side(x, params_.head.signal_context, rng, training);
    Var node_c = head_side(context_rows, params_.head.node_context, rng, training);
    Var probs_c = tape_.activation(tape_.matmul_transb(signal_c, node_c),
                                   Activation::Sigmoid);

    Var signal_a = head_side(x, params_.head.signal_activity, rng, training);
    Var node_a = head_side(activity_rows, params_.head.node_activity, rng, training);
    Var probs_a = tape_.activation(tape_.matmul_transb(signal_a, node_a),
                                   Activation::Sigmoid);

    return tape_.concat_cols({probs_c, probs_a});
}

Matrix hgc_forward(const SubHypergraph& sub, const Matrix& x, const Matrix& conv_weight,
                   HgcNormalization norm) {
    if (x.rows() != sub.incidence.rows()) {
        throw ShapeError("hgc_forward: input " + x.shape_str() + " vs " +
                         std::to_string(sub.incidence.rows()) + " nodes");
    }
    return matmul(propagation_matrix(sub, norm), matmul(x, conv_weight));
}

Matrix eval_node_embeddings(ModelParams& params, const HeteroHypergraph& graph,
                            const GraphOperators& ops) {
    Tape tape;
    ModelForward fwd(tape, params, graph, ops);
    Rng unused(0);  // eval mode never draws
    return tape.value(fwd.graph_forward(unused, false));
}

Matrix eval_classify(ModelParams& params, const HeteroHypergraph& graph,
                     const GraphOperators& ops, const Matrix& node_embeddings,
                     const Matrix& signals) {
    Tape tape;
    ModelForward fwd(tape, params, graph, ops);
    Rng unused(0);
    Var nodes = tape.constant(node_embeddings);
    return tape.value(fwd.classify(nodes, signals, unused, false));
}

}  // namespace hyperact
