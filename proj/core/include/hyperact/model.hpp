#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "hyperact/graph.hpp"
#include "hyperact/matrix.hpp"
#include "hyperact/rng.hpp"
#include "hyperact/tape.hpp"

namespace hyperact {

struct LayerConfig {
    std::size_t in_dim = 0;
    std::size_t out_dim = 0;
    double dropout_p = 0.0;
    Activation activation = Activation::LeakyRelu;
};

struct ModelConfig {
    std::size_t num_layers = 2;
    std::size_t embed_dim = 64;
    std::size_t head_dim = 64;
    std::size_t input_dim = 0;  // M; set from the data before init
    double dropout_p = 0.1;
    Activation activation = Activation::LeakyRelu;
    HgcNormalization normalization = HgcNormalization::Symmetric;
    /// Ablation switches. With edge_hetero off the per-type convolutions
    /// collapse to one shared weight applied over the union graph; with
    /// contrastive off the trainer zeroes both lambda weights.
    bool edge_hetero = true;
    bool contrastive = true;

    LayerConfig layer(std::size_t index) const;
    void validate() const;
};

struct LinearParams {
    Matrix weight;  // in x out
    Matrix bias;    // 1 x out
};

struct LayerParams {
    LinearParams user_proj;
    LinearParams context_proj;
    LinearParams activity_proj;
    /// One convolution weight per edge type (UCA, UC, UA order), or a single
    /// shared weight when edge heterogeneity is disabled.
    std::vector<Matrix> conv_weights;
};

struct HeadParams {
    LinearParams signal_context;   // M -> head_dim
    LinearParams signal_activity;  // M -> head_dim
    LinearParams node_context;     // embed_dim -> head_dim
    LinearParams node_activity;    // embed_dim -> head_dim
};

/// Every learnable matrix of the model. `named()` exposes them in a fixed
/// order used by the optimizer, the checkpoint format and initialization.
struct ModelParams {
    ModelConfig config;
    std::vector<LayerParams> layers;
    HeadParams head;

    /// Glorot-uniform weights (+-sqrt(6/(fan_in+fan_out))), zero biases,
    /// drawn from rng in named() order.
    static ModelParams init(const ModelConfig& config, Rng& rng);

    std::vector<std::pair<std::string, Matrix*>> named();
    std::vector<std::pair<std::string, const Matrix*>> named() const;
    std::vector<Matrix*> all();
};

/// Graph-constant propagation operators, built once per graph and shared by
/// every forward pass.
struct GraphOperators {
    std::array<Matrix, 3> per_type;  // indexed by EdgeType; empty subgraph -> zero matrix
    Matrix whole_graph;              // union of all edges, for the shared variant

    static GraphOperators build(const HeteroHypergraph& g, HgcNormalization norm);
};

/// One forward pass over the tape. Registers every parameter exactly once at
/// construction, so unused parameters still read back zero gradients.
class ModelForward {
public:
    ModelForward(Tape& tape, ModelParams& params, const HeteroHypergraph& graph,
                 const GraphOperators& ops);

    /// Type-specific projections: the user/context/activity row blocks pass
    /// through their own linear map, activation and dropout, then concatenate
    /// back in the same order.
    Var hetero_project(Var node_matrix, std::size_t layer, Rng& rng, bool training);

    /// Full stack: per layer hetero_project, then one degree-normalized
    /// convolution per edge type (activation + dropout each), summed; or the
    /// single shared convolution over the union graph when edge heterogeneity
    /// is off. Returns the final node embeddings.
    Var graph_forward(Rng& rng, bool training);

    /// Dual-head classifier: signals and the matching node block are
    /// projected to head_dim, and each (instance, node) probability is the
    /// sigmoid of their dot product. Output is batch x H, contexts first;
    /// user nodes are not prediction targets.
    Var classify(Var node_embeddings, const Matrix& signals, Rng& rng, bool training);

    Var param_var(const Matrix& m) const;

private:
    Var linear(Var x, const LinearParams& lin);
    Var head_side(Var x, const LinearParams& lin, Rng& rng, bool training);

    Tape& tape_;
    ModelParams& params_;
    const HeteroHypergraph& graph_;
    const GraphOperators& ops_;
    std::unordered_map<const Matrix*, Var> bound_;
};

/// Single convolution step as a plain matrix computation:
/// propagation_matrix(sub, norm) * x * conv_weight. Differentiable inside
/// ModelForward; this standalone form exists for direct checks.
Matrix hgc_forward(const SubHypergraph& sub, const Matrix& x, const Matrix& conv_weight,
                   HgcNormalization norm = HgcNormalization::Symmetric);

/// Eval-mode (dropout-off) node embeddings without gradient tracking.
Matrix eval_node_embeddings(ModelParams& params, const HeteroHypergraph& graph,
                            const GraphOperators& ops);

/// Eval-mode probabilities for a signal batch against fixed node embeddings.
Matrix eval_classify(ModelParams& params, const HeteroHypergraph& graph,
                     const GraphOperators& ops, const Matrix& node_embeddings,
                     const Matrix& signals);

}  // namespace hyperact
