#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "hyperact/dataset.hpp"
#include "hyperact/matrix.hpp"

namespace hyperact {

enum class NodeType : std::uint8_t { User = 0, Context = 1, Activity = 2 };

/// Hyperedge type, determined by which node types its members span. UC and
/// UA edges arise from instances with a wholly missing (or never-positive)
/// activity or context block.
enum class EdgeType : std::uint8_t { UCA = 0, UC = 1, UA = 2 };

inline constexpr std::array<EdgeType, 3> kEdgeTypes{EdgeType::UCA, EdgeType::UC,
                                                    EdgeType::UA};

const char* to_string(NodeType t);
const char* to_string(EdgeType t);

struct NodeId {
    NodeType type;
    std::size_t local_index;
    std::size_t global_index;
};

/// Deduplicated hyperedge. Identity is the sorted set of member nodes, so
/// repeated observations of the same (user, context, activities) merge.
struct Hyperedge {
    std::vector<std::size_t> members;  // sorted global node indices
    EdgeType type;
    std::size_t instance_count = 0;
    double weight = 1.0;
    /// Mean feature vector over all instances whose connected-node set
    /// equals `members`. Exported for analysis; not consumed by the forward
    /// pass.
    std::vector<double> prototype;
};

/// Incidence view of one edge type over the full node set.
struct SubHypergraph {
    EdgeType type;
    Matrix incidence;                   // |V| x |E_s|, entries 0/1
    std::vector<double> edge_weights;   // length |E_s|
    std::vector<double> node_degrees;   // row sums of incidence * diag(weights)
    std::vector<double> edge_degrees;   // column sums of incidence

    std::size_t edge_count() const { return edge_weights.size(); }
};

enum class HgcNormalization { Symmetric, Row };
enum class EdgeWeightMode { Ones, InstanceCount };

struct HeteroHypergraph {
    std::size_t num_users = 0;
    std::size_t num_contexts = 0;
    std::size_t num_activities = 0;
    /// Global node order: users, then contexts, then activities.
    std::vector<std::string> node_names;
    /// All unique hyperedges in canonical order (by type, then members).
    std::vector<Hyperedge> edges;
    std::array<SubHypergraph, 3> subgraphs;  // indexed by EdgeType
    /// Row v = mean of features over training instances connected to node v;
    /// all-zero row for nodes never observed.
    Matrix init_embeddings;

    std::size_t skipped_instances = 0;            // no positive label at all
    std::vector<std::size_t> untouched_nodes;     // zero-init rows

    std::size_t num_nodes() const { return num_users + num_contexts + num_activities; }
    NodeType node_type(std::size_t global_index) const;
    std::size_t global_index(NodeType type, std::size_t local_index) const;
    std::vector<NodeType> node_types() const;
    const SubHypergraph& sub(EdgeType t) const {
        return subgraphs[static_cast<std::size_t>(t)];
    }
};

/// Builds the typed hypergraph from labeled instances. Each instance
/// contributes the set {its user} + {positive context} + {positive
/// activities}; instances with no positive label are skipped and counted.
/// `num_users` fixes the user block size; 0 infers max(user)+1.
/// Throws ConfigError on empty input, a user id out of range, an instance
/// with multiple positive contexts (resolve_conflicts first), or when no
/// instance forms an edge.
HeteroHypergraph build_hypergraph(const std::vector<LabeledInstance>& instances,
                                  const LabelSpace& space,
                                  EdgeWeightMode weight_mode = EdgeWeightMode::Ones,
                                  std::size_t num_users = 0);

struct EdgeDistributionReport {
    std::array<std::size_t, 3> counts{};       // indexed by EdgeType
    std::array<double, 3> percentages{};
    std::size_t total = 0;
};

EdgeDistributionReport edge_statistics(const HeteroHypergraph& g);

/// Copy of the stored 0/1 matrix.
Matrix incidence(const SubHypergraph& sub);

/// Degree-normalized propagation operator used by the hypergraph
/// convolution:
///   Symmetric: Dv^(-1/2) Inc diag(W) De^(-1) Inc^T Dv^(-1/2)
///   Row:       Dv^(-1)   Inc diag(W) De^(-1) Inc^T
/// Nodes with zero degree in this sub-hypergraph get zero rows and columns:
/// they emit and receive nothing.
Matrix propagation_matrix(const SubHypergraph& sub, HgcNormalization norm);

/// Same operator over the union of all edges regardless of type (the
/// shared-convolution model variant).
Matrix union_propagation_matrix(const HeteroHypergraph& g, HgcNormalization norm);

/// Plain-text build report: edge counts per type and node degree histograms.
void write_graph_report(std::ostream& out, const HeteroHypergraph& g);

/// Machine-readable edge table, one line per edge:
/// type, member node names..., instance_count. Comma-separated, UTF-8.
void write_edges_csv(std::ostream& out, const HeteroHypergraph& g);

}  // namespace hyperact
