#include "hyperact/graph.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>

#include "hyperact/errors.hpp"

namespace hyperact {

const char* to_string(NodeType t) {
    switch (t) {
        case NodeType::User: return "user";
        case NodeType::Context: return "context";
        case NodeType::Activity: return "activity";
    }
    return "?";
}

const char* to_string(EdgeType t) {
    switch (t) {
        case EdgeType::UCA: return "UCA";
        case EdgeType::UC: return "UC";
        case EdgeType::UA: return "UA";
    }
    return "?";
}

NodeType HeteroHypergraph::node_type(std::size_t global_index) const {
    if (global_index < num_users) return NodeType::User;
    if (global_index < num_users + num_contexts) return NodeType::Context;
    return NodeType::Activity;
}

std::size_t HeteroHypergraph::global_index(NodeType type, std::size_t local_index) const {
    switch (type) {
        case NodeType::User: return local_index;
        case NodeType::Context: return num_users + local_index;
        case NodeType::Activity: return num_users + num_contexts + local_index;
    }
    return local_index;
}

std::vector<NodeType> HeteroHypergraph::node_types() const {
    std::vector<NodeType> types(num_nodes());
    for (std::size_t v = 0; v < types.size(); ++v) types[v] = node_type(v);
    return types;
}

namespace {

struct EdgeAccumulator {
    std::size_t count = 0;
    std::vector<double> feature_sum;
};

SubHypergraph make_subgraph(EdgeType type, std::size_t num_nodes,
                            const std::vector<const Hyperedge*>& edges) {
    SubHypergraph sub;
    sub.type = type;
    sub.incidence = Matrix(num_nodes, edges.size());
    sub.edge_weights.reserve(edges.size());
    sub.edge_degrees.reserve(edges.size());
    sub.node_degrees.assign(num_nodes, 0.0);
    for (std::size_t e = 0; e < edges.size(); ++e) {
        const Hyperedge& edge = *edges[e];
        sub.edge_weights.push_back(edge.weight);
        sub.edge_degrees.push_back(static_cast<double>(edge.members.size()));
        for (std::size_t v : edge.members) {
            sub.incidence(v, e) = 1.0;
            sub.node_degrees[v] += edge.weight;
        }
    }
    return sub;
}

}  // namespace

HeteroHypergraph build_hypergraph(const std::vector<LabeledInstance>& instances,
                                  const LabelSpace& space, EdgeWeightMode weight_mode,
                                  std::size_t num_users) {
    if (instances.empty()) throw ConfigError("build_hypergraph: no instances");
    space.validate();

    std::size_t feature_dim = instances[0].features.size();
    std::size_t max_user = 0;
    for (const auto& inst : instances) {
        if (inst.user < 0) throw ConfigError("build_hypergraph: negative user id");
        max_user = std::max(max_user, static_cast<std::size_t>(inst.user));
        if (inst.features.size() != feature_dim)
            throw ShapeError("build_hypergraph: inconsistent feature lengths");
    }
    if (num_users == 0) num_users = max_user + 1;
    if (max_user >= num_users) {
        throw ConfigError("build_hypergraph: user id " + std::to_string(max_user) +
                          " outside configured " + std::to_string(num_users) + " users");
    }

    HeteroHypergraph g;
    g.num_users = num_users;
    g.num_contexts = space.num_contexts();
    g.num_activities = space.num_activities();
    std::size_t num_nodes = g.num_nodes();
    for (std::size_t u = 0; u < num_users; ++u)
        g.node_names.push_back("u" + std::to_string(u));
    for (const auto& n : space.context_names) g.node_names.push_back(n);
    for (const auto& n : space.activity_names) g.node_names.push_back(n);

    // Dedup edges by sorted member set; accumulate per-node init embeddings.
    std::map<std::vector<std::size_t>, EdgeAccumulator> edge_map;
    Matrix node_sum(num_nodes, feature_dim);
    std::vector<std::size_t> node_count(num_nodes, 0);

    for (const auto& inst : instances) {
        if (inst.context_labels.size() != g.num_contexts ||
            inst.activity_labels.size() != g.num_activities) {
            throw ShapeError("build_hypergraph: instance label sizes do not match label space");
        }
        if (inst.positive_context_count() > 1) {
            throw ConfigError("build_hypergraph: instance with multiple positive "
                              "contexts; run resolve_conflicts first");
        }
        std::vector<std::size_t> members{static_cast<std::size_t>(inst.user)};
        int ctx = inst.positive_context();
        if (ctx >= 0)
            members.push_back(g.global_index(NodeType::Context, static_cast<std::size_t>(ctx)));
        for (std::size_t a : inst.positive_activities())
            members.push_back(g.global_index(NodeType::Activity, a));
        if (members.size() < 2) {
            ++g.skipped_instances;
            continue;
        }
        std::sort(members.begin(), members.end());

        EdgeAccumulator& acc = edge_map[members];
        if (acc.count == 0) acc.feature_sum.assign(feature_dim, 0.0);
        ++acc.count;
        for (std::size_t j = 0; j < feature_dim; ++j)
            acc.feature_sum[j] += inst.features[j];

        for (std::size_t v : members) {
            ++node_count[v];
            for (std::size_t j = 0; j < feature_dim; ++j)
                node_sum(v, j) += inst.features[j];
        }
    }
    if (edge_map.empty()) {
        throw ConfigError("build_hypergraph: no instance carries a positive label");
    }

    for (auto& [members, acc] : edge_map) {
        Hyperedge edge;
        edge.members = members;
        edge.instance_count = acc.count;
        edge.weight = weight_mode == EdgeWeightMode::Ones
                          ? 1.0
                          : static_cast<double>(acc.count);
        edge.prototype = std::move(acc.feature_sum);
        for (double& v : edge.prototype) v /= static_cast<double>(acc.count);

        bool has_context = false, has_activity = false;
        for (std::size_t v : members) {
            NodeType t = g.node_type(v);
            if (t == NodeType::Context) has_context = true;
            if (t == NodeType::Activity) has_activity = true;
        }
        edge.type = has_context ? (has_activity ? EdgeType::UCA : EdgeType::UC)
                                : EdgeType::UA;
        g.edges.push_back(std::move(edge));
    }
    // Canonical order: by type, then member set. std::map already sorted by
    // members, so a stable sort on type keeps builds order-invariant.
    std::stable_sort(g.edges.begin(), g.edges.end(),
                     [](const Hyperedge& a, const Hyperedge& b) {
                         return static_cast<int>(a.type) < static_cast<int>(b.type);
                     });

    g.init_embeddings = Matrix(num_nodes, feature_dim);
    for (std::size_t v = 0; v < num_nodes; ++v) {
        if (node_count[v] == 0) {
            g.untouched_nodes.push_back(v);
            continue;
        }
        for (std::size_t j = 0; j < feature_dim; ++j)
            g.init_embeddings(v, j) = node_sum(v, j) / static_cast<double>(node_count[v]);
    }

    for (EdgeType t : kEdgeTypes) {
        std::vector<const Hyperedge*> of_type;
        for (const auto& e : g.edges)
            if (e.type == t) of_type.push_back(&e);
        g.subgraphs[static_cast<std::size_t>(t)] = make_subgraph(t, num_nodes, of_type);
    }
    return g;
}

EdgeDistributionReport edge_statistics(const HeteroHypergraph& g) {
    EdgeDistributionReport report;
    for (const auto& e : g.edges) ++report.counts[static_cast<std::size_t>(e.type)];
    report.total = g.edges.size();
    if (report.total > 0) {
        for (std::size_t i = 0; i < 3; ++i) {
            report.percentages[i] = 100.0 * static_cast<double>(report.counts[i]) /
                                    static_cast<double>(report.total);
        }
    }
    return report;
}

Matrix incidence(const SubHypergraph& sub) { return sub.incidence; }

namespace {

Matrix propagation_from_incidence(const Matrix& inc, const std::vector<double>& weights,
                                  const std::vector<double>& node_degrees,
                                  const std::vector<double>& edge_degrees,
                                  HgcNormalization norm) {
    std::size_t num_nodes = inc.rows();
    std::size_t num_edges = inc.cols();
    Matrix prop(num_nodes, num_nodes);
    if (num_edges == 0) return prop;

    // S(v,e) = Inc(v,e) * dv(v)^(-1/2)  (symmetric) or Inc(v,e) (row),
    // P = [Dv^-1] S diag(W/De) S^T with the matching left scaling.
    std::vector<double> left(num_nodes, 0.0), right(num_nodes, 0.0);
    for (std::size_t v = 0; v < num_nodes; ++v) {
        double d = node_degrees[v];
        if (d <= 0.0) continue;  // emits and receives nothing
        if (norm == HgcNormalization::Symmetric) {
            left[v] = right[v] = 1.0 / std::sqrt(d);
        } else {
            left[v] = 1.0 / d;
            right[v] = 1.0;
        }
    }
    for (std::size_t e = 0; e < num_edges; ++e) {
        double we = weights[e] / edge_degrees[e];
        std::vector<std::size_t> members;
        for (std::size_t v = 0; v < num_nodes; ++v)
            if (inc(v, e) != 0.0) members.push_back(v);
        for (std::size_t v : members) {
            if (left[v] == 0.0) continue;
            for (std::size_t u : members) {
                prop(v, u) += left[v] * we * right[u];
            }
        }
    }
    return prop;
}

}  // namespace

Matrix propagation_matrix(const SubHypergraph& sub, HgcNormalization norm) {
    return propagation_from_incidence(sub.incidence, sub.edge_weights, sub.node_degrees,
                                      sub.edge_degrees, norm);
}

Matrix union_propagation_matrix(const HeteroHypergraph& g, HgcNormalization norm) {
    std::size_t num_nodes = g.num_nodes();
    Matrix inc(num_nodes, g.edges.size());
    std::vector<double> weights, edge_degrees;
    std::vector<double> node_degrees(num_nodes, 0.0);
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
        const Hyperedge& edge = g.edges[e];
        weights.push_back(edge.weight);
        edge_degrees.push_back(static_cast<double>(edge.members.size()));
        for (std::size_t v : edge.members) {
            inc(v, e) = 1.0;
            node_degrees[v] += edge.weight;
        }
    }
    return propagation_from_incidence(inc, weights, node_degrees, edge_degrees, norm);
}

void write_graph_report(std::ostream& out, const HeteroHypergraph& g) {
    EdgeDistributionReport report = edge_statistics(g);
    out << "nodes: " << g.num_nodes() << " (users " << g.num_users << ", contexts "
        << g.num_contexts << ", activities " << g.num_activities << ")\n";
    out << "edges: " << report.total << "\n";
    char buf[128];
    for (std::size_t i = 0; i < 3; ++i) {
        std::snprintf(buf, sizeof buf, "  %-3s  %zu  (%.6f%%)\n",
                      to_string(kEdgeTypes[i]), report.counts[i], report.percentages[i]);
        out << buf;
    }
    out << "skipped instances (no positive label): " << g.skipped_instances << "\n";
    out << "untouched nodes (zero init): " << g.untouched_nodes.size() << "\n";

    // Degree histogram per node type over the union of all edges.
    std::vector<std::size_t> degree(g.num_nodes(), 0);
    for (const auto& e : g.edges)
        for (std::size_t v : e.members) ++degree[v];
    for (NodeType t : {NodeType::User, NodeType::Context, NodeType::Activity}) {
        std::map<std::size_t, std::size_t> hist;
        for (std::size_t v = 0; v < g.num_nodes(); ++v)
            if (g.node_type(v) == t) ++hist[degree[v]];
        out << "degree histogram (" << to_string(t) << "):";
        for (const auto& [d, n] : hist) out << " " << d << ":" << n;
        out << "\n";
    }
}

void write_edges_csv(std::ostream& out, const HeteroHypergraph& g) {
    for (const auto& e : g.edges) {
        out << to_string(e.type);
        for (std::size_t v : e.members) out << "," << g.node_names[v];
        out << "," << e.instance_count << "\n";
    }
}

}  // namespace hyperact
