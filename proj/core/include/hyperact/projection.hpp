#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "hyperact/graph.hpp"
#include "hyperact/matrix.hpp"

namespace hyperact {

/// Mean same-type cosine similarity minus mean cross-type cosine similarity
/// over all node pairs, computed in the original embedding space. Zero-norm
/// rows are left out of both means. The quantitative stand-in for eyeballing
/// a 2D plot: well-separated type clusters push it toward 1.
double separation_score(const Matrix& embeddings, const std::vector<NodeType>& types);

struct ProjectionResult {
    Matrix coords;  // |V| x 2
    double separation = 0.0;
    double explained_variance_ratio = 0.0;  // of the two kept components
};

/// PCA to two components (deterministic: Jacobi eigensolver, sign fixed so
/// each component's largest-magnitude loading is positive). Requires at
/// least 3 nodes.
ProjectionResult pca_project(const Matrix& embeddings,
                             const std::vector<NodeType>& types);

/// Per-node rows: name, type, x, y. Comma-separated, six decimals.
void write_projection_csv(std::ostream& out, const std::vector<std::string>& names,
                          const std::vector<NodeType>& types, const Matrix& coords);

/// Self-contained SVG scatter, points colored red/green/blue for
/// user/context/activity nodes.
void write_scatter_svg(std::ostream& out, const std::vector<NodeType>& types,
                       const Matrix& coords);

}  // namespace hyperact
