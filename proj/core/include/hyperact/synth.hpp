#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "hyperact/dataset.hpp"
#include "hyperact/matrix.hpp"

namespace hyperact {

/// Shape of a generated dataset with known structure, the desk-scale stand-in
/// for the large in-the-wild corpora.
struct SynthConfig {
    std::size_t users = 8;
    std::size_t contexts = 4;
    std::size_t activities = 6;
    std::size_t feature_dim = 32;
    std::size_t num_instances = 2000;
    double noise_sigma = 0.1;
    /// Probability that an instance reports no context at all / no
    /// activities at all. Never both for one instance.
    double p_missing_context = 0.0;
    double p_missing_activity = 0.0;
    /// Probability of drawing a second, distinct activity.
    double activity_cooccur = 0.3;
    std::uint64_t seed = 0;

    void validate() const;
};

struct SynthData {
    LabelSpace space;
    std::vector<LabeledInstance> instances;
    /// Ground-truth unit-norm prototype per node, rows ordered users,
    /// contexts, activities; kept for oracle checks against learned state.
    Matrix prototypes;
    std::vector<std::string> node_names;
};

/// Draws one unit-norm prototype per node, then per instance picks a user, a
/// context and one or two activities; features are the mean of the chosen
/// prototypes plus N(0, noise_sigma) per dimension. Label masking happens
/// after the features are computed, so masked structure still shapes the
/// signal. Context names are c0..c{|C|-1}, activities a0..a{|A|-1}.
///
/// Draw order per instance (fixed for reproducibility): user, context, first
/// activity, co-occurrence coin, optional second activity, feature_dim noise
/// draws, one masking draw.
SynthData generate_synthetic(const SynthConfig& cfg);

/// Side file: one row per node (name, prototype values), comma-separated.
void write_prototypes_csv(const std::filesystem::path& path, const SynthData& data);

}  // namespace hyperact
