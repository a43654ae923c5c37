#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "hyperact/matrix.hpp"

namespace hyperact {

/// Tri-state label cell. Missing means the category was not reported for the
/// instance; missing cells are excluded from the loss and the metrics and
/// determine which hyperedge type the instance forms.
enum class TriState : std::uint8_t { Negative = 0, Positive = 1, Missing = 2 };

/// Names and structure of the label inventory. Target columns are always
/// ordered contexts first, then activities (H = |C| + |A|).
struct LabelSpace {
    std::vector<std::string> context_names;
    std::vector<std::string> activity_names;
    /// Activities within one group cannot co-occur; any two positives from
    /// the same group make an instance contradictory.
    std::vector<std::vector<std::string>> exclusive_activity_groups;

    std::size_t num_contexts() const { return context_names.size(); }
    std::size_t num_activities() const { return activity_names.size(); }
    std::size_t num_labels() const { return num_contexts() + num_activities(); }

    int context_index(const std::string& name) const;
    int activity_index(const std::string& name) const;

    /// Throws ConfigError if names repeat across the two lists or a group
    /// references an unknown activity.
    void validate() const;

    bool operator==(const LabelSpace& other) const {
        return context_names == other.context_names &&
               activity_names == other.activity_names;
    }

    /// Pairwise exclusions between Sleeping and the locomotion activities,
    /// restricted to names actually present in `activity_names`.
    static std::vector<std::vector<std::string>> default_exclusive_groups(
        const std::vector<std::string>& activity_names);
};

/// One pre-windowed observation: a feature vector, the reporting user and
/// tri-state context/activity labels sized to the label space.
struct LabeledInstance {
    int user = 0;
    std::vector<double> features;
    std::vector<TriState> context_labels;
    std::vector<TriState> activity_labels;

    std::size_t positive_context_count() const;
    /// Index of the positive context, or -1 when none.
    int positive_context() const;
    std::vector<std::size_t> positive_activities() const;
};

struct ConflictReport {
    std::size_t multiple_contexts = 0;
    std::size_t exclusive_activities = 0;
    std::size_t total() const { return multiple_contexts + exclusive_activities; }
};

/// Drops instances with more than one positive context (placements are
/// mutually exclusive) or with co-occurring positives inside one exclusive
/// activity group. Rejection is data, not failure; counts come back per rule.
std::pair<std::vector<LabeledInstance>, ConflictReport> resolve_conflicts(
    std::vector<LabeledInstance> instances, const LabelSpace& space);

struct SplitSpec {
    double train_fraction = 0.6;
    double val_fraction = 0.2;
    double test_fraction = 0.2;
    std::uint64_t seed = 0;
};

struct DataSplit {
    std::vector<LabeledInstance> train;
    std::vector<LabeledInstance> val;
    std::vector<LabeledInstance> test;
};

/// Seeded uniform partition. Val and test sizes are rounded from their
/// fractions; train takes the remainder. Deterministic per seed.
DataSplit split(const std::vector<LabeledInstance>& instances, const SplitSpec& spec);

enum class NormalizerMode { ZScore, MinMax };

/// Per-feature affine transform z = (x - shift) / scale fit on the training
/// set only. ZScore uses mean and population standard deviation; MinMax uses
/// min and range. Features with scale below 1e-12 are clamped to 1 and
/// recorded in `degenerate_features`.
struct Normalizer {
    NormalizerMode mode = NormalizerMode::ZScore;
    std::vector<double> shift;
    std::vector<double> scale;
    std::vector<std::size_t> degenerate_features;

    std::size_t feature_dim() const { return shift.size(); }
    void transform(std::vector<double>& features) const;
};

Normalizer fit_normalizer(const std::vector<LabeledInstance>& train,
                          NormalizerMode mode = NormalizerMode::ZScore);
std::vector<LabeledInstance> apply_normalizer(const Normalizer& n,
                                              std::vector<LabeledInstance> instances);

/// Stacks features into a batch x M matrix.
Matrix feature_matrix(const std::vector<LabeledInstance>& instances);

/// Batch x H tri-state target block, contexts first.
struct TargetMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<TriState> cells;

    TriState operator()(std::size_t r, std::size_t c) const { return cells[r * cols + c]; }
    TriState& operator()(std::size_t r, std::size_t c) { return cells[r * cols + c]; }

    static TargetMatrix from_instances(const std::vector<LabeledInstance>& instances,
                                       const LabelSpace& space);
};

// --- instance file format ---------------------------------------------------
//
// UTF-8, comma-separated, one header row:
//   user,f0,...,f{M-1},<context names...>,<activity names...>
// Label cells are `1` (positive), `0` (negative) or empty (missing).
// Names must not contain commas.

void write_instances_csv(const std::filesystem::path& path, const LabelSpace& space,
                         const std::vector<LabeledInstance>& instances);

struct LoadedInstances {
    LabelSpace space;
    std::vector<LabeledInstance> instances;
    std::size_t feature_dim = 0;
};

/// Reads the instance format. When `space` is given, header label columns
/// are matched against its names (any order after the feature block) and
/// absent categories load as missing. Without it, label columns are split
/// into contexts/activities by the generated-name convention c<k> / a<k>.
LoadedInstances read_instances_csv(const std::filesystem::path& path,
                                   const std::optional<LabelSpace>& space = std::nullopt);

}  // namespace hyperact
