#include "hyperact/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <charconv>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_set>

#include "hyperact/errors.hpp"
#include "hyperact/rng.hpp"

namespace hyperact {

namespace {

int find_name(const std::vector<std::string>& names, const std::string& name) {
    auto it = std::find(names.begin(), names.end(), name);
    return it == names.end() ? -1 : static_cast<int>(it - names.begin());
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur.push_back(ch);
        }
    }
    fields.push_back(cur);
    return fields;
}

double parse_double(const std::string& s, const char* what) {
    try {
        std::size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ConfigError(std::string("invalid number for ") + what + ": '" + s + "'");
    }
}

TriState parse_tristate(const std::string& s, const char* column) {
    if (s.empty()) return TriState::Missing;
    if (s == "1") return TriState::Positive;
    if (s == "0") return TriState::Negative;
    throw ConfigError(std::string("invalid label cell in column ") + column + ": '" +
                      s + "' (expected 1, 0 or empty)");
}

}  // namespace

int LabelSpace::context_index(const std::string& name) const {
    return find_name(context_names, name);
}

int LabelSpace::activity_index(const std::string& name) const {
    return find_name(activity_names, name);
}

void LabelSpace::validate() const {
    std::unordered_set<std::string> seen;
    for (const auto& n : context_names) {
        if (!seen.insert(n).second)
            throw ConfigError("label space: duplicate name '" + n + "'");
    }
    for (const auto& n : activity_names) {
        if (!seen.insert(n).second)
            throw ConfigError("label space: duplicate name '" + n + "'");
    }
    for (const auto& group : exclusive_activity_groups) {
        for (const auto& n : group) {
            if (activity_index(n) < 0)
                throw ConfigError("exclusive group references unknown activity '" + n + "'");
        }
    }
}

std::vector<std::vector<std::string>> LabelSpace::default_exclusive_groups(
    const std::vector<std::string>& activity_names) {
    static const char* kSedentary = "Sleeping";
    static const char* kMoving[] = {"Running",     "Walking",          "Jogging",
                                    "Exercising",  "Stairs-Going Up",  "Stairs-Going Down"};
    std::vector<std::vector<std::string>> groups;
    if (find_name(activity_names, kSedentary) < 0) return groups;
    for (const char* m : kMoving) {
        if (find_name(activity_names, m) >= 0) {
            groups.push_back({kSedentary, m});
        }
    }
    return groups;
}

std::size_t LabeledInstance::positive_context_count() const {
    return static_cast<std::size_t>(
        std::count(context_labels.begin(), context_labels.end(), TriState::Positive));
}

int LabeledInstance::positive_context() const {
    for (std::size_t i = 0; i < context_labels.size(); ++i)
        if (context_labels[i] == TriState::Positive) return static_cast<int>(i);
    return -1;
}

std::vector<std::size_t> LabeledInstance::positive_activities() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < activity_labels.size(); ++i)
        if (activity_labels[i] == TriState::Positive) out.push_back(i);
    return out;
}

std::pair<std::vector<LabeledInstance>, ConflictReport> resolve_conflicts(
    std::vector<LabeledInstance> instances, const LabelSpace& space) {
    // Exclusive groups as index sets, resolved once.
    std::vector<std::vector<std::size_t>> groups;
    for (const auto& g : space.exclusive_activity_groups) {
        std::vector<std::size_t> idx;
        for (const auto& name : g) {
            int i = space.activity_index(name);
            if (i < 0) throw ConfigError("exclusive group references unknown activity '" + name + "'");
            idx.push_back(static_cast<std::size_t>(i));
        }
        groups.push_back(std::move(idx));
    }

    ConflictReport report;
    std::vector<LabeledInstance> kept;
    kept.reserve(instances.size());
    for (auto& inst : instances) {
        if (inst.positive_context_count() > 1) {
            ++report.multiple_contexts;
            continue;
        }
        bool conflict = false;
        for (const auto& g : groups) {
            std::size_t positives = 0;
            for (std::size_t i : g)
                if (inst.activity_labels[i] == TriState::Positive) ++positives;
            if (positives > 1) {
                conflict = true;
                break;
            }
        }
        if (conflict) {
            ++report.exclusive_activities;
            continue;
        }
        kept.push_back(std::move(inst));
    }
    return {std::move(kept), report};
}

DataSplit split(const std::vector<LabeledInstance>& instances, const SplitSpec& spec) {
    double total = spec.train_fraction + spec.val_fraction + spec.test_fraction;
    if (std::abs(total - 1.0) > 1e-9) {
        throw ConfigError("split: fractions sum to " + std::to_string(total) +
                          ", expected 1");
    }
    if (spec.train_fraction < 0 || spec.val_fraction < 0 || spec.test_fraction < 0) {
        throw ConfigError("split: fractions must be nonnegative");
    }
    std::size_t n = instances.size();
    if (n < 5) throw ConfigError("split: need at least 5 instances, got " + std::to_string(n));

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    Rng rng(spec.seed);
    rng.shuffle(order);

    auto rounded = [n](double f) {
        return static_cast<std::size_t>(std::llround(f * static_cast<double>(n)));
    };
    std::size_t n_val = rounded(spec.val_fraction);
    std::size_t n_test = rounded(spec.test_fraction);
    if (n_val + n_test > n) throw ConfigError("split: rounded val+test exceed dataset");
    std::size_t n_train = n - n_val - n_test;

    DataSplit out;
    out.train.reserve(n_train);
    out.val.reserve(n_val);
    out.test.reserve(n_test);
    for (std::size_t i = 0; i < n; ++i) {
        const LabeledInstance& inst = instances[order[i]];
        if (i < n_train)
            out.train.push_back(inst);
        else if (i < n_train + n_val)
            out.val.push_back(inst);
        else
            out.test.push_back(inst);
    }
    return out;
}

void Normalizer::transform(std::vector<double>& features) const {
    if (features.size() != shift.size()) {
        throw ShapeError("normalizer: feature length " + std::to_string(features.size()) +
                         " vs fitted " + std::to_string(shift.size()));
    }
    for (std::size_t j = 0; j < features.size(); ++j)
        features[j] = (features[j] - shift[j]) / scale[j];
}

Normalizer fit_normalizer(const std::vector<LabeledInstance>& train, NormalizerMode mode) {
    if (train.empty()) throw ConfigError("fit_normalizer: empty training set");
    std::size_t m = train[0].features.size();
    Normalizer n;
    n.mode = mode;
    n.shift.assign(m, 0.0);
    n.scale.assign(m, 1.0);

    if (mode == NormalizerMode::ZScore) {
        std::vector<double> mean(m, 0.0);
        for (const auto& inst : train) {
            if (inst.features.size() != m)
                throw ShapeError("fit_normalizer: inconsistent feature length");
            for (std::size_t j = 0; j < m; ++j) mean[j] += inst.features[j];
        }
        for (double& v : mean) v /= static_cast<double>(train.size());
        std::vector<double> var(m, 0.0);
        for (const auto& inst : train) {
            for (std::size_t j = 0; j < m; ++j) {
                double d = inst.features[j] - mean[j];
                var[j] += d * d;
            }
        }
        for (std::size_t j = 0; j < m; ++j) {
            n.shift[j] = mean[j];
            double s = std::sqrt(var[j] / static_cast<double>(train.size()));
            if (s < 1e-12) {
                n.scale[j] = 1.0;
                n.degenerate_features.push_back(j);
            } else {
                n.scale[j] = s;
            }
        }
    } else {
        std::vector<double> lo(m, std::numeric_limits<double>::infinity());
        std::vector<double> hi(m, -std::numeric_limits<double>::infinity());
        for (const auto& inst : train) {
            if (inst.features.size() != m)
                throw ShapeError("fit_normalizer: inconsistent feature length");
            for (std::size_t j = 0; j < m; ++j) {
                lo[j] = std::min(lo[j], inst.features[j]);
                hi[j] = std::max(hi[j], inst.features[j]);
            }
        }
        for (std::size_t j = 0; j < m; ++j) {
            n.shift[j] = lo[j];
            double range = hi[j] - lo[j];
            if (range < 1e-12) {
                n.scale[j] = 1.0;
                n.degenerate_features.push_back(j);
            } else {
                n.scale[j] = range;
            }
        }
    }
    return n;
}

std::vector<LabeledInstance> apply_normalizer(const Normalizer& n,
                                              std::vector<LabeledInstance> instances) {
    for (auto& inst : instances) n.transform(inst.features);
    return instances;
}

Matrix feature_matrix(const std::vector<LabeledInstance>& instances) {
    if (instances.empty()) return Matrix();
    std::size_t m = instances[0].features.size();
    Matrix out(instances.size(), m);
    for (std::size_t i = 0; i < instances.size(); ++i) {
        if (instances[i].features.size() != m)
            throw ShapeError("feature_matrix: inconsistent feature length");
        for (std::size_t j = 0; j < m; ++j) out(i, j) = instances[i].features[j];
    }
    return out;
}

TargetMatrix TargetMatrix::from_instances(const std::vector<LabeledInstance>& instances,
                                          const LabelSpace& space) {
    TargetMatrix t;
    t.rows = instances.size();
    t.cols = space.num_labels();
    t.cells.assign(t.rows * t.cols, TriState::Missing);
    for (std::size_t i = 0; i < instances.size(); ++i) {
        const auto& inst = instances[i];
        if (inst.context_labels.size() != space.num_contexts() ||
            inst.activity_labels.size() != space.num_activities()) {
            throw ShapeError("targets: instance label sizes do not match label space");
        }
        for (std::size_t c = 0; c < space.num_contexts(); ++c)
            t(i, c) = inst.context_labels[c];
        for (std::size_t a = 0; a < space.num_activities(); ++a)
            t(i, space.num_contexts() + a) = inst.activity_labels[a];
    }
    return t;
}

void write_instances_csv(const std::filesystem::path& path, const LabelSpace& space,
                         const std::vector<LabeledInstance>& instances) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open for writing: " + path.string());

    std::size_t m = instances.empty() ? 0 : instances[0].features.size();
    out << "user";
    for (std::size_t j = 0; j < m; ++j) out << ",f" << j;
    for (const auto& n : space.context_names) out << "," << n;
    for (const auto& n : space.activity_names) out << "," << n;
    out << "\n";

    char buf[64];
    auto put_value = [&](double v) {
        int len = std::snprintf(buf, sizeof buf, "%.17g", v);
        out.write(buf, len);
    };
    for (const auto& inst : instances) {
        out << inst.user;
        for (double v : inst.features) {
            out << ',';
            put_value(v);
        }
        auto put_label = [&](TriState s) {
            out << ',';
            if (s == TriState::Positive)
                out << '1';
            else if (s == TriState::Negative)
                out << '0';
        };
        for (TriState s : inst.context_labels) put_label(s);
        for (TriState s : inst.activity_labels) put_label(s);
        out << "\n";
    }
    if (!out) throw NumericError("write failed: " + path.string());
}

LoadedInstances read_instances_csv(const std::filesystem::path& path,
                                   const std::optional<LabelSpace>& space) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open instance file: " + path.string());

    std::string line;
    if (!std::getline(in, line)) throw ConfigError("empty instance file: " + path.string());
    std::vector<std::string> header = split_csv_line(line);
    if (header.empty() || header[0] != "user")
        throw ConfigError("instance file must start with a 'user' column: " + path.string());

    std::size_t m = 0;
    std::size_t col = 1;
    while (col < header.size() && header[col] == "f" + std::to_string(m)) {
        ++m;
        ++col;
    }

    LoadedInstances loaded;
    loaded.feature_dim = m;

    // Map each remaining header column to a (is_context, index) slot.
    struct Slot {
        bool is_context;
        std::size_t index;
    };
    std::vector<Slot> slots;
    if (space.has_value()) {
        loaded.space = *space;
        for (std::size_t c = col; c < header.size(); ++c) {
            int ci = space->context_index(header[c]);
            int ai = space->activity_index(header[c]);
            if (ci >= 0)
                slots.push_back({true, static_cast<std::size_t>(ci)});
            else if (ai >= 0)
                slots.push_back({false, static_cast<std::size_t>(ai)});
            else
                throw ConfigError("instance column '" + header[c] +
                                  "' is not in the configured label space");
        }
    } else {
        // Generated-name convention: contexts c<k>, activities a<k>.
        for (std::size_t c = col; c < header.size(); ++c) {
            const std::string& name = header[c];
            bool ctx = name.size() > 1 && name[0] == 'c' &&
                       name.find_first_not_of("0123456789", 1) == std::string::npos;
            bool act = name.size() > 1 && name[0] == 'a' &&
                       name.find_first_not_of("0123456789", 1) == std::string::npos;
            if (ctx) {
                slots.push_back({true, loaded.space.context_names.size()});
                loaded.space.context_names.push_back(name);
            } else if (act) {
                slots.push_back({false, loaded.space.activity_names.size()});
                loaded.space.activity_names.push_back(name);
            } else {
                throw ConfigError(
                    "cannot infer label category for column '" + name +
                    "'; declare the label space in the [labels] config section");
            }
        }
    }
    loaded.space.validate();

    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        std::vector<std::string> fields = split_csv_line(line);
        if (fields.size() != header.size()) {
            throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": has " +
                              std::to_string(fields.size()) + " fields, header has " +
                              std::to_string(header.size()));
        }
        LabeledInstance inst;
        inst.user = static_cast<int>(parse_double(fields[0], "user"));
        inst.features.reserve(m);
        for (std::size_t j = 0; j < m; ++j)
            inst.features.push_back(parse_double(fields[1 + j], "feature"));
        inst.context_labels.assign(loaded.space.num_contexts(), TriState::Missing);
        inst.activity_labels.assign(loaded.space.num_activities(), TriState::Missing);
        for (std::size_t s = 0; s < slots.size(); ++s) {
            TriState v = parse_tristate(fields[col + s], header[col + s].c_str());
            if (slots[s].is_context)
                inst.context_labels[slots[s].index] = v;
            else
                inst.activity_labels[slots[s].index] = v;
        }
        loaded.instances.push_back(std::move(inst));
    }
    return loaded;
}

}  // namespace hyperact
