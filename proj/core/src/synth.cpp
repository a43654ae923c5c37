#include "hyperact/synth.hpp"

#include <cmath>
#include <fstream>

#include "hyperact/errors.hpp"
#include "hyperact/rng.hpp"

namespace hyperact {

void SynthConfig::validate() const {
    if (users < 1 || contexts < 1 || activities < 1 || feature_dim < 1) {
        throw ConfigError("synthetic generator: users, contexts, activities and "
                          "feature_dim must all be >= 1");
    }
    auto check_prob = [](double p, const char* name) {
        if (p < 0.0 || p > 1.0)
            throw ConfigError(std::string("synthetic generator: ") + name +
                              " must lie in [0, 1]");
    };
    check_prob(p_missing_context, "p_missing_context");
    check_prob(p_missing_activity, "p_missing_activity");
    check_prob(activity_cooccur, "activity_cooccur");
    if (p_missing_context + p_missing_activity > 1.0) {
        throw ConfigError("synthetic generator: p_missing_context + p_missing_activity "
                          "must not exceed 1");
    }
    if (noise_sigma < 0.0) throw ConfigError("synthetic generator: noise_sigma must be >= 0");
}

SynthData generate_synthetic(const SynthConfig& cfg) {
    cfg.validate();
    Rng rng(cfg.seed);

    SynthData data;
    for (std::size_t i = 0; i < cfg.contexts; ++i)
        data.space.context_names.push_back("c" + std::to_string(i));
    for (std::size_t i = 0; i < cfg.activities; ++i)
        data.space.activity_names.push_back("a" + std::to_string(i));

    std::size_t num_nodes = cfg.users + cfg.contexts + cfg.activities;
    for (std::size_t u = 0; u < cfg.users; ++u)
        data.node_names.push_back("u" + std::to_string(u));
    for (const auto& n : data.space.context_names) data.node_names.push_back(n);
    for (const auto& n : data.space.activity_names) data.node_names.push_back(n);

    data.prototypes = Matrix(num_nodes, cfg.feature_dim);
    for (std::size_t v = 0; v < num_nodes; ++v) {
        double norm_sq = 0.0;
        for (std::size_t j = 0; j < cfg.feature_dim; ++j) {
            double x = rng.normal();
            data.prototypes(v, j) = x;
            norm_sq += x * x;
        }
        double norm = std::sqrt(norm_sq);
        if (norm < 1e-12) norm = 1.0;  // vanishing draw, practically unreachable
        for (std::size_t j = 0; j < cfg.feature_dim; ++j) data.prototypes(v, j) /= norm;
    }

    data.instances.reserve(cfg.num_instances);
    for (std::size_t n = 0; n < cfg.num_instances; ++n) {
        std::size_t user = rng.index(cfg.users);
        std::size_t context = rng.index(cfg.contexts);
        std::vector<std::size_t> acts{rng.index(cfg.activities)};
        if (cfg.activities >= 2 && rng.bernoulli(cfg.activity_cooccur)) {
            std::size_t second = rng.index(cfg.activities - 1);
            if (second >= acts[0]) ++second;
            acts.push_back(second);
        }

        LabeledInstance inst;
        inst.user = static_cast<int>(user);
        inst.features.assign(cfg.feature_dim, 0.0);
        std::vector<std::size_t> chosen{user, cfg.users + context};
        for (std::size_t a : acts) chosen.push_back(cfg.users + cfg.contexts + a);
        for (std::size_t j = 0; j < cfg.feature_dim; ++j) {
            double acc = 0.0;
            for (std::size_t v : chosen) acc += data.prototypes(v, j);
            inst.features[j] = acc / static_cast<double>(chosen.size());
        }
        for (std::size_t j = 0; j < cfg.feature_dim; ++j)
            inst.features[j] += cfg.noise_sigma * rng.normal();

        inst.context_labels.assign(cfg.contexts, TriState::Negative);
        inst.context_labels[context] = TriState::Positive;
        inst.activity_labels.assign(cfg.activities, TriState::Negative);
        for (std::size_t a : acts) inst.activity_labels[a] = TriState::Positive;

        double mask = rng.uniform();
        if (mask < cfg.p_missing_context) {
            inst.context_labels.assign(cfg.contexts, TriState::Missing);
        } else if (mask < cfg.p_missing_context + cfg.p_missing_activity) {
            inst.activity_labels.assign(cfg.activities, TriState::Missing);
        }
        data.instances.push_back(std::move(inst));
    }
    return data;
}

void write_prototypes_csv(const std::filesystem::path& path, const SynthData& data) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open for writing: " + path.string());
    out << "node";
    for (std::size_t j = 0; j < data.prototypes.cols(); ++j) out << ",p" << j;
    out << "\n";
    char buf[64];
    for (std::size_t v = 0; v < data.prototypes.rows(); ++v) {
        out << data.node_names[v];
        for (std::size_t j = 0; j < data.prototypes.cols(); ++j) {
            int len = std::snprintf(buf, sizeof buf, "%.17g", data.prototypes(v, j));
            out << ',';
            out.write(buf, len);
        }
        out << "\n";
    }
    if (!out) throw NumericError("write failed: " + path.string());
}

}  // namespace hyperact
