#include "hyperact/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include "hyperact/errors.hpp"

namespace hyperact {

namespace {

constexpr char kMagic[17] = "HYPERACTCKPT0001";  // 16 bytes on disk

void put_u64(std::ostream& out, std::uint64_t v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    out.write(reinterpret_cast<const char*>(b), 8);
}

void put_u8(std::ostream& out, std::uint8_t v) {
    out.put(static_cast<char>(v));
}

void put_f64(std::ostream& out, double v) {
    put_u64(out, std::bit_cast<std::uint64_t>(v));
}

void put_string(std::ostream& out, const std::string& s) {
    put_u64(out, s.size());
    out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

void put_matrix(std::ostream& out, const std::string& name, const Matrix& m) {
    put_string(out, name);
    put_u64(out, m.rows());
    put_u64(out, m.cols());
    for (double v : m.values()) put_f64(out, v);
}

std::uint64_t get_u64(std::istream& in) {
    unsigned char b[8];
    in.read(reinterpret_cast<char*>(b), 8);
    if (!in) throw NumericError("checkpoint: truncated file");
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
    return v;
}

std::uint8_t get_u8(std::istream& in) {
    int c = in.get();
    if (c == EOF) throw NumericError("checkpoint: truncated file");
    return static_cast<std::uint8_t>(c);
}

double get_f64(std::istream& in) { return std::bit_cast<double>(get_u64(in)); }

std::string get_string(std::istream& in) {
    std::uint64_t len = get_u64(in);
    if (len > (1u << 20)) throw NumericError("checkpoint: implausible string length");
    std::string s(len, '\0');
    in.read(s.data(), static_cast<std::streamsize>(len));
    if (!in) throw NumericError("checkpoint: truncated file");
    return s;
}

Matrix get_matrix(std::istream& in, std::string* name) {
    *name = get_string(in);
    std::uint64_t rows = get_u64(in);
    std::uint64_t cols = get_u64(in);
    Matrix m(rows, cols);
    for (double& v : m.values()) v = get_f64(in);
    return m;
}

}  // namespace

std::vector<NodeType> Checkpoint::node_types() const {
    std::vector<NodeType> types;
    types.reserve(node_names.size());
    for (std::size_t v = 0; v < node_names.size(); ++v) {
        if (v < num_users)
            types.push_back(NodeType::User);
        else if (v < num_users + space.num_contexts())
            types.push_back(NodeType::Context);
        else
            types.push_back(NodeType::Activity);
    }
    return types;
}

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open for writing: " + path.string());
    out.write(kMagic, 16);
    put_u64(out, ckpt.seed);

    const ModelConfig& mc = ckpt.params.config;
    put_u64(out, mc.num_layers);
    put_u64(out, mc.embed_dim);
    put_u64(out, mc.head_dim);
    put_u64(out, mc.input_dim);
    put_f64(out, mc.dropout_p);
    put_u8(out, static_cast<std::uint8_t>(mc.activation));
    put_u8(out, static_cast<std::uint8_t>(mc.normalization));
    put_u8(out, mc.edge_hetero ? 1 : 0);
    put_u8(out, mc.contrastive ? 1 : 0);

    put_u64(out, ckpt.space.num_contexts());
    for (const auto& n : ckpt.space.context_names) put_string(out, n);
    put_u64(out, ckpt.space.num_activities());
    for (const auto& n : ckpt.space.activity_names) put_string(out, n);

    put_u64(out, ckpt.num_users);
    put_u64(out, ckpt.node_names.size());
    for (const auto& n : ckpt.node_names) put_string(out, n);

    put_u8(out, static_cast<std::uint8_t>(ckpt.normalizer.mode));
    put_u64(out, ckpt.normalizer.shift.size());
    for (double v : ckpt.normalizer.shift) put_f64(out, v);
    for (double v : ckpt.normalizer.scale) put_f64(out, v);
    put_u64(out, ckpt.normalizer.degenerate_features.size());
    for (std::size_t i : ckpt.normalizer.degenerate_features) put_u64(out, i);

    put_f64(out, ckpt.best_val_mcc);
    put_u64(out, ckpt.best_epoch);

    auto named = ckpt.params.named();
    put_u64(out, named.size() + 1);
    for (const auto& [name, m] : named) put_matrix(out, name, *m);
    put_matrix(out, "node_embeddings", ckpt.node_embeddings);

    if (!out) throw NumericError("checkpoint write failed: " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open checkpoint: " + path.string());
    char magic[16];
    in.read(magic, 16);
    if (!in || std::memcmp(magic, kMagic, 16) != 0) {
        throw ConfigError("not a hyperact checkpoint (bad magic): " + path.string());
    }

    Checkpoint ckpt;
    ckpt.seed = get_u64(in);

    ModelConfig mc;
    mc.num_layers = get_u64(in);
    mc.embed_dim = get_u64(in);
    mc.head_dim = get_u64(in);
    mc.input_dim = get_u64(in);
    mc.dropout_p = get_f64(in);
    mc.activation = static_cast<Activation>(get_u8(in));
    mc.normalization = static_cast<HgcNormalization>(get_u8(in));
    mc.edge_hetero = get_u8(in) != 0;
    mc.contrastive = get_u8(in) != 0;

    std::uint64_t num_contexts = get_u64(in);
    for (std::uint64_t i = 0; i < num_contexts; ++i)
        ckpt.space.context_names.push_back(get_string(in));
    std::uint64_t num_activities = get_u64(in);
    for (std::uint64_t i = 0; i < num_activities; ++i)
        ckpt.space.activity_names.push_back(get_string(in));

    ckpt.num_users = get_u64(in);
    std::uint64_t num_nodes = get_u64(in);
    for (std::uint64_t i = 0; i < num_nodes; ++i)
        ckpt.node_names.push_back(get_string(in));

    ckpt.normalizer.mode = static_cast<NormalizerMode>(get_u8(in));
    std::uint64_t m = get_u64(in);
    ckpt.normalizer.shift.resize(m);
    for (double& v : ckpt.normalizer.shift) v = get_f64(in);
    ckpt.normalizer.scale.resize(m);
    for (double& v : ckpt.normalizer.scale) v = get_f64(in);
    std::uint64_t degenerate = get_u64(in);
    for (std::uint64_t i = 0; i < degenerate; ++i)
        ckpt.normalizer.degenerate_features.push_back(get_u64(in));

    ckpt.best_val_mcc = get_f64(in);
    ckpt.best_epoch = get_u64(in);

    // Rebuild the parameter skeleton from the config, then fill by name.
    Rng scratch(0);
    ckpt.params = ModelParams::init(mc, scratch);
    auto named = ckpt.params.named();
    std::uint64_t count = get_u64(in);
    if (count != named.size() + 1) {
        throw NumericError("checkpoint: expected " + std::to_string(named.size() + 1) +
                           " matrices, found " + std::to_string(count));
    }
    for (auto& [expected_name, target] : named) {
        std::string name;
        Matrix loaded = get_matrix(in, &name);
        if (name != expected_name) {
            throw NumericError("checkpoint: matrix '" + name + "' where '" +
                               expected_name + "' was expected");
        }
        if (!loaded.same_shape(*target)) {
            throw NumericError("checkpoint: matrix '" + name + "' has shape " +
                               loaded.shape_str() + ", expected " + target->shape_str());
        }
        *target = std::move(loaded);
    }
    std::string name;
    ckpt.node_embeddings = get_matrix(in, &name);
    if (name != "node_embeddings") {
        throw NumericError("checkpoint: trailing matrix must be node_embeddings");
    }
    return ckpt;
}

}  // namespace hyperact
