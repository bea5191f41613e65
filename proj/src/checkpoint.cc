#include "lsa/checkpoint.h"

#include <array>
#include <cstdio>
#include <fstream>

#include "binary_io.h"
#include "json.hpp"
#include "lsa/error.h"

namespace lsa {
namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

constexpr std::array<char, 8> kFactorMagic = {'L', 'S', 'A', 'F', 'A', 'C', 'T', 'R'};
constexpr const char *kStateFile = "checkpoint.json";

// Writes through a temporary sibling and renames it into place.
template <typename Writer>
void replace_file(const fs::path &path, std::ios::openmode mode, Writer write) {
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, mode | std::ios::trunc);
        if (!out) throw InputError("cannot write " + tmp.string());
        write(out);
        out.flush();
        if (!out) throw InputError("failed writing " + tmp.string());
    }
    fs::rename(tmp, path);
}

std::string factor_file_name(std::size_t prefix_length) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "factors-%09zu.bin", prefix_length);
    return buf;
}

template <typename T>
T field(const ordered_json &doc, const char *key) {
    auto it = doc.find(key);
    if (it == doc.end()) throw InputError(std::string("checkpoint lacks field \"") + key + "\"");
    try {
        return it->get<T>();
    } catch (const ordered_json::exception &) {
        throw InputError(std::string("checkpoint field \"") + key + "\" has the wrong type");
    }
}

}  // namespace

std::string run_identity(const TraceConfig &config, const std::vector<TracedPair> &pairs,
                         std::uint64_t corpus_fingerprint) {
    ordered_json doc;
    doc["corpus_fingerprint"] = fingerprint_hex(corpus_fingerprint);
    doc["start"] = config.start_len;
    doc["end"] = config.end_len;
    doc["dimensions"] = config.k;
    doc["weighting"] = to_string(config.weighting);
    doc["mode"] = to_string(config.mode);
    doc["incremental_tolerance"] = config.incremental_tolerance;
    doc["orthogonality_threshold"] = config.orthogonality_threshold;
    doc["svd_tolerance"] = config.svd.tolerance;
    doc["svd_seed"] = config.svd.seed;
    auto &list = doc["pairs"] = ordered_json::array();
    for (const auto &p : pairs) list.push_back({p.w1, p.w2});
    return doc.dump();
}

void write_factors(std::ostream &out, const IncrementalSvd &factors) {
    using binary::put;
    using binary::put_double;
    out.write(kFactorMagic.data(), kFactorMagic.size());
    put<std::uint32_t>(out, kCheckpointFormatVersion);
    put<std::uint64_t>(out, static_cast<std::uint64_t>(factors.rows()));
    put<std::uint64_t>(out, static_cast<std::uint64_t>(factors.cols()));
    put<std::uint64_t>(out, static_cast<std::uint64_t>(factors.rank()));
    for (double v : factors.values()) put_double(out, v);
    for (Eigen::Index j = 0; j < factors.left().cols(); ++j) {
        for (Eigen::Index i = 0; i < factors.left().rows(); ++i) {
            put_double(out, factors.left()(i, j));
        }
    }
    for (Eigen::Index j = 0; j < factors.right().cols(); ++j) {
        for (Eigen::Index i = 0; i < factors.right().rows(); ++i) {
            put_double(out, factors.right()(i, j));
        }
    }
}

IncrementalSvd read_factors(std::istream &in) {
    using binary::get;
    using binary::get_double;
    std::array<char, 8> magic{};
    if (!in.read(magic.data(), magic.size()) || magic != kFactorMagic) {
        throw InputError("not a factor file (bad magic)");
    }
    if (get<std::uint32_t>(in) != kCheckpointFormatVersion) {
        throw InputError("unsupported factor file version");
    }
    const auto rows = static_cast<Eigen::Index>(get<std::uint64_t>(in));
    const auto cols = static_cast<Eigen::Index>(get<std::uint64_t>(in));
    const auto rank = static_cast<Eigen::Index>(get<std::uint64_t>(in));
    if (rank > rows || rank > cols) throw InputError("factor file rank exceeds its shape");
    Eigen::VectorXd values(rank);
    for (Eigen::Index i = 0; i < rank; ++i) values(i) = get_double(in);
    Eigen::MatrixXd left(rows, rank);
    for (Eigen::Index j = 0; j < rank; ++j) {
        for (Eigen::Index i = 0; i < rows; ++i) left(i, j) = get_double(in);
    }
    Eigen::MatrixXd right(cols, rank);
    for (Eigen::Index j = 0; j < rank; ++j) {
        for (Eigen::Index i = 0; i < cols; ++i) right(i, j) = get_double(in);
    }
    IncrementalSvd factors;
    factors.assign(rows, cols, std::move(values), std::move(left), std::move(right));
    return factors;
}

void save_checkpoint(const fs::path &dir, const Checkpoint &checkpoint) {
    fs::create_directories(dir);
    const TraceState &state = checkpoint.state;

    ordered_json doc;
    doc["format_version"] = kCheckpointFormatVersion;
    doc["run"] = ordered_json::parse(checkpoint.run_identity);
    doc["prefix_length"] = state.prefix_length;
    doc["trace_bytes"] = checkpoint.trace_bytes;
    doc["initial"] = state.initial;
    doc["current"] = state.current;
    doc["gains"] = state.gains;
    auto &fallbacks = doc["fallbacks"] = ordered_json::array();
    for (const auto &f : state.fallbacks) {
        fallbacks.push_back({{"step", f.step},
                             {"paragraph_id", f.paragraph_id},
                             {"orthogonality_loss", f.orthogonality_loss}});
    }
    doc["undefined_similarities"] = state.undefined_similarities;
    doc["degenerate_boundary_seen"] = state.degenerate_boundary_seen;

    std::string factor_name;
    if (state.factors) {
        factor_name = factor_file_name(state.prefix_length);
        replace_file(dir / factor_name, std::ios::binary,
                     [&](std::ostream &out) { write_factors(out, *state.factors); });
        doc["factors"] = factor_name;
    } else {
        doc["factors"] = nullptr;
    }
    replace_file(dir / kStateFile, std::ios::out,
                 [&](std::ostream &out) { out << doc.dump(2) << '\n'; });

    // Factor files of earlier checkpoints are no longer referenced.
    for (const auto &entry : fs::directory_iterator(dir)) {
        const std::string name = entry.path().filename().string();
        if (name.rfind("factors-", 0) == 0 && name != factor_name) fs::remove(entry.path());
    }
}

std::optional<Checkpoint> load_checkpoint(const fs::path &dir) {
    const fs::path path = dir / kStateFile;
    if (!fs::exists(path)) return std::nullopt;
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path.string());
    ordered_json doc;
    try {
        doc = ordered_json::parse(in);
    } catch (const ordered_json::exception &e) {
        throw InputError("corrupt checkpoint " + path.string() + ": " + e.what());
    }
    if (!doc.is_object() ||
        field<std::uint32_t>(doc, "format_version") != kCheckpointFormatVersion) {
        throw InputError("unsupported checkpoint format in " + path.string());
    }

    Checkpoint checkpoint;
    checkpoint.run_identity = field<ordered_json>(doc, "run").dump();
    checkpoint.trace_bytes = field<std::uint64_t>(doc, "trace_bytes");
    TraceState &state = checkpoint.state;
    state.prefix_length = field<std::size_t>(doc, "prefix_length");
    state.initial = field<std::vector<double>>(doc, "initial");
    state.current = field<std::vector<double>>(doc, "current");
    state.gains = field<std::vector<CategoryGains>>(doc, "gains");
    for (const auto &f : field<ordered_json>(doc, "fallbacks")) {
        state.fallbacks.push_back(FallbackEvent{field<std::size_t>(f, "step"),
                                                field<std::size_t>(f, "paragraph_id"),
                                                field<double>(f, "orthogonality_loss")});
    }
    state.undefined_similarities = field<std::size_t>(doc, "undefined_similarities");
    state.degenerate_boundary_seen = field<bool>(doc, "degenerate_boundary_seen");
    const auto factors = doc.find("factors");
    if (factors != doc.end() && factors->is_string()) {
        const fs::path factor_path = dir / factors->get<std::string>();
        std::ifstream fin(factor_path, std::ios::binary);
        if (!fin) throw InputError("checkpoint factor file missing: " + factor_path.string());
        state.factors = read_factors(fin);
    }
    return checkpoint;
}

}  // namespace lsa
