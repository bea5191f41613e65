#include "lsa/space_io.h"

#include <array>
#include <cstring>
#include <fstream>

#include "binary_io.h"
#include "json.hpp"
#include "lsa/error.h"

namespace lsa {
namespace {

using binary::get;
using binary::get_double;
using binary::put;
using binary::put_double;

constexpr std::array<char, 8> kMagic = {'L', 'S', 'A', 'S', 'P', 'A', 'C', 'E'};

}  // namespace

void write_space(std::ostream &out, const SemanticSpace &space) {
    if (!space.vocabulary()) throw StateError("cannot serialize a space without vocabulary");
    const auto k = static_cast<std::uint32_t>(space.dimension());
    const auto words = static_cast<std::uint64_t>(space.word_count());
    out.write(kMagic.data(), kMagic.size());
    put<std::uint32_t>(out, kSpaceFormatVersion);
    put<std::uint32_t>(out, k);
    put<std::uint64_t>(out, words);
    put<std::uint8_t>(out, space.weighting == Weighting::kRaw ? 0 : 1);
    put<std::uint8_t>(out, space.degenerate_boundary ? 1 : 0);
    put<std::uint64_t>(out, space.corpus_fingerprint);
    for (std::uint32_t i = 0; i < k; ++i) put_double(out, space.singular_values()(i));
    const auto &vectors = space.word_vectors();
    for (std::uint64_t w = 0; w < words; ++w) {
        for (std::uint32_t i = 0; i < k; ++i) {
            put_double(out, vectors(static_cast<Eigen::Index>(w), i));
        }
    }
    for (const auto &word : space.vocabulary()->words()) {
        put<std::uint32_t>(out, static_cast<std::uint32_t>(word.size()));
        out.write(word.data(), static_cast<std::streamsize>(word.size()));
    }
    if (!out) throw Error(ErrorKind::kInternal, "failed writing semantic space");
}

SemanticSpace read_space(std::istream &in) {
    std::array<char, 8> magic{};
    if (!in.read(magic.data(), magic.size()) || magic != kMagic) {
        throw InputError("not a semantic space file (bad magic)");
    }
    const auto version = get<std::uint32_t>(in);
    if (version != kSpaceFormatVersion) {
        throw InputError("unsupported semantic space format version " + std::to_string(version));
    }
    const auto k = get<std::uint32_t>(in);
    const auto words = get<std::uint64_t>(in);
    const auto weighting = get<std::uint8_t>(in);
    const auto flags = get<std::uint8_t>(in);
    const auto fingerprint = get<std::uint64_t>(in);
    if (weighting > 1) throw InputError("unknown weighting code in semantic space file");

    Eigen::VectorXd values(k);
    for (std::uint32_t i = 0; i < k; ++i) values(i) = get_double(in);
    SemanticSpace::RowMatrix vectors(static_cast<Eigen::Index>(words), k);
    for (std::uint64_t w = 0; w < words; ++w) {
        for (std::uint32_t i = 0; i < k; ++i) {
            vectors(static_cast<Eigen::Index>(w), i) = get_double(in);
        }
    }
    auto vocabulary = std::make_shared<Vocabulary>();
    for (std::uint64_t w = 0; w < words; ++w) {
        const auto length = get<std::uint32_t>(in);
        std::string word(length, '\0');
        if (!in.read(word.data(), length)) throw InputError("semantic space file is truncated");
        if (vocabulary->add(word) != static_cast<WordId>(w)) {
            throw InputError("duplicate word in semantic space vocabulary: " + word);
        }
    }
    SemanticSpace space(std::move(values), std::move(vectors), std::move(vocabulary));
    space.weighting = weighting == 0 ? Weighting::kRaw : Weighting::kLogEntropy;
    space.degenerate_boundary = (flags & 1) != 0;
    space.corpus_fingerprint = fingerprint;
    return space;
}

void save_space(const std::filesystem::path &path, const SemanticSpace &space) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write " + path.string());
    write_space(out, space);
}

SemanticSpace load_space(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open semantic space " + path.string());
    return read_space(in);
}

void write_space_json(std::ostream &out, const SemanticSpace &space) {
    nlohmann::ordered_json doc;
    doc["format_version"] = kSpaceFormatVersion;
    doc["k"] = space.dimension();
    doc["weighting"] = to_string(space.weighting);
    doc["corpus_fingerprint"] = fingerprint_hex(space.corpus_fingerprint);
    doc["singular_values"] = std::vector<double>(space.singular_values().begin(),
                                                 space.singular_values().end());
    doc["vocabulary"] = space.vocabulary() ? space.vocabulary()->words()
                                           : std::vector<std::string>{};
    auto &vectors = doc["vectors"] = nlohmann::ordered_json::array();
    for (Eigen::Index w = 0; w < space.word_vectors().rows(); ++w) {
        const auto row = space.word_vectors().row(w);
        vectors.push_back(std::vector<double>(row.begin(), row.end()));
    }
    out << doc.dump() << '\n';
}

}  // namespace lsa
