#include "lsa/semspace.h"

#include <algorithm>
#include <cmath>
#include <map>

#include "lsa/error.h"

namespace lsa {

std::string to_string(Weighting weighting) {
    return weighting == Weighting::kRaw ? "raw" : "log-entropy";
}

Weighting parse_weighting(std::string_view name) {
    if (name == "raw") return Weighting::kRaw;
    if (name == "log-entropy") return Weighting::kLogEntropy;
    throw ParameterError("unknown weighting scheme: " + std::string(name));
}

TermDocMatrix::TermDocMatrix(SparseMatrix entries, std::shared_ptr<const Vocabulary> vocabulary)
    : entries_(std::move(entries)), vocabulary_(std::move(vocabulary)) {
    entries_.prune(0.0, 0.0);
    entries_.makeCompressed();
}

TermDocMatrix TermDocMatrix::from_dense(const Eigen::MatrixXd &dense) {
    return TermDocMatrix(dense.sparseView(), nullptr);
}

TermDocMatrix build_count_matrix(const Corpus &corpus) {
    return build_count_matrix(corpus, corpus.size());
}

TermDocMatrix build_count_matrix(const Corpus &corpus, std::size_t prefix_len) {
    return build_count_matrix(corpus, prefix_len,
                              std::make_shared<const Vocabulary>(corpus.vocabulary()));
}

TermDocMatrix build_count_matrix(const Corpus &corpus, std::size_t prefix_len,
                                 std::shared_ptr<const Vocabulary> vocabulary) {
    if (corpus.empty()) throw EmptyCorpusError();
    if (prefix_len > corpus.size()) {
        throw ParameterError("prefix length " + std::to_string(prefix_len) +
                             " exceeds corpus size " + std::to_string(corpus.size()));
    }
    const auto rows = static_cast<Eigen::Index>(corpus.vocabulary().size());
    SparseMatrix entries(rows, static_cast<Eigen::Index>(prefix_len));
    std::vector<Eigen::Triplet<double>> triplets;
    for (std::size_t p = 0; p < prefix_len; ++p) {
        for (WordId w : corpus.paragraph(p).word_ids) {
            triplets.emplace_back(w, static_cast<int>(p), 1.0);
        }
    }
    // Duplicates are summed, which is exactly the occurrence count.
    entries.setFromTriplets(triplets.begin(), triplets.end());
    return TermDocMatrix(std::move(entries), std::move(vocabulary));
}

SparseVector count_column(const Corpus &corpus, std::size_t paragraph) {
    std::map<WordId, double> counts;
    for (WordId w : corpus.paragraph(paragraph).word_ids) counts[w] += 1.0;
    SparseVector column(static_cast<Eigen::Index>(corpus.vocabulary().size()));
    column.reserve(static_cast<Eigen::Index>(counts.size()));
    for (const auto &[w, c] : counts) column.insertBack(w) = c;
    return column;
}

TermDocMatrix apply_weighting(const TermDocMatrix &matrix, Weighting scheme) {
    if (matrix.weighted()) {
        throw StateError("matrix already carries " + to_string(matrix.weighting()) +
                         " weighting");
    }
    TermDocMatrix out = matrix;
    out.weighted_ = true;
    out.weighting_ = scheme;
    if (scheme == Weighting::kRaw) return out;

    const SparseMatrix &counts = matrix.entries();
    const Eigen::Index docs = counts.cols();
    const Eigen::VectorXd global_frequency = counts * Eigen::VectorXd::Ones(docs);

    // Row entropy, accumulated column by column.
    Eigen::VectorXd entropy = Eigen::VectorXd::Zero(counts.rows());
    for (Eigen::Index col = 0; col < docs; ++col) {
        for (SparseMatrix::InnerIterator it(counts, col); it; ++it) {
            const double p = it.value() / global_frequency(it.row());
            entropy(it.row()) -= p * std::log(p);
        }
    }
    Eigen::VectorXd global_weight = Eigen::VectorXd::Ones(counts.rows());
    if (docs > 1) {
        const double log_docs = std::log(static_cast<double>(docs));
        for (Eigen::Index w = 0; w < counts.rows(); ++w) {
            const double g = 1.0 - entropy(w) / log_docs;
            global_weight(w) = std::abs(g) < 1e-12 ? 0.0 : g;
        }
    }

    SparseMatrix weighted = counts;
    for (Eigen::Index col = 0; col < weighted.outerSize(); ++col) {
        for (SparseMatrix::InnerIterator it(weighted, col); it; ++it) {
            it.valueRef() = std::log1p(it.value()) * global_weight(it.row());
        }
    }
    weighted.prune(0.0, 0.0);
    weighted.makeCompressed();
    out.entries_ = std::move(weighted);
    return out;
}

SemanticSpace::SemanticSpace(Eigen::VectorXd singular_values, RowMatrix word_vectors,
                             std::shared_ptr<const Vocabulary> vocabulary)
    : singular_values_(std::move(singular_values)),
      word_vectors_(std::move(word_vectors)),
      vocabulary_(std::move(vocabulary)) {
    if (word_vectors_.cols() != singular_values_.size()) {
        throw ParameterError("word vectors and singular values disagree on k");
    }
    if (vocabulary_ && vocabulary_->size() != static_cast<std::size_t>(word_vectors_.rows())) {
        throw ParameterError("vocabulary size does not match the number of word vectors");
    }
}

Eigen::VectorXd SemanticSpace::word_vector(WordId id) const {
    if (id < 0 || id >= word_vectors_.rows()) {
        throw LookupError("word id out of range: " + std::to_string(id));
    }
    return word_vectors_.row(id).transpose();
}

Eigen::VectorXd SemanticSpace::word_vector(std::string_view word) const {
    if (!vocabulary_) throw LookupError("space has no vocabulary; cannot look up " +
                                        std::string(word));
    return word_vector(vocabulary_->index_of(word));
}

bool SemanticSpace::contains(std::string_view word) const {
    return vocabulary_ && vocabulary_->contains(word);
}

SemanticSpace space_from_factors(const TruncatedSvd &factors,
                                 std::shared_ptr<const Vocabulary> vocabulary) {
    SemanticSpace::RowMatrix vectors = factors.left * factors.values.asDiagonal();
    SemanticSpace space(factors.values, std::move(vectors), std::move(vocabulary));
    space.degenerate_boundary = factors.degenerate_boundary;
    return space;
}

SemanticSpace truncated_svd(const TermDocMatrix &matrix, int k, const SvdOptions &options) {
    const TruncatedSvd factors = truncated_svd_factors(matrix.entries(), k, options);
    SemanticSpace space = space_from_factors(factors, matrix.vocabulary());
    space.weighting = matrix.weighting();
    return space;
}

double cosine(const Eigen::Ref<const Eigen::VectorXd> &u,
              const Eigen::Ref<const Eigen::VectorXd> &v) {
    if (u.size() != v.size()) {
        throw ParameterError("cosine of vectors of different dimension (" +
                             std::to_string(u.size()) + " vs " + std::to_string(v.size()) + ")");
    }
    const double nu = u.norm();
    const double nv = v.norm();
    if (nu == 0.0 || nv == 0.0) throw UndefinedSimilarityError("cosine with a zero vector");
    const double c = u.dot(v) / (nu * nv);
    return std::clamp(c, -1.0, 1.0);
}

TextVector text_vector(const SemanticSpace &space, const std::vector<std::string> &tokens) {
    TextVector out;
    out.vector = Eigen::VectorXd::Zero(space.dimension());
    bool any = false;
    for (const auto &t : tokens) {
        if (!space.contains(t)) {
            out.skipped.push_back(t);
            continue;
        }
        out.vector += space.word_vector(t);
        any = true;
    }
    if (!any) throw LookupError("no token of the text is in the vocabulary");
    return out;
}

double word_similarity(const SemanticSpace &space, std::string_view w1, std::string_view w2) {
    return cosine(space.word_vector(w1), space.word_vector(w2));
}

}  // namespace lsa
