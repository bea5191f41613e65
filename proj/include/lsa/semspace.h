// Word-by-paragraph count matrix, its weighting, and the reduced semantic
// space answering cosine queries over words and word-built texts.

#ifndef LSA_SEMSPACE_H_
#define LSA_SEMSPACE_H_

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "lsa/corpus.h"
#include "lsa/svd.h"

namespace lsa {

enum class Weighting { kRaw, kLogEntropy };

std::string to_string(Weighting weighting);
// Accepts "raw" and "log-entropy"; throws ParameterError otherwise.
Weighting parse_weighting(std::string_view name);

// Rows are vocabulary words, columns paragraphs. Explicit zeros are never
// stored.
class TermDocMatrix {
public:
    TermDocMatrix() = default;
    TermDocMatrix(SparseMatrix entries, std::shared_ptr<const Vocabulary> vocabulary);

    static TermDocMatrix from_dense(const Eigen::MatrixXd &dense);

    const SparseMatrix &entries() const { return entries_; }
    double entry(WordId word, std::size_t paragraph) const {
        return entries_.coeff(word, static_cast<Eigen::Index>(paragraph));
    }
    Eigen::Index rows() const { return entries_.rows(); }
    Eigen::Index cols() const { return entries_.cols(); }

    // Set once a weighting scheme (even raw) has been applied.
    bool weighted() const { return weighted_; }
    Weighting weighting() const { return weighting_; }

    const std::shared_ptr<const Vocabulary> &vocabulary() const { return vocabulary_; }

private:
    friend TermDocMatrix apply_weighting(const TermDocMatrix &, Weighting);

    SparseMatrix entries_;
    std::shared_ptr<const Vocabulary> vocabulary_;
    bool weighted_ = false;
    Weighting weighting_ = Weighting::kRaw;
};

// Exact occurrence counts over the first `prefix_len` paragraphs. Rows span
// the whole corpus vocabulary. Throws EmptyCorpusError / ParameterError.
TermDocMatrix build_count_matrix(const Corpus &corpus);
TermDocMatrix build_count_matrix(const Corpus &corpus, std::size_t prefix_len);
// Same, attaching an existing vocabulary instead of copying the corpus one.
TermDocMatrix build_count_matrix(const Corpus &corpus, std::size_t prefix_len,
                                 std::shared_ptr<const Vocabulary> vocabulary);

// Count column of a single paragraph, sized to the corpus vocabulary.
SparseVector count_column(const Corpus &corpus, std::size_t paragraph);

// raw: identity. log-entropy: log(1 + count) * (1 - H(row) / log N), where
// H(row) is the entropy of the word's distribution over the N paragraphs.
// Throws StateError if the matrix is already weighted.
TermDocMatrix apply_weighting(const TermDocMatrix &matrix, Weighting scheme);

class SemanticSpace {
public:
    using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

    SemanticSpace() = default;
    SemanticSpace(Eigen::VectorXd singular_values, RowMatrix word_vectors,
                  std::shared_ptr<const Vocabulary> vocabulary);

    int dimension() const { return static_cast<int>(singular_values_.size()); }
    const Eigen::VectorXd &singular_values() const { return singular_values_; }
    const RowMatrix &word_vectors() const { return word_vectors_; }
    const std::shared_ptr<const Vocabulary> &vocabulary() const { return vocabulary_; }
    std::size_t word_count() const { return static_cast<std::size_t>(word_vectors_.rows()); }

    Eigen::VectorXd word_vector(WordId id) const;
    // Throws LookupError naming the word if it is out of vocabulary.
    Eigen::VectorXd word_vector(std::string_view word) const;
    bool contains(std::string_view word) const;

    Weighting weighting = Weighting::kRaw;
    std::uint64_t corpus_fingerprint = 0;
    bool degenerate_boundary = false;

private:
    Eigen::VectorXd singular_values_;
    RowMatrix word_vectors_;
    std::shared_ptr<const Vocabulary> vocabulary_;
};

// Word vectors are the rows of U_k * Sigma_k.
SemanticSpace truncated_svd(const TermDocMatrix &matrix, int k,
                            const SvdOptions &options = {});
SemanticSpace space_from_factors(const TruncatedSvd &factors,
                                 std::shared_ptr<const Vocabulary> vocabulary);

// dot(u, v) / (|u| |v|), clamped to [-1, 1]. Throws UndefinedSimilarityError
// on a zero vector and ParameterError on a dimension mismatch.
double cosine(const Eigen::Ref<const Eigen::VectorXd> &u,
              const Eigen::Ref<const Eigen::VectorXd> &v);

struct TextVector {
    Eigen::VectorXd vector;
    std::vector<std::string> skipped;  // out-of-vocabulary tokens, in order
};

// Sum of the word vectors of the in-vocabulary tokens, with multiplicity.
// Throws LookupError when no token is in the vocabulary.
TextVector text_vector(const SemanticSpace &space, const std::vector<std::string> &tokens);

// Convenience: cosine between the vectors of two words.
double word_similarity(const SemanticSpace &space, std::string_view w1, std::string_view w2);

}  // namespace lsa

#endif  // LSA_SEMSPACE_H_
