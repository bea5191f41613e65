#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <random>
#include <sstream>

#include "json.hpp"
#include "lsa/error.h"
#include "lsa/semspace.h"
#include "lsa/space_io.h"
#include "oracles.h"

namespace {

using Eigen::VectorXd;

TEST(CountMatrix, HandCountedEntries) {
    const auto corpus = lsa::Corpus::from_tokens({{"a", "b", "a"}, {"b"}});
    const auto m = lsa::build_count_matrix(corpus);
    EXPECT_EQ(m.rows(), 2);
    EXPECT_EQ(m.cols(), 2);
    EXPECT_EQ(m.entry(0, 0), 2.0);
    EXPECT_EQ(m.entry(1, 0), 1.0);
    EXPECT_EQ(m.entry(1, 1), 1.0);
    EXPECT_EQ(m.entry(0, 1), 0.0);
    EXPECT_EQ(m.entries().nonZeros(), 3);
    EXPECT_FALSE(m.weighted());
}

TEST(CountMatrix, RepeatedWordIsOneEntry) {
    const auto corpus = lsa::Corpus::from_tokens({{"x", "x", "x", "x", "x"}});
    const auto m = lsa::build_count_matrix(corpus);
    EXPECT_EQ(m.entries().nonZeros(), 1);
    EXPECT_EQ(m.entry(0, 0), 5.0);
}

TEST(CountMatrix, AgreesWithNaiveRecount) {
    std::mt19937_64 rng(20);
    const auto raw = oracle::random_corpus(rng, 20, 30, 15);
    const auto corpus = lsa::Corpus::from_tokens(raw);
    const auto m = lsa::build_count_matrix(corpus);
    for (std::size_t p = 0; p < raw.size(); ++p) {
        std::map<std::string, double> counts;
        for (const auto &w : raw[p]) counts[w] += 1.0;
        double column_sum = 0.0;
        for (lsa::SparseMatrix::InnerIterator it(m.entries(), static_cast<int>(p)); it; ++it) {
            EXPECT_NE(it.value(), 0.0);
            const auto &word = corpus.vocabulary().word_of(static_cast<lsa::WordId>(it.row()));
            EXPECT_EQ(it.value(), counts[word]);
            column_sum += it.value();
        }
        EXPECT_EQ(column_sum, static_cast<double>(raw[p].size()));
    }
}

TEST(CountMatrix, PrefixKeepsFullVocabularyRows) {
    const auto corpus = lsa::Corpus::from_tokens({{"a"}, {"b"}, {"c"}});
    const auto m = lsa::build_count_matrix(corpus, 1);
    EXPECT_EQ(m.rows(), 3);
    EXPECT_EQ(m.cols(), 1);
    EXPECT_THROW(lsa::build_count_matrix(corpus, 4), lsa::ParameterError);
    EXPECT_THROW(lsa::build_count_matrix(lsa::Corpus{}), lsa::EmptyCorpusError);
}

TEST(Weighting, RawIsBitwiseIdentity) {
    std::mt19937_64 rng(1);
    const auto corpus = lsa::Corpus::from_tokens(oracle::random_corpus(rng, 15, 20, 8));
    const auto m = lsa::build_count_matrix(corpus);
    const auto w = lsa::apply_weighting(m, lsa::Weighting::kRaw);
    EXPECT_TRUE(w.weighted());
    EXPECT_TRUE(m.entries().toDense() == w.entries().toDense());
}

TEST(Weighting, SingleParagraphWordKeepsLocalWeight) {
    const auto corpus = lsa::Corpus::from_tokens({{"a", "a", "a", "b"}, {"b", "c"}, {"b"}});
    const auto w =
        lsa::apply_weighting(lsa::build_count_matrix(corpus), lsa::Weighting::kLogEntropy);
    EXPECT_DOUBLE_EQ(w.entry(0, 0), std::log(1.0 + 3.0));
}

TEST(Weighting, UniformWordVanishes) {
    const auto corpus = lsa::Corpus::from_tokens({{"u", "a"}, {"u", "b"}, {"u"}, {"u", "a"}});
    const auto w =
        lsa::apply_weighting(lsa::build_count_matrix(corpus), lsa::Weighting::kLogEntropy);
    for (int p = 0; p < 4; ++p) EXPECT_EQ(w.entry(0, p), 0.0);
    EXPECT_GT(w.entry(1, 0), 0.0);
    // No explicit zeros are stored.
    for (int col = 0; col < w.entries().outerSize(); ++col) {
        for (lsa::SparseMatrix::InnerIterator it(w.entries(), col); it; ++it) {
            EXPECT_NE(it.value(), 0.0);
        }
    }
}

TEST(Weighting, GeneralEntryMatchesHandFormula) {
    // Word "a": counts 2 and 1 over 3 paragraphs.
    const auto corpus = lsa::Corpus::from_tokens({{"a", "a"}, {"a", "b"}, {"b"}});
    const auto w =
        lsa::apply_weighting(lsa::build_count_matrix(corpus), lsa::Weighting::kLogEntropy);
    const double p1 = 2.0 / 3.0, p2 = 1.0 / 3.0;
    const double g = 1.0 + (p1 * std::log(p1) + p2 * std::log(p2)) / std::log(3.0);
    EXPECT_NEAR(w.entry(0, 0), std::log(3.0) * g, 1e-15);
    EXPECT_NEAR(w.entry(0, 1), std::log(2.0) * g, 1e-15);
}

TEST(Weighting, RejectsDoubleApplication) {
    const auto corpus = lsa::Corpus::from_tokens({{"a"}});
    const auto once = lsa::apply_weighting(lsa::build_count_matrix(corpus), lsa::Weighting::kRaw);
    EXPECT_THROW(lsa::apply_weighting(once, lsa::Weighting::kLogEntropy), lsa::StateError);
    EXPECT_EQ(lsa::parse_weighting("log-entropy"), lsa::Weighting::kLogEntropy);
    EXPECT_THROW(lsa::parse_weighting("tfidf"), lsa::ParameterError);
}

lsa::SemanticSpace space_of(const std::vector<std::vector<std::string>> &paragraphs, int k) {
    const auto corpus = lsa::Corpus::from_tokens(paragraphs);
    return lsa::truncated_svd(
        lsa::apply_weighting(lsa::build_count_matrix(corpus), lsa::Weighting::kRaw), k);
}

TEST(SemanticSpace, OrthogonalTwoParagraphCorpus) {
    // Rows a = (2, 0), b = (1, 0), c = (0, 1): sigma = (sqrt 5, 1).
    const auto space = space_of({{"a", "a", "b"}, {"c"}}, 2);
    EXPECT_NEAR(space.singular_values()(0), std::sqrt(5.0), 1e-14);
    EXPECT_NEAR(space.singular_values()(1), 1.0, 1e-14);
    const VectorXd c = space.word_vector("c");
    EXPECT_NEAR(std::abs(c(1)), 1.0, 1e-14);
    EXPECT_NEAR(c(0), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(space.word_vector("a")(0)), 2.0, 1e-14);
    EXPECT_NEAR(lsa::word_similarity(space, "a", "b"), 1.0, 1e-14);
    EXPECT_NEAR(lsa::word_similarity(space, "a", "c"), 0.0, 1e-14);
}

TEST(SemanticSpace, WordVectorShapeAndLookupError) {
    const auto space = space_of({{"a", "b"}, {"b", "c"}, {"c", "d"}}, 2);
    EXPECT_EQ(space.word_vector("a").size(), 2);
    EXPECT_EQ(space.dimension(), 2);
    try {
        space.word_vector("zzzz");
        FAIL() << "expected a lookup error";
    } catch (const lsa::LookupError &e) {
        EXPECT_NE(std::string(e.what()).find("zzzz"), std::string::npos);
    }
}

TEST(SemanticSpace, DeterministicCosines) {
    std::mt19937_64 rng(8);
    const auto raw = oracle::random_corpus(rng, 40, 30, 10);
    const auto s1 = space_of(raw, 6);
    const auto s2 = space_of(raw, 6);
    for (std::size_t i = 0; i < s1.word_count(); ++i) {
        for (std::size_t j = 0; j < s1.word_count(); ++j) {
            const VectorXd a1 = s1.word_vector(static_cast<lsa::WordId>(i));
            const VectorXd b1 = s1.word_vector(static_cast<lsa::WordId>(j));
            if (a1.norm() == 0.0 || b1.norm() == 0.0) continue;
            EXPECT_NEAR(lsa::cosine(a1, b1),
                        lsa::cosine(s2.word_vector(static_cast<lsa::WordId>(i)),
                                    s2.word_vector(static_cast<lsa::WordId>(j))),
                        1e-10);
        }
    }
}

TEST(Cosine, AnalyticCases) {
    VectorXd u(2), v(2), w(2);
    u << 1, 0;
    v << 0, 1;
    w << 1, 1;
    EXPECT_DOUBLE_EQ(lsa::cosine(w, w), 1.0);
    EXPECT_DOUBLE_EQ(lsa::cosine(u, v), 0.0);
    EXPECT_NEAR(lsa::cosine(w, u), std::sqrt(2.0) / 2.0, 1e-15);
    EXPECT_DOUBLE_EQ(lsa::cosine(-u, u), -1.0);
}

TEST(Cosine, Errors) {
    VectorXd u(2), z = VectorXd::Zero(2), x(3);
    u << 1, 2;
    x << 1, 2, 3;
    EXPECT_THROW(lsa::cosine(u, z), lsa::UndefinedSimilarityError);
    EXPECT_THROW(lsa::cosine(u, x), lsa::ParameterError);
}

TEST(TextVector, SingletonRepetitionAndOov) {
    const auto space = space_of({{"a", "b"}, {"b", "c"}, {"c", "d", "a"}}, 2);
    EXPECT_EQ(lsa::text_vector(space, {"a"}).vector, space.word_vector("a"));
    const auto once = lsa::text_vector(space, {"a", "c"});
    const auto twice = lsa::text_vector(space, {"a", "c", "a", "c"});
    EXPECT_LT((twice.vector - 2.0 * once.vector).norm(), 1e-14);
    const VectorXd d = space.word_vector("d");
    EXPECT_NEAR(lsa::cosine(twice.vector, d), lsa::cosine(once.vector, d), 1e-14);

    const auto partial = lsa::text_vector(space, {"a", "nope", "b"});
    EXPECT_EQ(partial.skipped, std::vector<std::string>{"nope"});
    EXPECT_THROW(lsa::text_vector(space, {"x", "y"}), lsa::LookupError);
    EXPECT_THROW(lsa::text_vector(space, {}), lsa::LookupError);
}

TEST(SpaceIo, BinaryRoundTripIsExact) {
    auto space = space_of({{"le", "chat"}, {"le", "chien"}, {"un", "chat", "noir"}}, 2);
    space.corpus_fingerprint = 0x1234;
    std::stringstream buffer;
    lsa::write_space(buffer, space);
    const auto back = lsa::read_space(buffer);
    EXPECT_EQ(back.dimension(), 2);
    EXPECT_EQ(back.singular_values(), space.singular_values());
    EXPECT_EQ(back.word_vectors(), space.word_vectors());
    EXPECT_EQ(back.vocabulary()->words(), space.vocabulary()->words());
    EXPECT_EQ(back.corpus_fingerprint, 0x1234u);
    EXPECT_EQ(back.weighting, lsa::Weighting::kRaw);
}

TEST(SpaceIo, HeaderIsLittleEndian) {
    const auto space = space_of({{"a", "b"}, {"b"}}, 1);
    std::stringstream buffer;
    lsa::write_space(buffer, space);
    const std::string bytes = buffer.str();
    EXPECT_EQ(bytes.substr(0, 8), "LSASPACE");
    EXPECT_EQ(bytes[8], 1);   // version
    EXPECT_EQ(bytes[12], 1);  // k
    EXPECT_EQ(bytes[16], 2);  // words
}

TEST(SpaceIo, RejectsForeignAndTruncatedFiles) {
    std::stringstream foreign("NOTASPACE.........");
    EXPECT_THROW(lsa::read_space(foreign), lsa::InputError);
    const auto space = space_of({{"a", "b"}, {"b"}}, 1);
    std::stringstream buffer;
    lsa::write_space(buffer, space);
    std::stringstream cut(buffer.str().substr(0, buffer.str().size() - 3));
    EXPECT_THROW(lsa::read_space(cut), lsa::InputError);
}

TEST(SpaceIo, JsonExport) {
    const auto space = space_of({{"a", "b"}, {"b", "c"}}, 2);
    std::stringstream out;
    lsa::write_space_json(out, space);
    const auto doc = nlohmann::json::parse(out.str());
    EXPECT_EQ(doc["k"], 2);
    EXPECT_EQ(doc["vocabulary"].size(), 3u);
    EXPECT_EQ(doc["vectors"].size(), 3u);
    EXPECT_EQ(doc["vectors"][0].size(), 2u);
    EXPECT_EQ(doc["singular_values"][0].get<double>(), space.singular_values()(0));
}

}  // namespace
