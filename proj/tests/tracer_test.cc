// Paragraph-by-paragraph tracing: ledger accounting, resumption, the two
// space-update modes and the CSV artifacts.

#include <gtest/gtest.h>

#include <numeric>
#include <random>
#include <sstream>

#include "lsa/error.h"
#include "lsa/tracer.h"
#include "oracles.h"
#include "synthetic.h"

namespace {

using lsa::Category;
using lsa::TraceConfig;
using lsa::TraceMode;

std::vector<lsa::TracedPair> accept(const lsa::Corpus &corpus,
                                    const std::vector<lsa::WordPair> &pairs, std::size_t start) {
    const auto checked = lsa::validate_pairs(corpus, pairs, start);
    EXPECT_TRUE(checked.rejected.empty());
    return checked.accepted;
}

TraceConfig config(std::size_t start, std::size_t end, int k,
                   TraceMode mode = TraceMode::kExact) {
    TraceConfig c;
    c.start_len = start;
    c.end_len = end;
    c.k = k;
    c.mode = mode;
    return c;
}

// Pairs of distinct words drawn from the start prefix of a random corpus.
std::vector<lsa::WordPair> prefix_pairs(std::mt19937_64 &rng, const lsa::Corpus &corpus,
                                        std::size_t start, std::size_t count) {
    std::vector<std::string> words;
    for (std::size_t i = 0; i < start; ++i) {
        for (const auto &t : corpus.paragraph(i).tokens) {
            if (std::find(words.begin(), words.end(), t) == words.end()) words.push_back(t);
        }
    }
    std::vector<lsa::WordPair> pairs;
    while (pairs.size() < count) {
        const auto &a = words[oracle::uniform(rng, words.size())];
        const auto &b = words[oracle::uniform(rng, words.size())];
        if (a != b) pairs.emplace_back(a, b);
    }
    return pairs;
}

double gain_sum(const lsa::PairLedger &entry) {
    return std::accumulate(entry.gains.begin(), entry.gains.end(), 0.0);
}

lsa::Corpus planted(std::size_t paragraphs, std::size_t start, std::size_t pairs,
                    std::uint64_t seed, std::vector<lsa::WordPair> *traced) {
    synthetic::PlantedSpec spec;
    spec.paragraphs = paragraphs;
    spec.start = start;
    spec.pairs = pairs;
    spec.together = 6;
    spec.alone = 8;
    spec.bridges = 2;
    spec.seed = seed;
    auto p = synthetic::planted_corpus(spec);
    *traced = p.pairs;
    return lsa::Corpus::from_tokens(p.corpus);
}

TEST(TraceConfig, RejectsEmptyRange) {
    const auto corpus = lsa::Corpus::from_tokens({{"a", "b"}, {"a", "c"}, {"b", "c"}});
    EXPECT_THROW(lsa::validate_config(config(2, 2, 1), corpus), lsa::ParameterError);
    EXPECT_THROW(lsa::validate_config(config(0, 2, 1), corpus), lsa::ParameterError);
    EXPECT_THROW(lsa::validate_config(config(2, 4, 1), corpus), lsa::ParameterError);
    EXPECT_NO_THROW(lsa::validate_config(config(2, 3, 1), corpus));
}

TEST(TraceConfig, RejectsInfeasibleK) {
    const auto corpus = lsa::Corpus::from_tokens({{"a", "b"}, {"a", "c"}, {"b", "c"}});
    EXPECT_THROW(lsa::validate_config(config(2, 3, 3), corpus), lsa::ParameterError);
    EXPECT_THROW(lsa::validate_config(config(2, 3, 0), corpus), lsa::ParameterError);
    const std::vector<lsa::TracedPair> pairs = accept(corpus, {{"a", "b"}}, 2);
    EXPECT_THROW(lsa::run_trace(corpus, pairs, config(2, 3, 3)), lsa::ParameterError);
}

TEST(TraceConfig, IncrementalRequiresRawCounts) {
    const auto corpus = lsa::Corpus::from_tokens({{"a", "b"}, {"a", "c"}, {"b", "c"}});
    auto c = config(2, 3, 1, TraceMode::kIncremental);
    EXPECT_NO_THROW(lsa::validate_config(c, corpus));
    c.weighting = lsa::Weighting::kLogEntropy;
    EXPECT_THROW(lsa::validate_config(c, corpus), lsa::ParameterError);
}

TEST(ValidatePairs, ReportsEachRejection) {
    const auto corpus = lsa::Corpus::from_tokens({{"a", "b"}, {"c"}, {"d", "a"}});
    const auto checked =
        lsa::validate_pairs(corpus, {{"a", "b"}, {"a", "a"}, {"a", "zz"}, {"a", "d"}}, 2);
    ASSERT_EQ(checked.accepted.size(), 1u);
    EXPECT_EQ(checked.accepted[0].w1, "a");
    ASSERT_EQ(checked.rejected.size(), 3u);
    EXPECT_NE(checked.rejected[0].reason.find("identical"), std::string::npos);
    EXPECT_NE(checked.rejected[1].reason.find("zz"), std::string::npos);
    EXPECT_NE(checked.rejected[2].reason.find("d"), std::string::npos);
}

TEST(TraceRunner, WordAbsentFromStartPrefixIsAValidationError) {
    const auto corpus = lsa::Corpus::from_tokens({{"a", "b"}, {"c"}, {"d", "a"}});
    const std::vector<lsa::TracedPair> pairs = {{"a", "d", 0, 3}};
    EXPECT_THROW(lsa::TraceRunner(corpus, pairs, config(2, 3, 1)), lsa::ValidationError);
    EXPECT_THROW(lsa::TraceRunner(corpus, {}, config(2, 3, 1)), lsa::ValidationError);
}

TEST(RunTrace, OneStepLedgerChargesASingleCategory) {
    const auto corpus =
        lsa::Corpus::from_tokens({{"a", "b", "c"}, {"a", "d"}, {"b", "d", "e"}, {"a", "b"}});
    const auto pairs = accept(corpus, {{"a", "b"}, {"c", "d"}}, 3);
    const auto ledger = lsa::run_trace(corpus, pairs, config(3, 4, 2));
    ASSERT_EQ(ledger.steps.size(), 1u);
    for (std::size_t i = 0; i < ledger.pairs.size(); ++i) {
        const auto &entry = ledger.pairs[i];
        const auto c = lsa::category_index(ledger.steps[0].pairs[i].category);
        EXPECT_EQ(entry.gains[c], entry.final_cosine - entry.initial);
        for (std::size_t j = 0; j < entry.gains.size(); ++j) {
            if (j != c) EXPECT_EQ(entry.gains[j], 0.0);
        }
    }
    EXPECT_EQ(ledger.steps[0].pairs[0].category, Category::kDirectCooc);
}

TEST(RunTrace, GainsTelescopeOnRandomCorpora) {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 5; ++trial) {
        const auto corpus = lsa::Corpus::from_tokens(oracle::random_corpus(rng, 40, 30, 8));
        const auto pairs = accept(corpus, prefix_pairs(rng, corpus, 10, 4), 10);
        auto c = config(10, 40, 4);
        if (trial % 2 == 1) c.weighting = lsa::Weighting::kLogEntropy;
        const auto ledger = lsa::run_trace(corpus, pairs, c);
        ASSERT_EQ(ledger.steps.size(), 30u);
        for (std::size_t i = 0; i < ledger.pairs.size(); ++i) {
            const auto &entry = ledger.pairs[i];
            EXPECT_NEAR(gain_sum(entry), entry.final_cosine - entry.initial, 1e-9);
            double before = entry.initial;
            for (const auto &step : ledger.steps) {
                const auto &ps = step.pairs[i];
                EXPECT_EQ(ps.cos_before, before);
                EXPECT_EQ(ps.delta, ps.cos_after - ps.cos_before);
                before = ps.cos_after;
            }
        }
    }
}

TEST(RunTrace, CategoriesMatchTheBruteForceClassifier) {
    std::mt19937_64 rng(78);
    const auto raw = oracle::random_corpus(rng, 30, 15, 6);
    const auto corpus = lsa::Corpus::from_tokens(raw);
    const auto pairs = accept(corpus, prefix_pairs(rng, corpus, 8, 5), 8);
    const auto ledger = lsa::run_trace(corpus, pairs, config(8, 30, 3));
    for (const auto &step : ledger.steps) {
        for (std::size_t i = 0; i < pairs.size(); ++i) {
            const int expected =
                oracle::classify(raw, step.paragraph_id, raw[step.paragraph_id], pairs[i].w1,
                                 pairs[i].w2);
            EXPECT_EQ(lsa::category_index(step.pairs[i].category),
                      static_cast<std::size_t>(expected))
                << "paragraph " << step.paragraph_id;
        }
    }
}

TEST(RunTrace, IsDeterministic) {
    std::mt19937_64 rng(79);
    const auto corpus = lsa::Corpus::from_tokens(oracle::random_corpus(rng, 30, 20, 7));
    const auto pairs = accept(corpus, prefix_pairs(rng, corpus, 10, 3), 10);
    std::ostringstream a, b;
    lsa::write_trace_csv(a, lsa::run_trace(corpus, pairs, config(10, 30, 3)));
    lsa::write_trace_csv(b, lsa::run_trace(corpus, pairs, config(10, 30, 3)));
    EXPECT_EQ(a.str(), b.str());
}

TEST(RunTrace, RestoredRunContinuesExactly) {
    std::mt19937_64 rng(80);
    const auto corpus = lsa::Corpus::from_tokens(oracle::random_corpus(rng, 36, 25, 7));
    const auto pairs = accept(corpus, prefix_pairs(rng, corpus, 10, 3), 10);
    for (const auto mode : {TraceMode::kExact, TraceMode::kIncremental}) {
        const auto c = config(10, 36, 4, mode);
        const auto whole = lsa::run_trace(corpus, pairs, c);

        lsa::TraceRunner first(corpus, pairs, c);
        first.initialize();
        while (first.prefix_length() < 22) first.step();
        const lsa::TraceState state = first.snapshot();

        lsa::TraceRunner second(corpus, pairs, c);
        second.restore(state);
        while (!second.done()) second.step();
        const auto &resumed = second.ledger();

        ASSERT_EQ(resumed.steps.size(), 14u);
        for (std::size_t i = 0; i < pairs.size(); ++i) {
            EXPECT_EQ(resumed.pairs[i].initial, whole.pairs[i].initial);
            EXPECT_EQ(resumed.pairs[i].final_cosine, whole.pairs[i].final_cosine);
            for (std::size_t g = 0; g < 5; ++g) {
                EXPECT_NEAR(resumed.pairs[i].gains[g], whole.pairs[i].gains[g], 1e-9);
            }
        }
        for (std::size_t s = 0; s < resumed.steps.size(); ++s) {
            const auto &expected = whole.steps[12 + s];
            EXPECT_EQ(resumed.steps[s].step, expected.step);
            for (std::size_t i = 0; i < pairs.size(); ++i) {
                EXPECT_EQ(resumed.steps[s].pairs[i].cos_after, expected.pairs[i].cos_after);
                EXPECT_EQ(resumed.steps[s].pairs[i].category, expected.pairs[i].category);
            }
        }
    }
}

TEST(RunTrace, RestoreRejectsMismatchedState) {
    const auto corpus = lsa::Corpus::from_tokens({{"a", "b"}, {"a", "c"}, {"b", "c"}, {"a"}});
    const auto pairs = accept(corpus, {{"a", "b"}}, 2);
    lsa::TraceRunner runner(corpus, pairs, config(2, 4, 1));
    lsa::TraceState state;
    state.prefix_length = 3;
    EXPECT_THROW(runner.restore(state), lsa::InputError);
    state.initial = state.current = {0.5};
    state.gains.resize(1);
    state.prefix_length = 9;
    EXPECT_THROW(runner.restore(state), lsa::InputError);
}

TEST(RunTrace, PlantedCooccurrenceRaisesSimilarity) {
    // One pair meeting in 5 later paragraphs, each member also seen alone
    // with its own contexts.
    std::vector<lsa::WordPair> raw;
    const auto corpus = planted(60, 10, 1, 3, &raw);
    const auto pairs = accept(corpus, raw, 10);
    const auto ledger = lsa::run_trace(corpus, pairs, config(10, 60, 4));
    const auto &gains = ledger.pairs[0].gains;
    EXPECT_GT(gains[lsa::category_index(Category::kDirectCooc)], 0.0);
    EXPECT_LE(gains[lsa::category_index(Category::kXOnly)], 0.0);
    EXPECT_LE(gains[lsa::category_index(Category::kYOnly)], 0.0);
}

TEST(RunTrace, IncrementalModeTracksExactMode) {
    std::mt19937_64 rng(81);
    const auto corpus = lsa::Corpus::from_tokens(oracle::random_corpus(rng, 40, 30, 8));
    const auto pairs = accept(corpus, prefix_pairs(rng, corpus, 10, 6), 10);
    const auto exact = lsa::run_trace(corpus, pairs, config(10, 40, 5));
    const auto inc = lsa::run_trace(corpus, pairs, config(10, 40, 5, TraceMode::kIncremental));
    ASSERT_EQ(exact.steps.size(), inc.steps.size());
    double worst = 0.0;
    for (std::size_t s = 0; s < exact.steps.size(); ++s) {
        for (std::size_t i = 0; i < pairs.size(); ++i) {
            worst = std::max(worst, std::abs(exact.steps[s].pairs[i].cos_after -
                                             inc.steps[s].pairs[i].cos_after));
        }
    }
    EXPECT_LE(worst, 1e-6);
}

TEST(RunTrace, TightOrthogonalityThresholdForcesLoggedFallbacks) {
    std::mt19937_64 rng(82);
    const auto corpus = lsa::Corpus::from_tokens(oracle::random_corpus(rng, 25, 20, 6));
    const auto pairs = accept(corpus, prefix_pairs(rng, corpus, 8, 2), 8);
    auto c = config(8, 25, 3, TraceMode::kIncremental);
    c.orthogonality_threshold = 0.0;
    const auto ledger = lsa::run_trace(corpus, pairs, c);
    ASSERT_FALSE(ledger.fallbacks.empty());
    for (const auto &f : ledger.fallbacks) {
        EXPECT_EQ(f.paragraph_id, 8 + f.step);
        EXPECT_GT(f.orthogonality_loss, 0.0);
    }
    const auto exact = lsa::run_trace(corpus, pairs, config(8, 25, 3));
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        EXPECT_NEAR(ledger.pairs[i].final_cosine, exact.pairs[i].final_cosine, 1e-6);
    }
}

TEST(SpaceStepper, ParagraphOfUnseenWordsBarelyMovesOldCosines) {
    // Old block has singular values well above the norm of the new column,
    // so the leading k triplets are unaffected.
    std::vector<std::vector<std::string>> raw;
    std::mt19937_64 rng(83);
    for (int p = 0; p < 12; ++p) {
        std::vector<std::string> para;
        for (int t = 0; t < 12; ++t) para.push_back("w" + std::to_string(oracle::uniform(rng, 8)));
        raw.push_back(para);
    }
    raw.push_back({"fresh"});
    const auto corpus = lsa::Corpus::from_tokens(raw);
    lsa::SpaceStepper stepper(corpus, config(12, 13, 3));
    const auto before = stepper.start(12);
    const auto after = stepper.step_space();
    for (lsa::WordId a = 0; a < 8; ++a) {
        for (lsa::WordId b = a + 1; b < 8; ++b) {
            const double c0 = lsa::cosine(before.word_vector(a), before.word_vector(b));
            const double c1 = lsa::cosine(after.word_vector(a), after.word_vector(b));
            EXPECT_LT(std::abs(c1 - c0), 1e-6) << a << "," << b;
        }
    }
}

TEST(SpaceStepper, DuplicateParagraphKeepsTheWordSubspace) {
    const auto corpus = lsa::Corpus::from_tokens(
        {{"a", "b"}, {"b", "c", "c"}, {"a", "d"}, {"d", "e", "a"}, {"b", "c", "c"}});
    // Full-rank k: the column space is all there is to compare.
    lsa::SpaceStepper stepper(corpus, config(4, 5, 4));
    const auto before = stepper.start(4);
    const auto after = stepper.step_space();
    auto projector = [](const lsa::SemanticSpace &s) {
        const Eigen::MatrixXd m = s.word_vectors();
        const Eigen::MatrixXd q =
            m.householderQr().householderQ() * Eigen::MatrixXd::Identity(m.rows(), 4);
        return Eigen::MatrixXd(q * q.transpose());
    };
    EXPECT_LT((projector(before) - projector(after)).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_NE(before.singular_values(), after.singular_values());
}

TEST(LedgerSummary, SinglePairAverageEqualsItsRow) {
    lsa::GainLedger ledger;
    ledger.pairs.push_back({{"a", "b", 0, 1}, 0.1, 0.4, {0.1, -0.2, 0.3, 0.0, 0.1}});
    const auto table = lsa::ledger_summary(ledger);
    ASSERT_EQ(table.rows.size(), 1u);
    EXPECT_EQ(table.average.w1, "AVERAGE");
    EXPECT_DOUBLE_EQ(table.average.total, table.rows[0].total);
    EXPECT_EQ(table.average.gains, table.rows[0].gains);
}

TEST(LedgerSummary, OpposedPairsAverageToZero) {
    lsa::GainLedger ledger;
    ledger.pairs.push_back({{"a", "b", 0, 1}, 0.0, 0.5, {0.5, 0, 0, 0, 0}});
    ledger.pairs.push_back({{"c", "d", 2, 3}, 0.5, 0.0, {-0.5, 0, 0, 0, 0}});
    const auto table = lsa::ledger_summary(ledger);
    EXPECT_EQ(table.average.total, 0.0);
    EXPECT_EQ(table.average.gains[0], 0.0);
    EXPECT_THROW(lsa::ledger_summary(lsa::GainLedger{}), lsa::StateError);
}

TEST(ExportTimeseries, StartsAtTheInitialCosine) {
    std::mt19937_64 rng(84);
    const auto corpus = lsa::Corpus::from_tokens(oracle::random_corpus(rng, 20, 12, 5));
    const auto pairs = accept(corpus, prefix_pairs(rng, corpus, 6, 2), 6);
    const auto ledger = lsa::run_trace(corpus, pairs, config(6, 20, 2));
    const auto series = lsa::export_timeseries(ledger, pairs[1].w1, pairs[1].w2);
    ASSERT_EQ(series.size(), 20u - 6u + 1u);
    EXPECT_EQ(series.front().paragraph_id, 5u);
    EXPECT_FALSE(series.front().category.has_value());
    EXPECT_EQ(series.front().cosine, ledger.pairs[1].initial);
    EXPECT_EQ(series.back().cosine, ledger.pairs[1].final_cosine);
    EXPECT_THROW(lsa::export_timeseries(ledger, "nope", pairs[0].w2), lsa::LookupError);
}

TEST(ExportTimeseries, OneStepGivesTwoPoints) {
    const auto corpus = lsa::Corpus::from_tokens({{"a", "b"}, {"a", "c"}, {"b", "c"}});
    const auto pairs = accept(corpus, {{"a", "b"}}, 2);
    const auto series = lsa::export_timeseries(lsa::run_trace(corpus, pairs, config(2, 3, 1)),
                                               "a", "b");
    ASSERT_EQ(series.size(), 2u);
    EXPECT_EQ(series[1].paragraph_id, 2u);
    EXPECT_EQ(series[1].category, Category::kYOnly);
}

TEST(TraceCsv, FormatsRealsWithTwelveDigits) {
    EXPECT_EQ(lsa::format_real(0.1), "0.1");
    EXPECT_EQ(lsa::format_real(-0.0), "0");
    EXPECT_EQ(lsa::format_real(1.0 / 3.0), "0.333333333333");
    EXPECT_EQ(lsa::format_real(-2.5e-13), "-2.5e-13");
}

TEST(TraceCsv, WritesHeadersAndQuotesFields) {
    lsa::GainLedger ledger;
    ledger.start_len = 4;
    ledger.end_len = 5;
    ledger.pairs.push_back({{"a,b", "c", 0, 1}, 0.25, 0.5, {0, 0, 0.25, 0, 0}});
    ledger.steps.push_back({0, 4, {{Category::kDirectCooc, 0.25, 0.5, 0.25}}});
    std::ostringstream trace, summary, series;
    lsa::write_trace_csv(trace, ledger);
    EXPECT_EQ(trace.str(), std::string(lsa::kTraceCsvHeader) +
                               "\n0,4,\"a,b\",c,DIRECT_COOC,0.25,0.5,0.25\n");
    lsa::write_summary_csv(summary, lsa::ledger_summary(ledger));
    EXPECT_EQ(summary.str(), std::string(lsa::kSummaryCsvHeader) +
                                 "\n\"a,b\",c,0.25,0,0,0.25,0,0\nAVERAGE,,0.25,0,0,0.25,0,0\n");
    lsa::write_series_csv(series, lsa::export_timeseries(ledger, "a,b", "c"));
    EXPECT_EQ(series.str(), "paragraph_id,cosine,category\n3,0.25,INITIAL\n4,0.5,DIRECT_COOC\n");
}

TEST(TraceCsv, ReadBackReproducesTheLedger) {
    std::mt19937_64 rng(85);
    const auto corpus = lsa::Corpus::from_tokens(oracle::random_corpus(rng, 24, 15, 6));
    const auto pairs = accept(corpus, prefix_pairs(rng, corpus, 8, 3), 8);
    const auto ledger = lsa::run_trace(corpus, pairs, config(8, 24, 3));
    std::ostringstream out;
    lsa::write_trace_csv(out, ledger);
    std::istringstream in(out.str());
    const auto back = lsa::read_trace_csv(in);
    EXPECT_EQ(back.start_len, ledger.start_len);
    EXPECT_EQ(back.end_len, ledger.end_len);
    ASSERT_EQ(back.pairs.size(), ledger.pairs.size());
    for (std::size_t i = 0; i < ledger.pairs.size(); ++i) {
        EXPECT_EQ(back.pairs[i].pair.w1, ledger.pairs[i].pair.w1);
        EXPECT_NEAR(back.pairs[i].initial, ledger.pairs[i].initial, 1e-11);
        EXPECT_NEAR(back.pairs[i].final_cosine, ledger.pairs[i].final_cosine, 1e-11);
    }
    std::ostringstream again;
    lsa::write_trace_csv(again, back);
    EXPECT_EQ(again.str(), out.str());
}

TEST(TraceCsv, RejectsMalformedInput) {
    std::istringstream no_header("step,x\n");
    EXPECT_THROW(lsa::read_trace_csv(no_header), lsa::InputError);
    std::istringstream short_row(std::string(lsa::kTraceCsvHeader) + "\n0,4,a\n");
    EXPECT_THROW(lsa::read_trace_csv(short_row), lsa::InputError);
    std::istringstream bad_number(std::string(lsa::kTraceCsvHeader) +
                                  "\n0,4,a,b,DIRECT_COOC,x,0.5,0.25\n");
    EXPECT_THROW(lsa::read_trace_csv(bad_number), lsa::InputError);
    std::istringstream late_pair(std::string(lsa::kTraceCsvHeader) +
                                 "\n0,4,a,b,X_ONLY,0,0,0\n1,5,a,b,X_ONLY,0,0,0\n"
                                 "1,5,c,d,X_ONLY,0,0,0\n");
    EXPECT_THROW(lsa::read_trace_csv(late_pair), lsa::InputError);
}

}  // namespace
