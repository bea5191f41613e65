// Paragraph-by-paragraph replay: grow the corpus one paragraph at a time,
// recompute the semantic space, and charge every change in a traced pair's
// cosine to the category of the paragraph that caused it.

#ifndef LSA_TRACER_H_
#define LSA_TRACER_H_

#include <array>
#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "lsa/cooc.h"
#include "lsa/corpus.h"
#include "lsa/semspace.h"
#include "lsa/svd.h"

namespace lsa {

enum class TraceMode { kExact, kIncremental };

std::string to_string(TraceMode mode);
TraceMode parse_trace_mode(std::string_view name);

struct TraceConfig {
    std::size_t start_len = 2000;
    std::size_t end_len = 0;
    int k = 400;
    Weighting weighting = Weighting::kRaw;
    TraceMode mode = TraceMode::kExact;
    double incremental_tolerance = 1e-6;
    // Incremental factors whose orthogonality drifts past this are rebuilt.
    double orthogonality_threshold = 1e-9;
    SvdOptions svd;
};

// Throws ParameterError unless 1 <= start < end <= paragraphs and
// 1 <= k <= min(vocabulary, start). Incremental mode requires raw counts,
// since any global weighting changes every column when one is appended.
void validate_config(const TraceConfig &config, const Corpus &corpus);

struct TracedPair {
    std::string w1;
    std::string w2;
    WordId id1 = -1;
    WordId id2 = -1;
};

struct PairRejection {
    WordPair pair;
    std::string reason;
};

struct PairValidation {
    std::vector<TracedPair> accepted;
    std::vector<PairRejection> rejected;
};

// Pairs must hold two distinct words that both occur in the first
// `start_len` paragraphs.
PairValidation validate_pairs(const Corpus &corpus, const std::vector<WordPair> &pairs,
                              std::size_t start_len);

struct PairStep {
    Category category = Category::kThirdOrMore;
    double cos_before = 0.0;
    double cos_after = 0.0;
    double delta = 0.0;
};

struct StepRecord {
    std::size_t step = 0;
    std::size_t paragraph_id = 0;
    std::vector<PairStep> pairs;  // parallel to the traced pairs
};

struct FallbackEvent {
    std::size_t step = 0;
    std::size_t paragraph_id = 0;
    double orthogonality_loss = 0.0;
};

using CategoryGains = std::array<double, 5>;

struct PairLedger {
    TracedPair pair;
    double initial = 0.0;
    double final_cosine = 0.0;
    CategoryGains gains{};
};

struct GainLedger {
    std::size_t start_len = 0;
    std::size_t end_len = 0;
    std::vector<PairLedger> pairs;
    std::vector<StepRecord> steps;
    std::vector<FallbackEvent> fallbacks;
    // Cosines involving a zero word vector, recorded as 0.
    std::size_t undefined_similarities = 0;
    bool degenerate_boundary_seen = false;
};

// Produces the semantic space of each successive prefix, either by exact
// recomputation or by updating the previous factors with the new column.
class SpaceStepper {
public:
    SpaceStepper(const Corpus &corpus, const TraceConfig &config);

    // Space over the first `prefix_len` paragraphs; resets incremental state.
    SemanticSpace start(std::size_t prefix_len);

    // Space over the current prefix plus its next paragraph.
    SemanticSpace step_space();

    std::size_t prefix_length() const { return prefix_len_; }
    const std::vector<FallbackEvent> &fallbacks() const { return fallbacks_; }
    const IncrementalSvd &factors() const { return factors_; }

    // Resumes incremental mode from saved factors.
    void restore(std::size_t prefix_len, IncrementalSvd factors);

private:
    SemanticSpace exact_space(std::size_t prefix_len) const;
    SemanticSpace from_factors() const;

    const Corpus &corpus_;
    TraceConfig config_;
    std::shared_ptr<const Vocabulary> vocabulary_;
    std::size_t prefix_len_ = 0;
    IncrementalSvd factors_;
    std::vector<FallbackEvent> fallbacks_;
};

// Everything needed to continue a run from the middle.
struct TraceState {
    std::size_t prefix_length = 0;
    std::vector<double> initial;
    std::vector<double> current;
    std::vector<CategoryGains> gains;
    std::vector<FallbackEvent> fallbacks;
    std::size_t undefined_similarities = 0;
    bool degenerate_boundary_seen = false;
    std::optional<IncrementalSvd> factors;  // incremental mode only
};

class TraceRunner {
public:
    // Throws ValidationError if any pair is invalid for config.start_len and
    // ParameterError for an infeasible config.
    TraceRunner(const Corpus &corpus, std::vector<TracedPair> pairs, const TraceConfig &config);

    // Builds the start-prefix space and index; call this or restore() before
    // the first step.
    void initialize();
    void restore(const TraceState &state);

    bool done() const { return prefix_len_ >= config_.end_len; }
    std::size_t prefix_length() const { return prefix_len_; }

    // Adds paragraph `prefix_length()` and returns its record.
    const StepRecord &step();

    TraceState snapshot() const;
    const GainLedger &ledger() const { return ledger_; }
    GainLedger take_ledger() { return std::move(ledger_); }
    const TraceConfig &config() const { return config_; }

    // Drops retained step records (long runs that stream them to disk).
    void set_keep_steps(bool keep) { keep_steps_ = keep; }

private:
    double pair_cosine(const SemanticSpace &space, const TracedPair &pair);

    const Corpus &corpus_;
    TraceConfig config_;
    SpaceStepper stepper_;
    CoocIndex index_;
    std::size_t prefix_len_ = 0;
    std::vector<double> current_;
    GainLedger ledger_;
    StepRecord last_;
    bool keep_steps_ = true;
};

GainLedger run_trace(const Corpus &corpus, const std::vector<TracedPair> &pairs,
                     const TraceConfig &config);

struct SummaryRow {
    std::string w1;
    std::string w2;
    double total = 0.0;
    CategoryGains gains{};
};

struct SummaryTable {
    std::vector<SummaryRow> rows;
    SummaryRow average;
};

// One row per pair (total = final - initial) plus the column means.
// Throws StateError on an empty ledger.
SummaryTable ledger_summary(const GainLedger &ledger);

struct SeriesPoint {
    std::size_t paragraph_id = 0;
    double cosine = 0.0;
    std::optional<Category> category;  // empty for the starting point
};

// end_len - start_len + 1 points: the starting cosine, then one per step.
// Throws LookupError for a pair not in the ledger.
std::vector<SeriesPoint> export_timeseries(const GainLedger &ledger, const std::string &w1,
                                           const std::string &w2);

// CSV renderings. Floats carry 12 significant digits.
std::string format_real(double value);
inline constexpr const char *kTraceCsvHeader =
    "step,paragraph_id,pair_w1,pair_w2,category,cos_before,cos_after,delta";
inline constexpr const char *kSummaryCsvHeader =
    "w1,w2,total,occ_w1,occ_w2,direct,second_order,third_or_more";
inline constexpr const char *kSeriesCsvHeader = "paragraph_id,cosine,category";

void write_step_rows(std::ostream &out, const StepRecord &record,
                     const std::vector<TracedPair> &pairs);
void write_trace_csv(std::ostream &out, const GainLedger &ledger);
void write_summary_csv(std::ostream &out, const SummaryTable &summary);
void write_series_csv(std::ostream &out, const std::vector<SeriesPoint> &series);

// Rebuilds the pair list and step records of a trace CSV (values at CSV
// precision). Throws InputError on malformed content.
GainLedger read_trace_csv(std::istream &in);

}  // namespace lsa

#endif  // LSA_TRACER_H_
