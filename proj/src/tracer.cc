#include "lsa/tracer.h"

#include <cstdio>
#include <map>
#include <sstream>

#include "lsa/error.h"

namespace lsa {

std::string to_string(TraceMode mode) {
    return mode == TraceMode::kExact ? "exact" : "incremental";
}

TraceMode parse_trace_mode(std::string_view name) {
    if (name == "exact") return TraceMode::kExact;
    if (name == "incremental") return TraceMode::kIncremental;
    throw ParameterError("unknown trace mode: " + std::string(name));
}

void validate_config(const TraceConfig &config, const Corpus &corpus) {
    if (config.start_len < 1 || config.start_len >= config.end_len ||
        config.end_len > corpus.size()) {
        throw ParameterError("need 1 <= start (" + std::to_string(config.start_len) +
                             ") < end (" + std::to_string(config.end_len) +
                             ") <= paragraphs (" + std::to_string(corpus.size()) + ")");
    }
    const std::size_t limit = std::min(corpus.vocabulary().size(), config.start_len);
    if (config.k < 1 || static_cast<std::size_t>(config.k) > limit) {
        throw ParameterError("k = " + std::to_string(config.k) +
                             " infeasible at start prefix (max " + std::to_string(limit) + ")");
    }
    if (config.mode == TraceMode::kIncremental && config.weighting != Weighting::kRaw) {
        throw ParameterError("incremental mode requires raw weighting");
    }
    if (!(config.incremental_tolerance > 0.0)) {
        throw ParameterError("incremental tolerance must be positive");
    }
}

PairValidation validate_pairs(const Corpus &corpus, const std::vector<WordPair> &pairs,
                              std::size_t start_len) {
    const CoocIndex prefix = index_build(corpus, std::min(start_len, corpus.size()));
    const Vocabulary &vocabulary = corpus.vocabulary();
    PairValidation out;
    for (const auto &pair : pairs) {
        const auto &[w1, w2] = pair;
        std::string reason;
        const auto id1 = vocabulary.find(w1);
        const auto id2 = vocabulary.find(w2);
        if (w1 == w2) {
            reason = "identical words";
        } else if (!id1 || !id2) {
            reason = "not in vocabulary: " + (!id1 ? w1 : w2);
        } else if (prefix.paragraph_count(*id1) == 0 || prefix.paragraph_count(*id2) == 0) {
            reason = "absent from the first " + std::to_string(start_len) +
                     " paragraphs: " + (prefix.paragraph_count(*id1) == 0 ? w1 : w2);
        }
        if (reason.empty()) {
            out.accepted.push_back(TracedPair{w1, w2, *id1, *id2});
        } else {
            out.rejected.push_back(PairRejection{pair, reason});
        }
    }
    return out;
}

SpaceStepper::SpaceStepper(const Corpus &corpus, const TraceConfig &config)
    : corpus_(corpus),
      config_(config),
      vocabulary_(std::make_shared<const Vocabulary>(corpus.vocabulary())) {}

SemanticSpace SpaceStepper::exact_space(std::size_t prefix_len) const {
    const TermDocMatrix counts = build_count_matrix(corpus_, prefix_len, vocabulary_);
    return truncated_svd(apply_weighting(counts, config_.weighting), config_.k, config_.svd);
}

SemanticSpace SpaceStepper::from_factors() const {
    SemanticSpace space = space_from_factors(factors_.truncate(config_.k), vocabulary_);
    space.weighting = config_.weighting;
    return space;
}

SemanticSpace SpaceStepper::start(std::size_t prefix_len) {
    prefix_len_ = prefix_len;
    if (config_.mode == TraceMode::kExact) return exact_space(prefix_len);
    factors_.reset(build_count_matrix(corpus_, prefix_len, vocabulary_).entries(), config_.svd);
    return from_factors();
}

void SpaceStepper::restore(std::size_t prefix_len, IncrementalSvd factors) {
    prefix_len_ = prefix_len;
    factors_ = std::move(factors);
}

SemanticSpace SpaceStepper::step_space() {
    if (prefix_len_ >= corpus_.size()) throw StateError("no paragraph left to add");
    const std::size_t paragraph = prefix_len_;
    ++prefix_len_;
    if (config_.mode == TraceMode::kExact) return exact_space(prefix_len_);

    factors_.append_column(count_column(corpus_, paragraph));
    const double loss = factors_.orthogonality_loss();
    if (loss > config_.orthogonality_threshold) {
        fallbacks_.push_back(FallbackEvent{paragraph - config_.start_len, paragraph, loss});
        factors_.reset(build_count_matrix(corpus_, prefix_len_, vocabulary_).entries(),
                       config_.svd);
    }
    return from_factors();
}

TraceRunner::TraceRunner(const Corpus &corpus, std::vector<TracedPair> pairs,
                         const TraceConfig &config)
    : corpus_(corpus), config_(config), stepper_(corpus, config) {
    validate_config(config_, corpus_);
    if (pairs.empty()) throw ValidationError("no pairs to trace");
    std::vector<WordPair> raw;
    for (const auto &p : pairs) raw.emplace_back(p.w1, p.w2);
    const PairValidation checked = validate_pairs(corpus_, raw, config_.start_len);
    if (!checked.rejected.empty()) {
        const auto &r = checked.rejected.front();
        throw ValidationError("invalid traced pair " + r.pair.first + "-" + r.pair.second + ": " +
                              r.reason);
    }
    ledger_.start_len = config_.start_len;
    ledger_.end_len = config_.end_len;
    for (const auto &p : checked.accepted) ledger_.pairs.push_back(PairLedger{p, 0.0, 0.0, {}});
}

double TraceRunner::pair_cosine(const SemanticSpace &space, const TracedPair &pair) {
    const Eigen::VectorXd u = space.word_vector(pair.id1);
    const Eigen::VectorXd v = space.word_vector(pair.id2);
    if (u.norm() == 0.0 || v.norm() == 0.0) {
        ++ledger_.undefined_similarities;
        return 0.0;
    }
    return cosine(u, v);
}

void TraceRunner::initialize() {
    index_ = index_build(corpus_, config_.start_len);
    prefix_len_ = config_.start_len;
    const SemanticSpace space = stepper_.start(config_.start_len);
    ledger_.degenerate_boundary_seen = space.degenerate_boundary;
    current_.clear();
    for (auto &entry : ledger_.pairs) {
        entry.initial = pair_cosine(space, entry.pair);
        entry.final_cosine = entry.initial;
        entry.gains.fill(0.0);
        current_.push_back(entry.initial);
    }
    ledger_.steps.clear();
}

void TraceRunner::restore(const TraceState &state) {
    if (state.initial.size() != ledger_.pairs.size() ||
        state.current.size() != ledger_.pairs.size() ||
        state.gains.size() != ledger_.pairs.size()) {
        throw InputError("checkpoint does not match the traced pairs");
    }
    if (state.prefix_length < config_.start_len || state.prefix_length > config_.end_len) {
        throw InputError("checkpoint prefix outside the configured range");
    }
    prefix_len_ = state.prefix_length;
    index_ = index_build(corpus_, prefix_len_);
    if (config_.mode == TraceMode::kIncremental) {
        if (!state.factors) throw InputError("incremental checkpoint lacks SVD factors");
        stepper_.restore(prefix_len_, *state.factors);
    } else {
        stepper_.restore(prefix_len_, IncrementalSvd());
    }
    current_ = state.current;
    for (std::size_t i = 0; i < ledger_.pairs.size(); ++i) {
        ledger_.pairs[i].initial = state.initial[i];
        ledger_.pairs[i].final_cosine = state.current[i];
        ledger_.pairs[i].gains = state.gains[i];
    }
    ledger_.fallbacks = state.fallbacks;
    ledger_.undefined_similarities = state.undefined_similarities;
    ledger_.degenerate_boundary_seen = state.degenerate_boundary_seen;
    ledger_.steps.clear();
}

const StepRecord &TraceRunner::step() {
    if (done()) throw StateError("trace already complete");
    const Paragraph &paragraph = corpus_.paragraph(prefix_len_);

    StepRecord record;
    record.step = prefix_len_ - config_.start_len;
    record.paragraph_id = paragraph.id;

    std::vector<Category> categories;
    categories.reserve(ledger_.pairs.size());
    for (const auto &entry : ledger_.pairs) {
        categories.push_back(
            classify_paragraph(paragraph, entry.pair.id1, entry.pair.id2, index_).category);
    }

    const std::size_t fallbacks_before = stepper_.fallbacks().size();
    const SemanticSpace space = stepper_.step_space();
    if (space.degenerate_boundary) ledger_.degenerate_boundary_seen = true;
    for (std::size_t i = fallbacks_before; i < stepper_.fallbacks().size(); ++i) {
        ledger_.fallbacks.push_back(stepper_.fallbacks()[i]);
    }

    for (std::size_t i = 0; i < ledger_.pairs.size(); ++i) {
        auto &entry = ledger_.pairs[i];
        PairStep ps;
        ps.category = categories[i];
        ps.cos_before = current_[i];
        ps.cos_after = pair_cosine(space, entry.pair);
        ps.delta = ps.cos_after - ps.cos_before;
        entry.gains[category_index(ps.category)] += ps.delta;
        entry.final_cosine = ps.cos_after;
        current_[i] = ps.cos_after;
        record.pairs.push_back(ps);
    }

    index_.extend(paragraph);
    ++prefix_len_;

    last_ = std::move(record);
    if (keep_steps_) ledger_.steps.push_back(last_);
    return last_;
}

TraceState TraceRunner::snapshot() const {
    TraceState state;
    state.prefix_length = prefix_len_;
    for (const auto &entry : ledger_.pairs) {
        state.initial.push_back(entry.initial);
        state.gains.push_back(entry.gains);
    }
    state.current = current_;
    state.fallbacks = ledger_.fallbacks;
    state.undefined_similarities = ledger_.undefined_similarities;
    state.degenerate_boundary_seen = ledger_.degenerate_boundary_seen;
    if (config_.mode == TraceMode::kIncremental) state.factors = stepper_.factors();
    return state;
}

GainLedger run_trace(const Corpus &corpus, const std::vector<TracedPair> &pairs,
                     const TraceConfig &config) {
    TraceRunner runner(corpus, pairs, config);
    runner.initialize();
    while (!runner.done()) runner.step();
    return runner.take_ledger();
}

SummaryTable ledger_summary(const GainLedger &ledger) {
    if (ledger.pairs.empty()) throw StateError("cannot summarize an empty ledger");
    SummaryTable table;
    table.average.w1 = "AVERAGE";
    for (const auto &entry : ledger.pairs) {
        SummaryRow row;
        row.w1 = entry.pair.w1;
        row.w2 = entry.pair.w2;
        row.total = entry.final_cosine - entry.initial;
        row.gains = entry.gains;
        table.average.total += row.total;
        for (std::size_t c = 0; c < row.gains.size(); ++c) table.average.gains[c] += row.gains[c];
        table.rows.push_back(std::move(row));
    }
    const auto n = static_cast<double>(table.rows.size());
    table.average.total /= n;
    for (double &g : table.average.gains) g /= n;
    return table;
}

std::vector<SeriesPoint> export_timeseries(const GainLedger &ledger, const std::string &w1,
                                           const std::string &w2) {
    std::size_t index = ledger.pairs.size();
    for (std::size_t i = 0; i < ledger.pairs.size(); ++i) {
        if (ledger.pairs[i].pair.w1 == w1 && ledger.pairs[i].pair.w2 == w2) index = i;
    }
    if (index == ledger.pairs.size()) throw LookupError("pair not in ledger: " + w1 + "-" + w2);

    std::vector<SeriesPoint> series;
    series.reserve(ledger.steps.size() + 1);
    series.push_back(SeriesPoint{ledger.start_len - 1, ledger.pairs[index].initial, std::nullopt});
    for (const auto &step : ledger.steps) {
        const auto &ps = step.pairs[index];
        series.push_back(SeriesPoint{step.paragraph_id, ps.cos_after, ps.category});
    }
    return series;
}

std::string format_real(double value) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", value);
    // Avoid "-0" so equal runs print equal bytes regardless of zero sign.
    if (std::string_view(buf) == "-0") return "0";
    return buf;
}

namespace {

std::string csv_field(const std::string &s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::vector<std::string> split_csv_line(const std::string &line) {
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                field += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                field += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
        } else {
            field += c;
        }
    }
    fields.push_back(std::move(field));
    return fields;
}

}  // namespace

void write_step_rows(std::ostream &out, const StepRecord &record,
                     const std::vector<TracedPair> &pairs) {
    for (std::size_t i = 0; i < record.pairs.size(); ++i) {
        const auto &ps = record.pairs[i];
        out << record.step << ',' << record.paragraph_id << ',' << csv_field(pairs[i].w1) << ','
            << csv_field(pairs[i].w2) << ',' << to_string(ps.category) << ','
            << format_real(ps.cos_before) << ',' << format_real(ps.cos_after) << ','
            << format_real(ps.delta) << '\n';
    }
}

void write_trace_csv(std::ostream &out, const GainLedger &ledger) {
    std::vector<TracedPair> pairs;
    for (const auto &entry : ledger.pairs) pairs.push_back(entry.pair);
    out << kTraceCsvHeader << '\n';
    for (const auto &step : ledger.steps) write_step_rows(out, step, pairs);
}

void write_summary_csv(std::ostream &out, const SummaryTable &summary) {
    out << kSummaryCsvHeader << '\n';
    auto row = [&out](const SummaryRow &r) {
        out << csv_field(r.w1) << ',' << csv_field(r.w2) << ',' << format_real(r.total);
        for (double g : r.gains) out << ',' << format_real(g);
        out << '\n';
    };
    for (const auto &r : summary.rows) row(r);
    row(summary.average);
}

void write_series_csv(std::ostream &out, const std::vector<SeriesPoint> &series) {
    out << kSeriesCsvHeader << '\n';
    for (const auto &p : series) {
        out << p.paragraph_id << ',' << format_real(p.cosine) << ','
            << (p.category ? to_string(*p.category) : std::string_view("INITIAL")) << '\n';
    }
}

GainLedger read_trace_csv(std::istream &in) {
    std::string line;
    if (!std::getline(in, line) || line != kTraceCsvHeader) {
        throw InputError("trace CSV lacks the expected header");
    }
    GainLedger ledger;
    std::map<std::pair<std::string, std::string>, std::size_t> pair_index;
    std::size_t line_number = 1;
    while (std::getline(in, line)) {
        ++line_number;
        if (line.empty()) continue;
        const auto f = split_csv_line(line);
        if (f.size() != 8) {
            throw InputError("trace CSV line " + std::to_string(line_number) +
                             ": expected 8 fields");
        }
        try {
            const std::size_t step = std::stoul(f[0]);
            const std::size_t paragraph = std::stoul(f[1]);
            const auto key = std::make_pair(f[2], f[3]);
            PairStep ps;
            ps.category = parse_category(f[4]);
            ps.cos_before = std::stod(f[5]);
            ps.cos_after = std::stod(f[6]);
            ps.delta = std::stod(f[7]);

            auto it = pair_index.find(key);
            if (it == pair_index.end()) {
                const bool first_step =
                    ledger.steps.empty() ||
                    (ledger.steps.size() == 1 && ledger.steps.front().step == step);
                if (!first_step) {
                    throw InputError("pair appears after the first step");
                }
                it = pair_index.emplace(key, ledger.pairs.size()).first;
                PairLedger entry;
                entry.pair.w1 = f[2];
                entry.pair.w2 = f[3];
                entry.initial = ps.cos_before;
                ledger.pairs.push_back(entry);
            }
            if (ledger.steps.empty() || ledger.steps.back().step != step) {
                if (ledger.steps.empty()) ledger.start_len = paragraph;
                ledger.steps.push_back(StepRecord{step, paragraph, {}});
            }
            auto &record = ledger.steps.back();
            if (record.pairs.size() != it->second) {
                throw InputError("pairs out of order within a step");
            }
            record.pairs.push_back(ps);
            auto &entry = ledger.pairs[it->second];
            entry.gains[category_index(ps.category)] += ps.delta;
            entry.final_cosine = ps.cos_after;
        } catch (const std::logic_error &) {
            throw InputError("trace CSV line " + std::to_string(line_number) + ": bad number");
        }
    }
    if (!ledger.steps.empty()) ledger.end_len = ledger.steps.back().paragraph_id + 1;
    return ledger;
}

}  // namespace lsa
