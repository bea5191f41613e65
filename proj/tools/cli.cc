#include "cli.h"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "lsa/checkpoint.h"
#include "lsa/cooc.h"
#include "lsa/corpus.h"
#include "lsa/error.h"
#include "lsa/eval.h"
#include "lsa/semspace.h"
#include "lsa/space_io.h"
#include "lsa/tracer.h"

#ifndef LSA_VERSION
#define LSA_VERSION "0.0.0"
#endif

namespace lsa::cli {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

constexpr const char *kToolName = "lsatrace";

std::string default_out_dir() {
    const char *env = std::getenv(kOutDirEnv);
    return env != nullptr && *env != '\0' ? env : "lsa-out";
}

// Wall-clock phases of one command, in seconds.
class PhaseTimer {
public:
    void lap(const char *phase) {
        const auto now = Clock::now();
        phases_[phase] = std::chrono::duration<double>(now - mark_).count();
        mark_ = now;
    }
    Json json() const {
        Json out;
        out["total_seconds"] = std::chrono::duration<double>(Clock::now() - start_).count();
        out["phases"] = phases_;
        return out;
    }
    double elapsed() const { return std::chrono::duration<double>(Clock::now() - start_).count(); }

private:
    Clock::time_point start_ = Clock::now();
    Clock::time_point mark_ = start_;
    Json phases_ = Json::object();
};

std::string utc_timestamp() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

Json manifest(const std::string &command, Json config, const std::string &started_at) {
    Json doc;
    doc["tool"] = kToolName;
    doc["version"] = LSA_VERSION;
    doc["command"] = command;
    doc["started_at"] = started_at;
    doc["config"] = std::move(config);
    return doc;
}

void write_file(const fs::path &path, const std::string &content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write " + path.string());
    out << content;
    if (!out) throw InputError("failed writing " + path.string());
}

std::ifstream open_input(const std::string &path, const char *what) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError(std::string("cannot open ") + what + " " + path);
    return in;
}

Json stats_json(const Corpus &corpus) {
    const CorpusStats stats = corpus_stats(corpus);
    return Json{{"paragraphs", stats.paragraphs}, {"tokens", stats.tokens}, {"words", stats.words}};
}

std::string fixed6(double value) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", value);
    if (std::string_view(buf) == "-0.000000") return "0.000000";
    return buf;
}

// One writer per output directory; the lock file is removed on scope exit.
class OutputLock {
public:
    explicit OutputLock(fs::path path) : path_(std::move(path)) {
        std::FILE *f = std::fopen(path_.c_str(), "wx");
        if (f == nullptr) {
            throw StateError("output directory is in use (remove " + path_.string() +
                             " if no other run is active)");
        }
        std::fclose(f);
    }
    ~OutputLock() {
        std::error_code ignored;
        fs::remove(path_, ignored);
    }
    OutputLock(const OutputLock &) = delete;
    OutputLock &operator=(const OutputLock &) = delete;

private:
    fs::path path_;
};

// --- build ---------------------------------------------------------------

struct BuildOptions {
    std::string corpus;
    int dimensions = 400;
    std::string weighting = "raw";
    std::string out;
    bool json = false;
};

int cmd_build(const BuildOptions &o, std::ostream &out) {
    PhaseTimer timer;
    const std::string started = utc_timestamp();
    const Corpus corpus = load_corpus_file(o.corpus);
    timer.lap("load");

    const Weighting weighting = parse_weighting(o.weighting);
    SemanticSpace space = truncated_svd(apply_weighting(build_count_matrix(corpus), weighting),
                                        o.dimensions);
    space.corpus_fingerprint = corpus_fingerprint(corpus);
    timer.lap("svd");

    const fs::path dir = o.out;
    fs::create_directories(dir);
    const fs::path space_path = dir / "space.lsa";
    save_space(space_path, space);
    Json artifacts = {{"space", space_path.filename().string()}};
    if (o.json) {
        std::ofstream js(dir / "space.json", std::ios::binary | std::ios::trunc);
        write_space_json(js, space);
        artifacts["space_json"] = "space.json";
    }
    timer.lap("write");

    Json doc = manifest("build",
                        {{"corpus", o.corpus},
                         {"dimensions", o.dimensions},
                         {"weighting", to_string(weighting)},
                         {"out", o.out}},
                        started);
    doc["corpus_fingerprint"] = fingerprint_hex(space.corpus_fingerprint);
    doc["corpus"] = stats_json(corpus);
    doc["degenerate_boundary"] = space.degenerate_boundary;
    doc["artifacts"] = artifacts;
    doc["checkpoints"] = Json::array();
    doc["timings"] = timer.json();
    write_file(dir / "build.manifest.json", doc.dump(2) + "\n");

    out << "wrote " << space_path.string() << " (" << space.word_count() << " words, k = "
        << space.dimension() << ")\n";
    if (space.degenerate_boundary) {
        out << "note: sigma_k ties sigma_k+1; the truncated space is not unique\n";
    }
    return 0;
}

// --- query ---------------------------------------------------------------

struct QueryOptions {
    std::string space;
    std::string a;
    std::string b;
    bool text = false;
};

std::string single_word(const std::string &raw) {
    const auto tokens = normalize_text(raw);
    if (tokens.size() != 1) {
        throw ParameterError("\"" + raw + "\" is not a single word; use --text for texts");
    }
    return tokens.front();
}

int cmd_query(const QueryOptions &o, std::ostream &out, std::ostream &err) {
    const SemanticSpace space = load_space(o.space);
    double value = 0.0;
    if (o.text) {
        const TextVector u = text_vector(space, normalize_text(o.a));
        const TextVector v = text_vector(space, normalize_text(o.b));
        for (const auto *tv : {&u, &v}) {
            for (const auto &w : tv->skipped) {
                err << "note: ignoring unknown word \"" << w << "\"\n";
            }
        }
        value = cosine(u.vector, v.vector);
    } else {
        value = word_similarity(space, single_word(o.a), single_word(o.b));
    }
    out << fixed6(value) << '\n';
    return 0;
}

// --- pmi -----------------------------------------------------------------

struct PmiOptions {
    std::string corpus;
    std::string pairs;
    std::string output;
};

void write_pmi_table(std::ostream &out, const Corpus &corpus, const std::vector<WordPair> &pairs,
                     std::ostream &err) {
    const CoocIndex index = index_build(corpus, corpus.size());
    out << "w1,w2,n_x,n_y,n_xy,N,pmi\n";
    for (const auto &[w1, w2] : pairs) {
        out << w1 << ',' << w2 << ',';
        const auto x = corpus.vocabulary().find(w1);
        const auto y = corpus.vocabulary().find(w2);
        if (!x || !y) {
            err << "pmi: not in vocabulary: " << (!x ? w1 : w2) << '\n';
            out << ",,," << corpus.size() << ",error\n";
            continue;
        }
        const PmiResult r = pmi(index, *x, *y);
        out << r.n_x << ',' << r.n_y << ',' << r.n_xy << ',' << r.total << ','
            << (r.value ? fixed6(*r.value) : "undefined") << '\n';
    }
}

int cmd_pmi(const PmiOptions &o, std::ostream &out, std::ostream &err) {
    const Corpus corpus = load_corpus_file(o.corpus);
    auto in = open_input(o.pairs, "pairs file");
    const auto pairs = read_pairs(in);
    if (o.output.empty()) {
        write_pmi_table(out, corpus, pairs, err);
    } else {
        std::ofstream file(o.output, std::ios::binary | std::ios::trunc);
        if (!file) throw InputError("cannot write " + o.output);
        write_pmi_table(file, corpus, pairs, err);
    }
    return 0;
}

// --- trace ---------------------------------------------------------------

struct TraceOptions {
    std::string corpus;
    std::string pairs;
    int dimensions = 400;
    std::string weighting = "raw";
    std::size_t start = 2000;
    std::size_t end = 0;  // 0 = whole corpus
    std::string mode = "exact";
    double incremental_tolerance = 1e-6;
    std::size_t checkpoint_every = 100;
    std::string out;
    bool resume = false;
    std::size_t stop_after = 0;  // testing aid: abandon the run after N steps
};

std::string series_file_name(std::size_t index, const TracedPair &pair) {
    char prefix[16];
    std::snprintf(prefix, sizeof prefix, "%03zu", index);
    std::string name = std::string(prefix) + "_" + pair.w1 + "_" + pair.w2 + ".csv";
    for (char &c : name) {
        if (c == '/' || c == '\\') c = '_';
    }
    return name;
}

int cmd_trace(const TraceOptions &o, std::ostream &out, std::ostream &err) {
    PhaseTimer timer;
    const std::string started = utc_timestamp();
    if (o.checkpoint_every == 0) throw ParameterError("--checkpoint-every must be positive");
    const fs::path dir = o.out;
    fs::create_directories(dir);
    OutputLock lock(dir / ".lock");

    const Corpus corpus = load_corpus_file(o.corpus);
    auto pairs_in = open_input(o.pairs, "pairs file");
    const std::vector<WordPair> requested = read_pairs(pairs_in);

    TraceConfig config;
    config.start_len = o.start;
    config.end_len = o.end == 0 ? corpus.size() : o.end;
    config.k = o.dimensions;
    config.weighting = parse_weighting(o.weighting);
    config.mode = parse_trace_mode(o.mode);
    config.incremental_tolerance = o.incremental_tolerance;
    validate_config(config, corpus);

    const PairValidation checked = validate_pairs(corpus, requested, config.start_len);
    {
        std::ostringstream report;
        report << "w1,w2,reason\n";
        for (const auto &r : checked.rejected) {
            report << r.pair.first << ',' << r.pair.second << ",\"" << r.reason << "\"\n";
            err << "rejected pair " << r.pair.first << " " << r.pair.second << ": " << r.reason
                << '\n';
        }
        write_file(dir / "rejected_pairs.csv", report.str());
    }
    if (checked.accepted.empty()) {
        throw ValidationError("no valid pair to trace (see " +
                              (dir / "rejected_pairs.csv").string() + ")");
    }
    const std::vector<TracedPair> &pairs = checked.accepted;
    timer.lap("load");

    const std::uint64_t fingerprint = corpus_fingerprint(corpus);
    const std::string identity = run_identity(config, pairs, fingerprint);
    const fs::path checkpoint_dir = dir / "checkpoint";
    const fs::path trace_path = dir / "trace.csv";

    TraceRunner runner(corpus, pairs, config);
    runner.set_keep_steps(false);
    std::optional<Checkpoint> resumed;
    if (o.resume) resumed = load_checkpoint(checkpoint_dir);
    std::ofstream trace;
    if (resumed) {
        if (resumed->run_identity != identity) {
            throw ParameterError("checkpoint in " + checkpoint_dir.string() +
                                 " belongs to a different configuration");
        }
        if (!fs::exists(trace_path) || fs::file_size(trace_path) < resumed->trace_bytes) {
            throw InputError(trace_path.string() + " is shorter than its checkpoint");
        }
        // Rows written after the checkpoint are recomputed.
        fs::resize_file(trace_path, resumed->trace_bytes);
        runner.restore(resumed->state);
        trace.open(trace_path, std::ios::binary | std::ios::app);
        err << "trace: resuming at paragraph " << runner.prefix_length() << '\n';
    } else {
        fs::remove_all(checkpoint_dir);
        runner.initialize();
        trace.open(trace_path, std::ios::binary | std::ios::trunc);
        trace << kTraceCsvHeader << '\n';
    }
    if (!trace) throw InputError("cannot write " + trace_path.string());
    timer.lap("initialize");

    auto save = [&] {
        trace.flush();
        if (!trace) throw InputError("failed writing " + trace_path.string());
        save_checkpoint(checkpoint_dir,
                        Checkpoint{identity, fs::file_size(trace_path), runner.snapshot()});
    };
    if (!resumed) save();

    const std::size_t total_steps = config.end_len - config.start_len;
    std::size_t steps_this_run = 0;
    while (!runner.done()) {
        write_step_rows(trace, runner.step(), pairs);
        ++steps_this_run;
        const std::size_t done_steps = runner.prefix_length() - config.start_len;
        if (o.stop_after != 0 && steps_this_run == o.stop_after && !runner.done()) {
            trace.flush();
            err << "trace: stopped after " << steps_this_run << " steps (simulated interruption)\n";
            return 1;
        }
        if (done_steps % o.checkpoint_every == 0 || runner.done()) {
            save();
            char line[128];
            std::snprintf(line, sizeof line, "trace: %zu/%zu steps (paragraph %zu), %.1f s\n",
                          done_steps, total_steps, runner.prefix_length(), timer.elapsed());
            err << line;
        }
    }
    trace.close();
    timer.lap("trace");

    const GainLedger &ledger = runner.ledger();
    {
        std::ostringstream summary;
        write_summary_csv(summary, ledger_summary(ledger));
        write_file(dir / "summary.csv", summary.str());
    }
    {
        std::ostringstream fallbacks;
        fallbacks << "step,paragraph_id,orthogonality_loss\n";
        for (const auto &f : ledger.fallbacks) {
            fallbacks << f.step << ',' << f.paragraph_id << ',' << format_real(f.orthogonality_loss)
                      << '\n';
        }
        write_file(dir / "fallbacks.csv", fallbacks.str());
    }
    // Time series come from the trace CSV so that resumed runs, whose early
    // steps are not in memory, produce the same files.
    std::ifstream trace_in(trace_path, std::ios::binary);
    const GainLedger from_csv = read_trace_csv(trace_in);
    const fs::path series_dir = dir / "series";
    fs::remove_all(series_dir);
    fs::create_directories(series_dir);
    Json series_files = Json::array();
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        std::ostringstream series;
        write_series_csv(series, export_timeseries(from_csv, pairs[i].w1, pairs[i].w2));
        const std::string name = series_file_name(i, pairs[i]);
        write_file(series_dir / name, series.str());
        series_files.push_back("series/" + name);
    }
    timer.lap("write");

    Json doc = manifest("trace",
                        {{"corpus", o.corpus},
                         {"pairs", o.pairs},
                         {"start", config.start_len},
                         {"end", config.end_len},
                         {"dimensions", config.k},
                         {"weighting", to_string(config.weighting)},
                         {"mode", to_string(config.mode)},
                         {"incremental_tolerance", config.incremental_tolerance},
                         {"orthogonality_threshold", config.orthogonality_threshold},
                         {"checkpoint_every", o.checkpoint_every},
                         {"out", o.out},
                         {"resumed", resumed.has_value()}},
                        started);
    doc["corpus_fingerprint"] = fingerprint_hex(fingerprint);
    doc["corpus"] = stats_json(corpus);
    doc["pairs"] = {{"accepted", pairs.size()}, {"rejected", checked.rejected.size()}};
    doc["ledger"] = {{"fallback_events", ledger.fallbacks.size()},
                     {"undefined_similarities", ledger.undefined_similarities},
                     {"degenerate_boundary_seen", ledger.degenerate_boundary_seen}};
    doc["artifacts"] = {{"trace", "trace.csv"},
                        {"summary", "summary.csv"},
                        {"series", series_files},
                        {"rejected_pairs", "rejected_pairs.csv"},
                        {"fallbacks", "fallbacks.csv"}};
    doc["checkpoints"] = {"checkpoint/checkpoint.json"};
    doc["timings"] = timer.json();
    write_file(dir / "trace.manifest.json", doc.dump(2) + "\n");

    out << "traced " << pairs.size() << " pairs over " << total_steps << " paragraphs into "
        << dir.string() << '\n';
    if (!ledger.fallbacks.empty()) {
        out << ledger.fallbacks.size() << " incremental steps fell back to exact recomputation\n";
    }
    return 0;
}

// --- eval ----------------------------------------------------------------

struct EvalOptions {
    std::string space;
    std::string input;
    std::string out;
    double frequency_fraction = 1.0;
};

std::string optional_fixed(const std::optional<double> &v) {
    return v ? fixed6(*v) : std::string("n/a");
}

int cmd_eval_vocab(const EvalOptions &o, std::ostream &out) {
    PhaseTimer timer;
    const std::string started = utc_timestamp();
    const SemanticSpace space = load_space(o.space);
    auto in = open_input(o.input, "vocabulary items");
    const auto items = read_vocab_items(in);
    timer.lap("load");
    const VocabReport report = run_vocab_test(space, items);
    timer.lap("evaluate");

    const fs::path dir = o.out;
    fs::create_directories(dir);
    std::ostringstream js;
    write_vocab_report_json(js, report);
    write_file(dir / "vocab_report.json", js.str());
    Json doc = manifest("eval vocab", {{"space", o.space}, {"items", o.input}, {"out", o.out}},
                        started);
    doc["corpus_fingerprint"] = fingerprint_hex(space.corpus_fingerprint);
    doc["artifacts"] = {{"report", "vocab_report.json"}};
    doc["checkpoints"] = Json::array();
    doc["timings"] = timer.json();
    write_file(dir / "eval-vocab.manifest.json", doc.dump(2) + "\n");

    out << "items " << report.items << ", answered " << report.answered << ", skipped "
        << report.skipped_stems.size() << ", ties " << report.ties << '\n';
    out << "accuracy " << fixed6(report.accuracy) << '\n';
    for (DefinitionLabel label : kAllLabels) {
        out << "  " << to_string(label) << ' '
            << fixed6(report.distribution[static_cast<std::size_t>(label)]) << '\n';
    }
    return 0;
}

int cmd_eval_assoc(const EvalOptions &o, std::ostream &out) {
    PhaseTimer timer;
    const std::string started = utc_timestamp();
    const SemanticSpace space = load_space(o.space);
    auto in = open_input(o.input, "association norms");
    const auto norms = read_association_norms(in);
    timer.lap("load");
    const AssociationReport report =
        run_association_eval(space, norms, AssociationOptions{o.frequency_fraction});
    timer.lap("evaluate");

    const fs::path dir = o.out;
    fs::create_directories(dir);
    std::ostringstream js;
    write_association_report_json(js, report);
    write_file(dir / "association_report.json", js.str());
    Json doc = manifest("eval assoc",
                        {{"space", o.space},
                         {"norms", o.input},
                         {"frequency_fraction", o.frequency_fraction},
                         {"out", o.out}},
                        started);
    doc["corpus_fingerprint"] = fingerprint_hex(space.corpus_fingerprint);
    doc["artifacts"] = {{"report", "association_report.json"}};
    doc["checkpoints"] = Json::array();
    doc["timings"] = timer.json();
    write_file(dir / "eval-assoc.manifest.json", doc.dump(2) + "\n");

    static constexpr const char *kSlots[] = {"best", "2nd", "3rd", "worst 3"};
    out << "entries " << report.entries_used << " used, " << report.skipped_entries.size()
        << " skipped\n";
    for (std::size_t s = 0; s < 4; ++s) {
        out << "  " << kSlots[s] << ": mean cosine " << optional_fixed(report.rank_means[s])
            << " over " << report.rank_counts[s] << '\n';
    }
    out << "pearson(frequency, cosine) " << optional_fixed(report.correlation) << " over "
        << report.correlation_pairs << " pairs\n";
    return 0;
}

}  // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Latent semantic analysis spaces, co-occurrence statistics and "
                 "paragraph-by-paragraph similarity tracing.",
                 kToolName};
    app.set_config("--config", "", "TOML/INI file of option defaults (flags take precedence)");
    app.set_version_flag("--version", LSA_VERSION);
    app.require_subcommand(1);

    const std::vector<std::string> weightings = {"raw", "log-entropy"};

    BuildOptions build_opts;
    build_opts.out = default_out_dir();
    auto *build = app.add_subcommand("build", "Build and save a semantic space");
    build->add_option("corpus", build_opts.corpus, "Corpus file, one paragraph per line")
        ->required();
    build->add_option("-k,--dimensions", build_opts.dimensions, "Retained dimensions")
        ->capture_default_str();
    build->add_option("--weighting", build_opts.weighting, "raw | log-entropy")
        ->check(CLI::IsMember(weightings))
        ->capture_default_str();
    build->add_option("--out", build_opts.out, "Output directory (default $LSA_OUT_DIR)")
        ->capture_default_str();
    build->add_flag("--json", build_opts.json, "Also export the space as JSON");

    QueryOptions query_opts;
    auto *query = app.add_subcommand("query", "Cosine between two words or two texts");
    query->add_option("space", query_opts.space, "Space file")->required();
    query->add_option("a", query_opts.a, "First word (or text)")->required();
    query->add_option("b", query_opts.b, "Second word (or text)")->required();
    query->add_flag("--text", query_opts.text, "Compare texts as sums of word vectors");

    PmiOptions pmi_opts;
    auto *pmi_cmd = app.add_subcommand("pmi", "Paragraph-level PMI for word pairs");
    pmi_cmd->add_option("corpus", pmi_opts.corpus, "Corpus file")->required();
    pmi_cmd->add_option("pairs", pmi_opts.pairs, "Tab-separated word pairs")->required();
    pmi_cmd->add_option("-o,--output", pmi_opts.output, "CSV file (default stdout)");

    TraceOptions trace_opts;
    trace_opts.out = default_out_dir();
    auto *trace = app.add_subcommand("trace", "Trace pair similarities paragraph by paragraph");
    trace->add_option("corpus", trace_opts.corpus, "Corpus file")->required();
    trace->add_option("pairs", trace_opts.pairs, "Tab-separated word pairs")->required();
    trace->add_option("-k,--dimensions", trace_opts.dimensions, "Retained dimensions")
        ->capture_default_str();
    trace->add_option("--weighting", trace_opts.weighting, "raw | log-entropy")
        ->check(CLI::IsMember(weightings))
        ->capture_default_str();
    trace->add_option("--start", trace_opts.start, "Paragraphs in the first space")
        ->capture_default_str();
    trace->add_option("--end", trace_opts.end, "Paragraphs in the last space (default: all)");
    trace->add_option("--mode", trace_opts.mode, "exact | incremental")
        ->check(CLI::IsMember({"exact", "incremental"}))
        ->capture_default_str();
    trace->add_option("--incremental-tolerance", trace_opts.incremental_tolerance,
                      "Allowed per-step cosine drift of incremental mode")
        ->capture_default_str();
    trace->add_option("--checkpoint-every", trace_opts.checkpoint_every,
                      "Steps between checkpoints and progress reports")
        ->capture_default_str();
    trace->add_option("--out", trace_opts.out, "Output directory (default $LSA_OUT_DIR)")
        ->capture_default_str();
    trace->add_flag("--resume", trace_opts.resume, "Continue from the last checkpoint in --out");
    trace->add_option("--stop-after", trace_opts.stop_after)->group("");

    EvalOptions vocab_opts;
    EvalOptions assoc_opts;
    vocab_opts.out = assoc_opts.out = default_out_dir();
    auto *eval = app.add_subcommand("eval", "Evaluate a space");
    eval->require_subcommand(1);
    auto *vocab = eval->add_subcommand("vocab", "Four-definition vocabulary test");
    vocab->add_option("space", vocab_opts.space, "Space file")->required();
    vocab->add_option("items", vocab_opts.input, "JSON-lines item file")->required();
    vocab->add_option("--out", vocab_opts.out, "Report directory")->capture_default_str();
    auto *assoc = eval->add_subcommand("assoc", "Comparison with association norms");
    assoc->add_option("space", assoc_opts.space, "Space file")->required();
    assoc->add_option("norms", assoc_opts.input, "Tab-separated norms file")->required();
    assoc->add_option("--frequency-fraction", assoc_opts.frequency_fraction,
                      "Keep this fraction of most frequent responses for the correlation")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    assoc->add_option("--out", assoc_opts.out, "Report directory")->capture_default_str();

    std::vector<const char *> argv = {kToolName};
    for (const auto &a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForVersion &e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError &e) {
        app.exit(e, out, err);
        return exit_code(ErrorKind::kParameter);
    }

    try {
        if (*build) return cmd_build(build_opts, out);
        if (*query) return cmd_query(query_opts, out, err);
        if (*pmi_cmd) return cmd_pmi(pmi_opts, out, err);
        if (*trace) return cmd_trace(trace_opts, out, err);
        if (*vocab) return cmd_eval_vocab(vocab_opts, out);
        if (*assoc) return cmd_eval_assoc(assoc_opts, out);
    } catch (const Error &e) {
        err << kToolName << ": " << e.what() << '\n';
        return exit_code(e.kind());
    } catch (const fs::filesystem_error &e) {
        err << kToolName << ": " << e.what() << '\n';
        return exit_code(ErrorKind::kFormat);
    } catch (const std::exception &e) {
        err << kToolName << ": internal error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}

}  // namespace lsa::cli
