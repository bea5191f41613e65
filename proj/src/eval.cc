#include "lsa/eval.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "json.hpp"
#include "lsa/error.h"

namespace lsa {
namespace {

constexpr std::array<std::string_view, 4> kLabelNames = {"correct", "close", "far", "unrelated"};

// Cosine, or empty when either vector is zero.
std::optional<double> safe_cosine(const Eigen::VectorXd &u, const Eigen::VectorXd &v) {
    if (u.norm() == 0.0 || v.norm() == 0.0) return std::nullopt;
    return cosine(u, v);
}

}  // namespace

std::string_view to_string(DefinitionLabel label) {
    return kLabelNames[static_cast<std::size_t>(label)];
}

ChoiceResult multiple_choice(const SemanticSpace &space, const std::string &stem,
                             const std::vector<std::vector<std::string>> &alternatives) {
    const Eigen::VectorXd stem_vector = space.word_vector(stem);
    ChoiceResult result;
    for (std::size_t i = 0; i < alternatives.size(); ++i) {
        std::optional<double> score;
        try {
            score = safe_cosine(stem_vector, text_vector(space, alternatives[i]).vector);
        } catch (const LookupError &) {
        }
        if (!score) result.absent.push_back(i);
        result.cosines.push_back(score);
        if (!score) continue;
        if (!result.chosen || *score > *result.cosines[*result.chosen]) {
            result.chosen = i;
            result.tie = false;
        } else if (*score == *result.cosines[*result.chosen]) {
            result.tie = true;
        }
    }
    return result;
}

VocabReport run_vocab_test(const SemanticSpace &space, const std::vector<VocabItem> &items) {
    if (items.empty()) throw ValidationError("vocabulary test has no items");
    VocabReport report;
    report.items = items.size();
    for (const auto &item : items) {
        if (!space.contains(item.stem)) {
            report.skipped_stems.push_back(item.stem);
            continue;
        }
        const std::vector<std::vector<std::string>> alternatives(item.definitions.begin(),
                                                                 item.definitions.end());
        const ChoiceResult choice = multiple_choice(space, item.stem, alternatives);
        if (!choice.chosen) {
            report.skipped_stems.push_back(item.stem);
            continue;
        }
        ++report.answered;
        if (choice.tie) ++report.ties;
        ++report.picks[*choice.chosen];
    }
    if (report.answered > 0) {
        const auto n = static_cast<double>(report.answered);
        for (std::size_t l = 0; l < 4; ++l) {
            report.distribution[l] = static_cast<double>(report.picks[l]) / n;
        }
        report.accuracy = report.distribution[static_cast<std::size_t>(DefinitionLabel::kCorrect)];
    }
    return report;
}

std::optional<double> pearson(const std::vector<double> &x, const std::vector<double> &y) {
    if (x.size() != y.size()) throw ParameterError("pearson needs equally long samples");
    const std::size_t n = x.size();
    if (n < 2) return std::nullopt;
    const double mean_x = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
    const double mean_y = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
    double sxy = 0.0;
    double sxx = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mean_x;
        const double dy = y[i] - mean_y;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) return std::nullopt;
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

AssociationReport run_association_eval(const SemanticSpace &space,
                                       const std::vector<AssociationNormEntry> &norms,
                                       const AssociationOptions &options) {
    if (norms.empty()) throw ValidationError("association norms are empty");
    if (!(options.frequency_fraction > 0.0) || options.frequency_fraction > 1.0) {
        throw ParameterError("frequency fraction must lie in (0, 1]");
    }
    AssociationReport report;
    std::array<double, 4> sums{};
    struct Observation {
        double frequency;
        double cosine;
    };
    std::vector<Observation> observations;

    for (const auto &entry : norms) {
        if (!space.contains(entry.inducing)) {
            report.skipped_entries.push_back(entry.inducing);
            continue;
        }
        const Eigen::VectorXd inducing = space.word_vector(entry.inducing);
        std::vector<std::optional<double>> cosines;
        bool any = false;
        for (const auto &assoc : entry.associates) {
            std::optional<double> c;
            if (space.contains(assoc.word))
                c = safe_cosine(inducing, space.word_vector(assoc.word));
            if (!c) report.excluded_associates.push_back(entry.inducing + ":" + assoc.word);
            if (c) {
                any = true;
                observations.push_back(Observation{assoc.frequency, *c});
            }
            cosines.push_back(c);
        }
        if (!any) {
            report.skipped_entries.push_back(entry.inducing);
            continue;
        }
        ++report.entries_used;
        for (std::size_t slot = 0; slot < 3 && slot < cosines.size(); ++slot) {
            if (!cosines[slot]) continue;
            sums[slot] += *cosines[slot];
            ++report.rank_counts[slot];
        }
        // The worst three must not overlap the best three.
        if (cosines.size() >= 6) {
            double total = 0.0;
            std::size_t used = 0;
            for (std::size_t i = cosines.size() - 3; i < cosines.size(); ++i) {
                if (cosines[i]) {
                    total += *cosines[i];
                    ++used;
                }
            }
            if (used > 0) {
                sums[3] += total / static_cast<double>(used);
                ++report.rank_counts[3];
            }
        }
    }
    for (std::size_t slot = 0; slot < 4; ++slot) {
        if (report.rank_counts[slot] > 0) {
            report.rank_means[slot] = sums[slot] / static_cast<double>(report.rank_counts[slot]);
        }
    }

    if (options.frequency_fraction < 1.0) {
        std::stable_sort(observations.begin(), observations.end(),
                         [](const Observation &a, const Observation &b) {
                             return a.frequency > b.frequency;
                         });
        const auto keep = static_cast<std::size_t>(
            std::ceil(options.frequency_fraction * static_cast<double>(observations.size())));
        observations.resize(std::min(keep, observations.size()));
    }
    std::vector<double> xs;
    std::vector<double> ys;
    for (const auto &o : observations) {
        xs.push_back(o.frequency);
        ys.push_back(o.cosine);
    }
    report.correlation_pairs = xs.size();
    report.correlation = pearson(xs, ys);
    return report;
}

std::vector<VocabItem> read_vocab_items(std::istream &in) {
    std::vector<VocabItem> items;
    std::string line;
    std::size_t line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const std::string where = "vocabulary items line " + std::to_string(line_number) + ": ";
        nlohmann::json record;
        try {
            record = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception &e) {
            throw InputError(where + "invalid JSON (" + e.what() + ")");
        }
        if (!record.is_object()) throw InputError(where + "expected a JSON object");
        auto text = [&](const char *key) {
            auto it = record.find(key);
            if (it == record.end() || !it->is_string()) {
                throw InputError(where + "missing string field \"" + key + "\"");
            }
            try {
                return normalize_text(it->get<std::string>());
            } catch (const InputError &) {
                throw InputError(where + "field \"" + key + "\" is not valid UTF-8");
            }
        };
        VocabItem item;
        const auto stem = text("stem");
        if (stem.size() != 1) throw InputError(where + "stem must be a single word");
        item.stem = stem.front();
        for (DefinitionLabel label : kAllLabels) {
            item.definitions[static_cast<std::size_t>(label)] =
                text(std::string(to_string(label)).c_str());
        }
        items.push_back(std::move(item));
    }
    if (items.empty()) throw InputError("vocabulary items file holds no items");
    return items;
}

std::vector<AssociationNormEntry> read_association_norms(std::istream &in) {
    std::vector<AssociationNormEntry> norms;
    std::map<std::string, std::size_t> position;
    std::string line;
    std::size_t line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos || line[first] == '#') continue;
        const std::string where = "norms line " + std::to_string(line_number) + ": ";
        std::vector<std::string> fields;
        std::size_t start = 0;
        while (true) {
            const auto tab = line.find('\t', start);
            fields.push_back(line.substr(start, tab - start));
            if (tab == std::string::npos) break;
            start = tab + 1;
        }
        if (fields.size() != 4) throw InputError(where + "expected 4 tab-separated columns");
        if (!is_valid_utf8(line)) throw InputError(where + "invalid UTF-8");
        const auto inducing = normalize_text(fields[0]);
        const auto associate = normalize_text(fields[1]);
        if (inducing.size() != 1 || associate.size() != 1) {
            throw InputError(where + "words must be single tokens");
        }
        Associate a;
        a.word = associate.front();
        try {
            std::size_t used = 0;
            a.rank = std::stoi(fields[2], &used);
            if (used != fields[2].size()) throw std::invalid_argument("rank");
            a.frequency = std::stod(fields[3], &used);
            if (used != fields[3].size()) throw std::invalid_argument("frequency");
        } catch (const std::logic_error &) {
            throw InputError(where + "rank must be an integer and frequency a number");
        }
        auto [it, inserted] = position.emplace(inducing.front(), norms.size());
        if (inserted) norms.push_back(AssociationNormEntry{inducing.front(), {}});
        auto &entry = norms[it->second];
        if (!entry.associates.empty() && entry.associates.back().rank >= a.rank) {
            throw InputError(where + "ranks must be strictly increasing per inducing word");
        }
        entry.associates.push_back(std::move(a));
    }
    if (norms.empty()) throw InputError("association norms file holds no entries");
    return norms;
}

void write_vocab_report_json(std::ostream &out, const VocabReport &report) {
    nlohmann::ordered_json doc;
    doc["test"] = "vocabulary";
    doc["items"] = report.items;
    doc["answered"] = report.answered;
    doc["accuracy"] = report.accuracy;
    for (DefinitionLabel label : kAllLabels) {
        const auto l = static_cast<std::size_t>(label);
        doc["distribution"][std::string(to_string(label))] = report.distribution[l];
        doc["picks"][std::string(to_string(label))] = report.picks[l];
    }
    doc["ties"] = report.ties;
    doc["skipped"] = report.skipped_stems.size();
    doc["skipped_stems"] = report.skipped_stems;
    out << doc.dump(2) << '\n';
}

void write_association_report_json(std::ostream &out, const AssociationReport &report) {
    static constexpr std::array<const char *, 4> kSlots = {"best", "second", "third", "worst3"};
    nlohmann::ordered_json doc;
    doc["test"] = "association";
    for (std::size_t s = 0; s < 4; ++s) {
        doc["rank_means"][kSlots[s]] =
            report.rank_means[s] ? nlohmann::ordered_json(*report.rank_means[s]) : nullptr;
        doc["rank_counts"][kSlots[s]] = report.rank_counts[s];
    }
    doc["correlation"] = report.correlation ? nlohmann::ordered_json(*report.correlation) : nullptr;
    doc["correlation_pairs"] = report.correlation_pairs;
    doc["entries_used"] = report.entries_used;
    doc["skipped_entries"] = report.skipped_entries;
    doc["excluded_associates"] = report.excluded_associates;
    out << doc.dump(2) << '\n';
}

}  // namespace lsa
