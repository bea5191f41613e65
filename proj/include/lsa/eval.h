// Evaluation harnesses over a semantic space: a four-definition vocabulary
// test and a comparison against ranked association norms.

#ifndef LSA_EVAL_H_
#define LSA_EVAL_H_

#include <array>
#include <cstddef>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "lsa/semspace.h"

namespace lsa {

struct ChoiceResult {
    std::optional<std::size_t> chosen;          // empty if every alternative is absent
    std::vector<std::optional<double>> cosines;  // empty entry = absent alternative
    std::vector<std::size_t> absent;            // alternatives with no usable vector
    bool tie = false;                           // several alternatives share the max
};

// argmax over cosine(stem, text_vector(alternative)); ties go to the lowest
// index. Throws LookupError if the stem is out of vocabulary.
ChoiceResult multiple_choice(const SemanticSpace &space, const std::string &stem,
                             const std::vector<std::vector<std::string>> &alternatives);

enum class DefinitionLabel { kCorrect, kClose, kFar, kUnrelated };

inline constexpr std::array<DefinitionLabel, 4> kAllLabels = {
    DefinitionLabel::kCorrect, DefinitionLabel::kClose, DefinitionLabel::kFar,
    DefinitionLabel::kUnrelated};

std::string_view to_string(DefinitionLabel label);

struct VocabItem {
    std::string stem;
    // Indexed by DefinitionLabel; each definition is a token list.
    std::array<std::vector<std::string>, 4> definitions;
};

struct VocabReport {
    std::size_t items = 0;
    std::size_t answered = 0;
    std::size_t ties = 0;
    std::vector<std::string> skipped_stems;  // OOV stems or no usable definition
    std::array<std::size_t, 4> picks{};      // by label
    std::array<double, 4> distribution{};    // picks / answered
    double accuracy = 0.0;                   // fraction of `correct` picks
};

// Throws ValidationError on an empty item list.
VocabReport run_vocab_test(const SemanticSpace &space, const std::vector<VocabItem> &items);

struct Associate {
    std::string word;
    int rank = 0;
    double frequency = 0.0;
};

struct AssociationNormEntry {
    std::string inducing;
    std::vector<Associate> associates;  // strictly increasing rank
};

struct AssociationOptions {
    // Fraction (0, 1] of the pairs with the highest human response frequency
    // kept for the correlation. Per-rank means always use every pair.
    double frequency_fraction = 1.0;
};

struct AssociationReport {
    // best, 2nd, 3rd and the mean over the three worst-ranked associates.
    std::array<std::optional<double>, 4> rank_means;
    std::array<std::size_t, 4> rank_counts{};
    std::optional<double> correlation;  // Pearson(frequency, cosine)
    std::size_t correlation_pairs = 0;
    std::size_t entries_used = 0;
    std::vector<std::string> skipped_entries;
    std::vector<std::string> excluded_associates;  // "inducing:associate"
};

// Throws ValidationError on empty norms. Entries whose inducing word is out
// of vocabulary, or whose associates all are, are skipped and reported.
AssociationReport run_association_eval(const SemanticSpace &space,
                                       const std::vector<AssociationNormEntry> &norms,
                                       const AssociationOptions &options = {});

// Sample Pearson correlation; empty when either side has zero variance or
// fewer than two points.
std::optional<double> pearson(const std::vector<double> &x, const std::vector<double> &y);

// One JSON object per line: {"stem": ..., "correct": ..., "close": ...,
// "far": ..., "unrelated": ...}; definitions are raw text, normalized here.
// Throws InputError with the line number on malformed records.
std::vector<VocabItem> read_vocab_items(std::istream &in);

// Tab-separated `inducing associate rank frequency`, '#' comments.
// Throws InputError on malformed lines or an empty file.
std::vector<AssociationNormEntry> read_association_norms(std::istream &in);

void write_vocab_report_json(std::ostream &out, const VocabReport &report);
void write_association_report_json(std::ostream &out, const AssociationReport &report);

}  // namespace lsa

#endif  // LSA_EVAL_H_
