// Direct co-occurrence bookkeeping over a corpus prefix, the five-way
// paragraph taxonomy relative to a word pair, and paragraph-level PMI.

#ifndef LSA_COOC_H_
#define LSA_COOC_H_

#include <array>
#include <cstddef>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lsa/corpus.h"

namespace lsa {

enum class Category { kXOnly, kYOnly, kDirectCooc, kSecondOrder, kThirdOrMore };

inline constexpr std::array<Category, 5> kAllCategories = {
    Category::kXOnly, Category::kYOnly, Category::kDirectCooc, Category::kSecondOrder,
    Category::kThirdOrMore};

// X_ONLY, Y_ONLY, DIRECT_COOC, SECOND_ORDER, THIRD_OR_MORE
std::string_view to_string(Category category);
Category parse_category(std::string_view name);

inline std::size_t category_index(Category c) { return static_cast<std::size_t>(c); }

// Co-occurrence state of the paragraph prefix [0, n).
class CoocIndex {
public:
    explicit CoocIndex(std::size_t vocabulary_size = 0);

    // Incorporates paragraph n. Throws StateError unless paragraph.id == n.
    void extend(const Paragraph &paragraph);

    std::size_t prefix_length() const { return prefix_length_; }
    std::size_t vocabulary_size() const { return cooccurrents_.size(); }

    // Sorted ids of the words sharing at least one paragraph with `word`
    // (including `word` itself once it has occurred).
    const std::vector<WordId> &cooccurrents(WordId word) const;
    bool cooccur(WordId a, WordId b) const;

    // Number of prefix paragraphs containing the word / both words.
    std::size_t paragraph_count(WordId word) const;
    std::size_t joint_paragraph_count(WordId a, WordId b) const;

    bool operator==(const CoocIndex &) const = default;

private:
    void check(WordId word) const;

    std::size_t prefix_length_ = 0;
    std::vector<std::vector<WordId>> cooccurrents_;
    std::vector<std::vector<std::size_t>> postings_;
};

// Throws ParameterError when n exceeds the corpus size.
CoocIndex index_build(const Corpus &corpus, std::size_t prefix_len);
CoocIndex index_extend(CoocIndex index, const Paragraph &paragraph);

struct Classification {
    Category category = Category::kThirdOrMore;
    std::vector<WordId> witnesses;  // sorted; filled for SECOND_ORDER only
};

// Minimum number of distinct mediating words for a SECOND_ORDER paragraph.
inline constexpr std::size_t kSecondOrderWitnesses = 3;

// `index` must describe the corpus before `paragraph`. Precedence: both words
// present, x only, y only, >= 3 witnesses, otherwise THIRD_OR_MORE.
Classification classify_paragraph(const Paragraph &paragraph, WordId x, WordId y,
                                  const CoocIndex &index);
Classification classify_paragraph(const Paragraph &paragraph, std::string_view x,
                                  std::string_view y, const CoocIndex &index,
                                  const Vocabulary &vocabulary);

struct PmiResult {
    std::size_t n_x = 0;
    std::size_t n_y = 0;
    std::size_t n_xy = 0;
    std::size_t total = 0;
    // Empty when the words never co-occur.
    std::optional<double> value;

    bool defined() const { return value.has_value(); }
};

// Natural-log PMI over paragraph presence in the index prefix. Throws
// LookupError when either word has no occurrence in the prefix.
PmiResult pmi(const CoocIndex &index, WordId x, WordId y);

using WordPair = std::pair<std::string, std::string>;

// Tab-separated word pairs, '#' comments and blank lines ignored. Each field
// is normalized like corpus text and must yield exactly one token.
// Throws InputError with the line number on malformed lines.
std::vector<WordPair> read_pairs(std::istream &in);

}  // namespace lsa

#endif  // LSA_COOC_H_
