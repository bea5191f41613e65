#include "lsa/cooc.h"

#include <algorithm>
#include <cmath>
#include <iterator>

#include "lsa/error.h"

namespace lsa {
namespace {

constexpr std::array<std::string_view, 5> kCategoryNames = {
    "X_ONLY", "Y_ONLY", "DIRECT_COOC", "SECOND_ORDER", "THIRD_OR_MORE"};

bool sorted_contains(const std::vector<WordId> &v, WordId w) {
    return std::binary_search(v.begin(), v.end(), w);
}

std::vector<WordId> distinct(const std::vector<WordId> &ids) {
    std::vector<WordId> out = ids;
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace

std::string_view to_string(Category category) {
    return kCategoryNames[category_index(category)];
}

Category parse_category(std::string_view name) {
    for (Category c : kAllCategories) {
        if (to_string(c) == name) return c;
    }
    throw InputError("unknown category: " + std::string(name));
}

CoocIndex::CoocIndex(std::size_t vocabulary_size)
    : cooccurrents_(vocabulary_size), postings_(vocabulary_size) {}

void CoocIndex::extend(const Paragraph &paragraph) {
    if (paragraph.id != prefix_length_) {
        throw StateError("sequencing error: index covers " + std::to_string(prefix_length_) +
                         " paragraphs but received paragraph " + std::to_string(paragraph.id));
    }
    const std::vector<WordId> words = distinct(paragraph.word_ids);
    if (!words.empty() && static_cast<std::size_t>(words.back()) >= cooccurrents_.size()) {
        cooccurrents_.resize(static_cast<std::size_t>(words.back()) + 1);
        postings_.resize(cooccurrents_.size());
    }
    for (WordId w : words) {
        auto &set = cooccurrents_[static_cast<std::size_t>(w)];
        std::vector<WordId> merged;
        merged.reserve(set.size() + words.size());
        std::set_union(set.begin(), set.end(), words.begin(), words.end(),
                       std::back_inserter(merged));
        set = std::move(merged);
        postings_[static_cast<std::size_t>(w)].push_back(paragraph.id);
    }
    ++prefix_length_;
}

void CoocIndex::check(WordId word) const {
    if (word < 0 || static_cast<std::size_t>(word) >= cooccurrents_.size()) {
        throw LookupError("word id not covered by the co-occurrence index: " +
                          std::to_string(word));
    }
}

const std::vector<WordId> &CoocIndex::cooccurrents(WordId word) const {
    check(word);
    return cooccurrents_[static_cast<std::size_t>(word)];
}

bool CoocIndex::cooccur(WordId a, WordId b) const {
    return sorted_contains(cooccurrents(a), b);
}

std::size_t CoocIndex::paragraph_count(WordId word) const {
    check(word);
    return postings_[static_cast<std::size_t>(word)].size();
}

std::size_t CoocIndex::joint_paragraph_count(WordId a, WordId b) const {
    check(a);
    check(b);
    const auto &pa = postings_[static_cast<std::size_t>(a)];
    const auto &pb = postings_[static_cast<std::size_t>(b)];
    std::size_t count = 0;
    auto i = pa.begin();
    auto j = pb.begin();
    while (i != pa.end() && j != pb.end()) {
        if (*i < *j) {
            ++i;
        } else if (*j < *i) {
            ++j;
        } else {
            ++count;
            ++i;
            ++j;
        }
    }
    return count;
}

CoocIndex index_build(const Corpus &corpus, std::size_t prefix_len) {
    if (prefix_len > corpus.size()) {
        throw ParameterError("prefix length " + std::to_string(prefix_len) +
                             " exceeds corpus size " + std::to_string(corpus.size()));
    }
    CoocIndex index(corpus.vocabulary().size());
    for (std::size_t p = 0; p < prefix_len; ++p) index.extend(corpus.paragraph(p));
    return index;
}

CoocIndex index_extend(CoocIndex index, const Paragraph &paragraph) {
    index.extend(paragraph);
    return index;
}

Classification classify_paragraph(const Paragraph &paragraph, WordId x, WordId y,
                                  const CoocIndex &index) {
    if (x == y) throw ParameterError("classification needs two distinct words");
    if (x < 0 || y < 0 || static_cast<std::size_t>(x) >= index.vocabulary_size() ||
        static_cast<std::size_t>(y) >= index.vocabulary_size()) {
        throw LookupError("pair word not in vocabulary");
    }
    const std::vector<WordId> words = distinct(paragraph.word_ids);
    const bool has_x = std::binary_search(words.begin(), words.end(), x);
    const bool has_y = std::binary_search(words.begin(), words.end(), y);

    Classification out;
    if (has_x && has_y) {
        out.category = Category::kDirectCooc;
    } else if (has_x) {
        out.category = Category::kXOnly;
    } else if (has_y) {
        out.category = Category::kYOnly;
    } else {
        for (WordId w : words) {
            if (static_cast<std::size_t>(w) >= index.vocabulary_size()) continue;
            if (index.cooccur(w, x) && index.cooccur(w, y)) out.witnesses.push_back(w);
        }
        if (out.witnesses.size() >= kSecondOrderWitnesses) {
            out.category = Category::kSecondOrder;
        } else {
            out.category = Category::kThirdOrMore;
            out.witnesses.clear();
        }
    }
    return out;
}

Classification classify_paragraph(const Paragraph &paragraph, std::string_view x,
                                  std::string_view y, const CoocIndex &index,
                                  const Vocabulary &vocabulary) {
    if (x == y) throw ParameterError("classification needs two distinct words");
    return classify_paragraph(paragraph, vocabulary.index_of(x), vocabulary.index_of(y), index);
}

PmiResult pmi(const CoocIndex &index, WordId x, WordId y) {
    PmiResult out;
    out.n_x = index.paragraph_count(x);
    out.n_y = index.paragraph_count(y);
    out.total = index.prefix_length();
    if (out.n_x == 0 || out.n_y == 0) {
        throw LookupError("PMI needs both words to occur in the corpus prefix");
    }
    out.n_xy = index.joint_paragraph_count(x, y);
    if (out.n_xy > 0) {
        out.value = std::log(static_cast<double>(out.total) * static_cast<double>(out.n_xy) /
                             (static_cast<double>(out.n_x) * static_cast<double>(out.n_y)));
    }
    return out;
}

std::vector<WordPair> read_pairs(std::istream &in) {
    std::vector<WordPair> pairs;
    std::string line;
    std::size_t line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos || line[first] == '#') continue;
        const auto tab = line.find('\t');
        if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos) {
            throw InputError("pairs file line " + std::to_string(line_number) +
                             ": expected two tab-separated columns");
        }
        if (!is_valid_utf8(line)) {
            throw InputError("pairs file line " + std::to_string(line_number) + ": invalid UTF-8");
        }
        const auto w1 = normalize_text(std::string_view(line).substr(0, tab));
        const auto w2 = normalize_text(std::string_view(line).substr(tab + 1));
        if (w1.size() != 1 || w2.size() != 1) {
            throw InputError("pairs file line " + std::to_string(line_number) +
                             ": each column must hold exactly one word");
        }
        pairs.emplace_back(w1.front(), w2.front());
    }
    return pairs;
}

}  // namespace lsa
