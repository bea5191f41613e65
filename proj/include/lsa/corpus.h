// Corpus ingestion: text normalization, the word inventory and the ordered
// paragraph sequence that every other module indexes into.

#ifndef LSA_CORPUS_H_
#define LSA_CORPUS_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace lsa {

using WordId = std::int32_t;

// Lowercases, strips punctuation and splits on whitespace. A hyphen survives
// only between two letters (composed words); an apostrophe likewise stays
// inside a word ("l'arbre"). Digits and diacritics are kept.
// Throws InputError if `raw` is not valid UTF-8.
std::vector<std::string> normalize_text(std::string_view raw);

// True iff `raw` decodes as UTF-8.
bool is_valid_utf8(std::string_view raw);

// Insertion-ordered bijection between word forms and dense ids.
class Vocabulary {
public:
    // Returns the id of `word`, adding it if unseen.
    WordId add(const std::string &word);

    std::optional<WordId> find(std::string_view word) const;

    // Throws LookupError naming the word if it is unknown.
    WordId index_of(std::string_view word) const;

    // Throws LookupError on an out-of-range id.
    const std::string &word_of(WordId id) const;

    bool contains(std::string_view word) const { return find(word).has_value(); }
    std::size_t size() const { return words_.size(); }
    const std::vector<std::string> &words() const { return words_; }

private:
    struct Hash {
        using is_transparent = void;
        std::size_t operator()(std::string_view s) const {
            return std::hash<std::string_view>{}(s);
        }
    };
    std::vector<std::string> words_;
    std::unordered_map<std::string, WordId, Hash, std::equal_to<>> index_;
};

struct Paragraph {
    std::size_t id = 0;
    std::vector<std::string> tokens;
    std::vector<WordId> word_ids;  // parallel to tokens
};

class Corpus {
public:
    Corpus() = default;

    // Builds a corpus from already-tokenized paragraphs. Tokens are taken
    // verbatim; the vocabulary follows first-occurrence order.
    static Corpus from_tokens(const std::vector<std::vector<std::string>> &paragraphs);

    void add_paragraph(const std::vector<std::string> &tokens);

    const std::vector<Paragraph> &paragraphs() const { return paragraphs_; }
    const Paragraph &paragraph(std::size_t i) const { return paragraphs_.at(i); }
    const Vocabulary &vocabulary() const { return vocabulary_; }
    std::size_t size() const { return paragraphs_.size(); }
    bool empty() const { return paragraphs_.empty(); }

private:
    std::vector<Paragraph> paragraphs_;
    Vocabulary vocabulary_;
};

// One paragraph per non-blank line; LF or CRLF. Throws InputError (with the
// line number) on undecodable bytes and EmptyCorpusError when nothing is left.
Corpus load_corpus(std::istream &source);
Corpus load_corpus_file(const std::filesystem::path &path);

struct CorpusStats {
    std::size_t paragraphs = 0;
    std::size_t tokens = 0;
    std::size_t words = 0;

    bool operator==(const CorpusStats &) const = default;
};

CorpusStats corpus_stats(const Corpus &corpus);

// FNV-1a over the normalized paragraph sequence. Stable across platforms.
std::uint64_t corpus_fingerprint(const Corpus &corpus);

std::string fingerprint_hex(std::uint64_t fingerprint);

}  // namespace lsa

#endif  // LSA_CORPUS_H_
