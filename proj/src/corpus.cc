#include "lsa/corpus.h"

#include <unicode/locid.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include <cstdio>
#include <fstream>

#include "lsa/error.h"

namespace lsa {
namespace {

bool is_letter(UChar32 c) {
    if (c < 0) return false;
    if (u_isalpha(c)) return true;
    const int8_t type = u_charType(c);
    return type == U_NON_SPACING_MARK || type == U_COMBINING_SPACING_MARK;
}

bool is_word_char(UChar32 c) { return is_letter(c) || u_isdigit(c); }

bool is_hyphen(UChar32 c) { return c == 0x2D || c == 0x2010 || c == 0x2011; }

bool is_apostrophe(UChar32 c) { return c == 0x27 || c == 0x2019; }

std::vector<UChar32> decode(std::string_view raw) {
    std::vector<UChar32> out;
    out.reserve(raw.size());
    const auto *bytes = reinterpret_cast<const uint8_t *>(raw.data());
    const int32_t length = static_cast<int32_t>(raw.size());
    int32_t i = 0;
    while (i < length) {
        UChar32 c;
        U8_NEXT(bytes, i, length, c);
        if (c < 0) throw InputError("invalid UTF-8 byte sequence");
        out.push_back(c);
    }
    return out;
}

}  // namespace

bool is_valid_utf8(std::string_view raw) {
    const auto *bytes = reinterpret_cast<const uint8_t *>(raw.data());
    const int32_t length = static_cast<int32_t>(raw.size());
    int32_t i = 0;
    while (i < length) {
        UChar32 c;
        U8_NEXT(bytes, i, length, c);
        if (c < 0) return false;
    }
    return true;
}

std::vector<std::string> normalize_text(std::string_view raw) {
    // Validate before ICU gets a chance to substitute U+FFFD.
    decode(raw);

    icu::UnicodeString text = icu::UnicodeString::fromUTF8(
        icu::StringPiece(raw.data(), static_cast<int32_t>(raw.size())));
    text.toLower(icu::Locale::getRoot());

    std::vector<UChar32> cps;
    cps.reserve(text.length());
    for (int32_t i = 0; i < text.length(); i = text.moveIndex32(i, 1)) {
        cps.push_back(text.char32At(i));
    }

    std::vector<std::string> tokens;
    std::string current;
    auto flush = [&] {
        if (!current.empty()) tokens.push_back(std::move(current));
        current.clear();
    };
    auto append = [&](UChar32 c) {
        char buf[U8_MAX_LENGTH];
        int32_t len = 0;
        U8_APPEND_UNSAFE(reinterpret_cast<uint8_t *>(buf), len, c);
        current.append(buf, static_cast<std::size_t>(len));
    };

    for (std::size_t i = 0; i < cps.size(); ++i) {
        const UChar32 c = cps[i];
        if (is_word_char(c)) {
            append(c);
            continue;
        }
        const bool inner = i > 0 && i + 1 < cps.size() &&
                           is_letter(cps[i - 1]) && is_letter(cps[i + 1]);
        if (inner && is_hyphen(c)) {
            append('-');
        } else if (inner && is_apostrophe(c)) {
            append('\'');
        } else {
            flush();
        }
    }
    flush();
    return tokens;
}

WordId Vocabulary::add(const std::string &word) {
    auto it = index_.find(word);
    if (it != index_.end()) return it->second;
    const auto id = static_cast<WordId>(words_.size());
    words_.push_back(word);
    index_.emplace(word, id);
    return id;
}

std::optional<WordId> Vocabulary::find(std::string_view word) const {
    auto it = index_.find(word);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

WordId Vocabulary::index_of(std::string_view word) const {
    auto id = find(word);
    if (!id) throw LookupError("word not in vocabulary: " + std::string(word));
    return *id;
}

const std::string &Vocabulary::word_of(WordId id) const {
    if (id < 0 || static_cast<std::size_t>(id) >= words_.size()) {
        throw LookupError("word id out of range: " + std::to_string(id));
    }
    return words_[static_cast<std::size_t>(id)];
}

Corpus Corpus::from_tokens(const std::vector<std::vector<std::string>> &paragraphs) {
    Corpus corpus;
    for (const auto &tokens : paragraphs) corpus.add_paragraph(tokens);
    return corpus;
}

void Corpus::add_paragraph(const std::vector<std::string> &tokens) {
    Paragraph p;
    p.id = paragraphs_.size();
    p.tokens = tokens;
    p.word_ids.reserve(tokens.size());
    for (const auto &t : tokens) p.word_ids.push_back(vocabulary_.add(t));
    paragraphs_.push_back(std::move(p));
}

Corpus load_corpus(std::istream &source) {
    Corpus corpus;
    std::string line;
    std::size_t line_number = 0;
    while (std::getline(source, line)) {
        ++line_number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!is_valid_utf8(line)) {
            throw InputError("invalid UTF-8 at line " + std::to_string(line_number));
        }
        if (line.find_first_not_of(" \t\f\v") == std::string::npos) continue;
        corpus.add_paragraph(normalize_text(line));
    }
    if (corpus.empty()) throw EmptyCorpusError();
    return corpus;
}

Corpus load_corpus_file(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open corpus file: " + path.string());
    return load_corpus(in);
}

CorpusStats corpus_stats(const Corpus &corpus) {
    CorpusStats stats;
    stats.paragraphs = corpus.size();
    for (const auto &p : corpus.paragraphs()) stats.tokens += p.tokens.size();
    stats.words = corpus.vocabulary().size();
    return stats;
}

std::uint64_t corpus_fingerprint(const Corpus &corpus) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto mix = [&h](unsigned char byte) {
        h ^= byte;
        h *= 0x100000001b3ULL;
    };
    for (const auto &p : corpus.paragraphs()) {
        for (const auto &t : p.tokens) {
            for (char ch : t) mix(static_cast<unsigned char>(ch));
            mix(' ');
        }
        mix('\n');
    }
    return h;
}

std::string fingerprint_hex(std::uint64_t fingerprint) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fingerprint));
    return buf;
}

}  // namespace lsa
