#pragma once

#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "earnsignal/core/csv.hpp"

namespace earnsignal {

using TokenList = std::vector<std::string>;
using Stoplist = std::set<std::string, std::less<>>;

namespace detail {

inline bool is_word_byte(unsigned char c) {
    return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '\'';
}

inline bool is_space_byte(unsigned char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

/// Lowercased copy with `http(s)://...` and `www....` runs removed up to whitespace.
inline std::string strip_urls_lower(std::string_view raw) {
    std::string lower;
    lower.reserve(raw.size());
    for (unsigned char c : raw) {
        lower.push_back((c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : static_cast<char>(c));
    }
    std::string out;
    out.reserve(lower.size());
    std::string_view s = lower;
    for (std::size_t i = 0; i < s.size();) {
        auto rest = s.substr(i);
        if (rest.starts_with("http://") || rest.starts_with("https://") || rest.starts_with("www.")) {
            while (i < s.size() && !is_space_byte(static_cast<unsigned char>(s[i]))) ++i;
            out.push_back(' ');
            continue;
        }
        out.push_back(s[i++]);
    }
    return out;
}

}  // namespace detail

/// Lowercase, drop URLs, replace anything outside [a-z0-9'] with a space,
/// strip apostrophes at word edges, collapse whitespace, trim.
/// Non-ASCII bytes count as special characters. Idempotent.
inline std::string clean_text(std::string_view raw) {
    const std::string s = detail::strip_urls_lower(raw);
    std::string out;
    out.reserve(s.size());
    std::string word;
    auto flush = [&] {
        std::size_t b = word.find_first_not_of('\'');
        if (b != std::string::npos) {
            std::size_t e = word.find_last_not_of('\'');
            if (!out.empty()) out.push_back(' ');
            out.append(word, b, e - b + 1);
        }
        word.clear();
    };
    for (unsigned char c : s) {
        if (detail::is_word_byte(c)) {
            word.push_back(static_cast<char>(c));
        } else {
            flush();
        }
    }
    flush();
    return out;
}

/// Splits on whitespace; order preserved, no empty tokens.
inline TokenList tokenize(std::string_view cleaned) {
    TokenList tokens;
    std::size_t i = 0;
    while (i < cleaned.size()) {
        while (i < cleaned.size() && detail::is_space_byte(static_cast<unsigned char>(cleaned[i]))) ++i;
        std::size_t b = i;
        while (i < cleaned.size() && !detail::is_space_byte(static_cast<unsigned char>(cleaned[i]))) ++i;
        if (i > b) tokens.emplace_back(cleaned.substr(b, i - b));
    }
    return tokens;
}

inline TokenList remove_stopwords(const TokenList& tokens, const Stoplist& stoplist) {
    TokenList out;
    out.reserve(tokens.size());
    for (const auto& t : tokens) {
        if (!stoplist.contains(t)) out.push_back(t);
    }
    return out;
}

/// The 127-word English function-word list (same contents as data/stopwords.txt).
inline const Stoplist& default_stoplist() {
    static const Stoplist list{
        "i", "me", "my", "myself", "we", "our", "ours", "ourselves", "you", "your", "yours",
        "yourself", "yourselves", "he", "him", "his", "himself", "she", "her", "hers", "herself",
        "it", "its", "itself", "they", "them", "their", "theirs", "themselves", "what", "which",
        "who", "whom", "this", "that", "these", "those", "am", "is", "are", "was", "were", "be",
        "been", "being", "have", "has", "had", "having", "do", "does", "did", "doing", "a", "an",
        "the", "and", "but", "if", "or", "because", "as", "until", "while", "of", "at", "by",
        "for", "with", "about", "against", "between", "into", "through", "during", "before",
        "after", "above", "below", "to", "from", "up", "down", "in", "out", "on", "off", "over",
        "under", "again", "further", "then", "once", "here", "there", "when", "where", "why",
        "how", "all", "any", "both", "each", "few", "more", "most", "other", "some", "such", "no",
        "nor", "not", "only", "own", "same", "so", "than", "too", "very", "s", "t", "can",
        "will", "just", "don", "should", "now"};
    return list;
}

/// One token per line; `#` starts a comment; tokens are lowercased.
inline Stoplist parse_stoplist(std::string_view text) {
    Stoplist list;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto nl = text.find('\n', start);
        auto line = text.substr(start, nl == std::string_view::npos ? std::string_view::npos : nl - start);
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (!line.empty()) {
            std::string tok(line);
            for (auto& c : tok) {
                if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
            }
            list.insert(std::move(tok));
        }
        if (nl == std::string_view::npos) break;
        start = nl + 1;
    }
    return list;
}

inline Stoplist load_stoplist(const std::string& path) { return parse_stoplist(read_text_file(path)); }

}  // namespace earnsignal
