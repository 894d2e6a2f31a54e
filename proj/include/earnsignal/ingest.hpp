#pragma once

// Readers for the raw exports (Reddit comments, news, headlines, daily bars),
// the saved-HTML headline extractor, and normalization into Documents.

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <map>
#include <optional>
#include <regex>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "earnsignal/core/csv.hpp"
#include "earnsignal/core/date.hpp"
#include "earnsignal/core/error.hpp"

namespace earnsignal {

struct RawComment {
    std::string text;
    std::int64_t upvotes = 0;
    Date date;
    std::string company;
    bool operator==(const RawComment&) const = default;
};

struct NewsItem {
    std::string title;
    std::string summary;
    Date date;
    std::string company;
    bool operator==(const NewsItem&) const = default;
};

struct HeadlineItem {
    std::string headline;
    Date date;
    std::string company;
    bool operator==(const HeadlineItem&) const = default;
};

struct OhlcvBar {
    Date date;
    double open = 0;
    double high = 0;
    double low = 0;
    double close = 0;
    std::int64_t volume = 0;
    bool operator==(const OhlcvBar&) const = default;
};

enum class DocSource { Reddit, News, Headline };

inline std::string_view to_string(DocSource s) {
    switch (s) {
    case DocSource::Reddit: return "reddit";
    case DocSource::News: return "news";
    case DocSource::Headline: return "headline";
    }
    return "?";
}

inline std::optional<DocSource> parse_doc_source(std::string_view s) {
    if (s == "reddit") return DocSource::Reddit;
    if (s == "news") return DocSource::News;
    if (s == "headline") return DocSource::Headline;
    return std::nullopt;
}

struct Document {
    std::string id;
    DocSource source = DocSource::Reddit;
    std::string company;
    Date date;
    std::string combined_text;
    std::int64_t engagement = 0;
    bool operator==(const Document&) const = default;
};

/// Parsed rows plus one diagnostic per skipped row.
template <typename T>
struct ParseResult {
    std::vector<T> rows;
    std::vector<Diagnostic> diagnostics;

    std::size_t skipped() const { return diagnostics.size(); }
};

inline bool valid_ticker(std::string_view s) {
    if (s.empty()) return false;
    return std::all_of(s.begin(), s.end(), [](unsigned char c) {
        return std::isdigit(c) || (c >= 'A' && c <= 'Z');
    });
}

namespace detail {

struct BadRowError {
    std::string message;
};

inline Date require_date(std::string_view s) {
    auto d = Date::parse(trim(s));
    if (!d) throw BadRowError{"unparseable date '" + std::string(s) + "'"};
    return *d;
}

inline std::string require_ticker(std::string_view s) {
    std::string t(trim(s));
    if (!valid_ticker(t)) throw BadRowError{"invalid company ticker '" + t + "'"};
    return t;
}

inline double require_price(std::string_view s, std::string_view what) {
    auto v = parse_double(s);
    if (!v || *v <= 0.0) {
        throw BadRowError{"invalid " + std::string(what) + " '" + std::string(s) + "'"};
    }
    return *v;
}

inline std::int64_t require_count(std::string_view s, std::string_view what) {
    auto v = parse_int(s);
    if (!v || *v < 0) {
        throw BadRowError{"invalid " + std::string(what) + " '" + std::string(s) + "'"};
    }
    return *v;
}

/// Shared driver: header check, field-count check, per-row conversion with skip-on-error.
template <typename T, typename Convert>
ParseResult<T> parse_rows(std::string_view text, std::string_view source,
                          const std::vector<std::string>& columns, Convert convert) {
    CsvTable csv = parse_csv(text, source);
    if (csv.header.empty()) {
        throw Error(ErrorKind::MissingColumn, std::string(source) + ": empty file, no header");
    }
    ColumnIndex cols(csv.header, columns, source);
    ParseResult<T> result;
    for (const auto& rec : csv.records) {
        try {
            if (rec.fields.size() != cols.width()) {
                throw BadRowError{"expected " + std::to_string(cols.width()) + " fields, got " +
                                  std::to_string(rec.fields.size())};
            }
            result.rows.push_back(convert(rec, cols));
        } catch (const BadRowError& e) {
            result.diagnostics.push_back({std::string(source), rec.line, e.message});
        }
    }
    return result;
}

}  // namespace detail

inline ParseResult<RawComment> parse_reddit_csv(std::string_view text, std::string_view source) {
    return detail::parse_rows<RawComment>(
        text, source, {"text", "upvotes", "date", "company"},
        [](const CsvRecord& rec, const ColumnIndex& c) {
            RawComment r;
            r.text = rec.fields[c[0]];
            r.upvotes = detail::require_count(rec.fields[c[1]], "upvotes");
            r.date = detail::require_date(rec.fields[c[2]]);
            r.company = detail::require_ticker(rec.fields[c[3]]);
            return r;
        });
}

inline ParseResult<NewsItem> parse_news_csv(std::string_view text, std::string_view source) {
    return detail::parse_rows<NewsItem>(
        text, source, {"title", "summary", "date", "company"},
        [](const CsvRecord& rec, const ColumnIndex& c) {
            NewsItem n;
            n.title = rec.fields[c[0]];
            n.summary = rec.fields[c[1]];
            if (trim(n.title).empty() && trim(n.summary).empty()) {
                throw detail::BadRowError{"both title and summary are empty"};
            }
            n.date = detail::require_date(rec.fields[c[2]]);
            n.company = detail::require_ticker(rec.fields[c[3]]);
            return n;
        });
}

inline ParseResult<HeadlineItem> parse_headlines_csv(std::string_view text, std::string_view source) {
    return detail::parse_rows<HeadlineItem>(
        text, source, {"headline", "date", "company"},
        [](const CsvRecord& rec, const ColumnIndex& c) {
            HeadlineItem h;
            h.headline = std::string(trim(rec.fields[c[0]]));
            if (h.headline.empty()) throw detail::BadRowError{"empty headline"};
            h.date = detail::require_date(rec.fields[c[1]]);
            h.company = detail::require_ticker(rec.fields[c[2]]);
            return h;
        });
}

/// Output is sorted ascending by date; a repeated date throws DuplicateDate.
inline ParseResult<OhlcvBar> parse_ohlcv_csv(std::string_view text, std::string_view source) {
    auto result = detail::parse_rows<OhlcvBar>(
        text, source, {"date", "open", "high", "low", "close", "volume"},
        [](const CsvRecord& rec, const ColumnIndex& c) {
            OhlcvBar b;
            b.date = detail::require_date(rec.fields[c[0]]);
            b.open = detail::require_price(rec.fields[c[1]], "open");
            b.high = detail::require_price(rec.fields[c[2]], "high");
            b.low = detail::require_price(rec.fields[c[3]], "low");
            b.close = detail::require_price(rec.fields[c[4]], "close");
            b.volume = detail::require_count(rec.fields[c[5]], "volume");
            if (b.high < std::max(b.open, b.close)) {
                throw detail::BadRowError{"high below max(open, close)"};
            }
            if (b.low > std::min(b.open, b.close)) {
                throw detail::BadRowError{"low above min(open, close)"};
            }
            return b;
        });
    std::stable_sort(result.rows.begin(), result.rows.end(),
                     [](const OhlcvBar& a, const OhlcvBar& b) { return a.date < b.date; });
    for (std::size_t i = 1; i < result.rows.size(); ++i) {
        if (result.rows[i].date == result.rows[i - 1].date) {
            throw Error(ErrorKind::DuplicateDate,
                        std::string(source) + ": duplicate bar date " + result.rows[i].date.iso());
        }
    }
    return result;
}

inline ParseResult<RawComment> read_reddit_csv(const std::string& path) {
    return parse_reddit_csv(read_text_file(path), path);
}
inline ParseResult<NewsItem> read_news_csv(const std::string& path) {
    return parse_news_csv(read_text_file(path), path);
}
inline ParseResult<HeadlineItem> read_headlines_csv(const std::string& path) {
    return parse_headlines_csv(read_text_file(path), path);
}
inline ParseResult<OhlcvBar> read_ohlcv_csv(const std::string& path) {
    return parse_ohlcv_csv(read_text_file(path), path);
}

// Writers use the same headers as the readers.

inline std::string reddit_to_csv(const std::vector<RawComment>& rows) {
    std::ostringstream out;
    write_csv_row(out, {"text", "upvotes", "date", "company"});
    for (const auto& r : rows) {
        write_csv_row(out, {r.text, std::to_string(r.upvotes), r.date.iso(), r.company});
    }
    return out.str();
}

inline std::string news_to_csv(const std::vector<NewsItem>& rows) {
    std::ostringstream out;
    write_csv_row(out, {"title", "summary", "date", "company"});
    for (const auto& n : rows) write_csv_row(out, {n.title, n.summary, n.date.iso(), n.company});
    return out.str();
}

inline std::string headlines_to_csv(const std::vector<HeadlineItem>& rows) {
    std::ostringstream out;
    write_csv_row(out, {"headline", "date", "company"});
    for (const auto& h : rows) write_csv_row(out, {h.headline, h.date.iso(), h.company});
    return out.str();
}

inline std::string ohlcv_to_csv(const std::vector<OhlcvBar>& rows) {
    std::ostringstream out;
    write_csv_row(out, {"date", "open", "high", "low", "close", "volume"});
    for (const auto& b : rows) {
        write_csv_row(out, {b.date.iso(), format_double(b.open), format_double(b.high),
                            format_double(b.low), format_double(b.close),
                            std::to_string(b.volume)});
    }
    return out.str();
}

// ---------------------------------------------------------------------------
// Saved HTML snapshots
// ---------------------------------------------------------------------------

/// `tag` or `tag.class`.
struct Selector {
    std::string tag;    // lowercase
    std::string klass;  // empty = any

    static Selector parse(std::string_view text) {
        static const std::regex grammar(R"(^([A-Za-z][A-Za-z0-9]*)(?:\.([A-Za-z_][A-Za-z0-9_-]*))?$)");
        std::string s(trim(text));
        std::smatch m;
        if (!std::regex_match(s, m, grammar)) {
            throw Error(ErrorKind::SelectorSyntax, "malformed selector '" + std::string(text) + "'");
        }
        Selector sel;
        sel.tag = m[1].str();
        std::transform(sel.tag.begin(), sel.tag.end(), sel.tag.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        sel.klass = m[2].matched ? m[2].str() : std::string{};
        return sel;
    }
};

namespace detail {

struct TagToken {
    std::size_t begin = 0;  // position of '<'
    std::size_t end = 0;    // one past '>'
    std::string name;       // lowercase
    bool closing = false;
    bool self_closing = false;
    std::string attrs;      // raw attribute text
};

/// Reads the tag starting at html[pos] == '<'. Returns nullopt for comments,
/// doctypes and stray '<', with `skip_to` set past the construct.
inline std::optional<TagToken> read_tag(std::string_view html, std::size_t pos, std::size_t& skip_to) {
    if (html.substr(pos, 4) == "<!--") {
        auto e = html.find("-->", pos + 4);
        skip_to = e == std::string_view::npos ? html.size() : e + 3;
        return std::nullopt;
    }
    std::size_t i = pos + 1;
    TagToken tok;
    tok.begin = pos;
    if (i < html.size() && html[i] == '/') {
        tok.closing = true;
        ++i;
    }
    std::size_t name_start = i;
    while (i < html.size() && std::isalnum(static_cast<unsigned char>(html[i]))) ++i;
    if (i == name_start) {
        // "<!DOCTYPE", "<?xml", or a literal '<' in text
        if (i < html.size() && (html[i] == '!' || html[i] == '?')) {
            auto e = html.find('>', i);
            skip_to = e == std::string_view::npos ? html.size() : e + 1;
        } else {
            skip_to = pos + 1;
        }
        return std::nullopt;
    }
    for (std::size_t k = name_start; k < i; ++k) {
        tok.name.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(html[k]))));
    }
    std::size_t attr_start = i;
    char quote = 0;
    while (i < html.size()) {
        char c = html[i];
        if (quote) {
            if (c == quote) quote = 0;
        } else if (c == '"' || c == '\'') {
            quote = c;
        } else if (c == '>') {
            break;
        }
        ++i;
    }
    if (i >= html.size()) {
        skip_to = html.size();
        return std::nullopt;
    }
    tok.attrs = std::string(html.substr(attr_start, i - attr_start));
    auto t = trim(tok.attrs);
    if (!t.empty() && t.back() == '/') tok.self_closing = true;
    tok.end = i + 1;
    skip_to = tok.end;
    return tok;
}

inline std::optional<std::string> attribute_value(std::string_view attrs, std::string_view want) {
    std::size_t i = 0;
    while (i < attrs.size()) {
        while (i < attrs.size() && (std::isspace(static_cast<unsigned char>(attrs[i])) || attrs[i] == '/')) ++i;
        std::size_t ns = i;
        while (i < attrs.size() && !std::isspace(static_cast<unsigned char>(attrs[i])) &&
               attrs[i] != '=' && attrs[i] != '/') {
            ++i;
        }
        std::string name(attrs.substr(ns, i - ns));
        std::transform(name.begin(), name.end(), name.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        while (i < attrs.size() && std::isspace(static_cast<unsigned char>(attrs[i]))) ++i;
        std::string value;
        if (i < attrs.size() && attrs[i] == '=') {
            ++i;
            while (i < attrs.size() && std::isspace(static_cast<unsigned char>(attrs[i]))) ++i;
            if (i < attrs.size() && (attrs[i] == '"' || attrs[i] == '\'')) {
                char q = attrs[i++];
                std::size_t vs = i;
                while (i < attrs.size() && attrs[i] != q) ++i;
                value = std::string(attrs.substr(vs, i - vs));
                if (i < attrs.size()) ++i;
            } else {
                std::size_t vs = i;
                while (i < attrs.size() && !std::isspace(static_cast<unsigned char>(attrs[i]))) ++i;
                value = std::string(attrs.substr(vs, i - vs));
            }
        }
        if (name.empty()) {
            ++i;
            continue;
        }
        if (name == want) return value;
    }
    return std::nullopt;
}

inline bool has_class(std::string_view attrs, std::string_view klass) {
    auto cls = attribute_value(attrs, "class");
    if (!cls) return false;
    std::istringstream ss(*cls);
    std::string token;
    while (ss >> token) {
        if (token == klass) return true;
    }
    return false;
}

inline std::string decode_entities(std::string_view s) {
    static const std::pair<std::string_view, std::string_view> named[] = {
        {"&amp;", "&"}, {"&lt;", "<"},   {"&gt;", ">"},     {"&quot;", "\""},
        {"&#39;", "'"}, {"&apos;", "'"}, {"&nbsp;", " "},   {"&middot;", "\xC2\xB7"},
    };
    std::string out;
    for (std::size_t i = 0; i < s.size();) {
        if (s[i] == '&') {
            bool done = false;
            for (auto [from, to] : named) {
                if (s.substr(i, from.size()) == from) {
                    out += to;
                    i += from.size();
                    done = true;
                    break;
                }
            }
            if (done) continue;
            if (s.substr(i, 2) == "&#") {
                auto semi = s.find(';', i);
                if (semi != std::string_view::npos && semi - i <= 8) {
                    auto body = s.substr(i + 2, semi - i - 2);
                    int base = 10;
                    if (!body.empty() && (body[0] == 'x' || body[0] == 'X')) {
                        base = 16;
                        body.remove_prefix(1);
                    }
                    unsigned code = 0;
                    auto [p, ec] = std::from_chars(body.data(), body.data() + body.size(), code, base);
                    if (ec == std::errc{} && p == body.data() + body.size() && code > 0 && code < 128) {
                        out.push_back(static_cast<char>(code));
                        i = semi + 1;
                        continue;
                    }
                }
            }
        }
        out.push_back(s[i++]);
    }
    return out;
}

/// Inner text with markup removed, entities decoded and whitespace collapsed.
inline std::string element_text(std::string_view inner) {
    std::string raw;
    std::size_t i = 0;
    while (i < inner.size()) {
        if (inner[i] == '<') {
            std::size_t skip = i + 1;
            auto tok = read_tag(inner, i, skip);
            if (tok && (tok->name == "br" || tok->name == "p" || tok->name == "div" || tok->name == "li")) {
                raw.push_back(' ');
            }
            if (!tok && skip == i + 1) raw.push_back('<');
            i = skip;
        } else {
            raw.push_back(inner[i++]);
        }
    }
    std::string decoded = decode_entities(raw);
    std::string out;
    bool space = false;
    for (unsigned char c : decoded) {
        if (std::isspace(c)) {
            space = true;
        } else {
            if (space && !out.empty()) out.push_back(' ');
            space = false;
            out.push_back(static_cast<char>(c));
        }
    }
    return out;
}

}  // namespace detail

/// Date for a snapshot line: an absolute ISO date wins; otherwise relative
/// phrases ("N minutes/hours ago" -> snapshot day, "N days ago", "yesterday");
/// otherwise the snapshot date.
inline Date resolve_snapshot_date(std::string_view text, Date snapshot_date) {
    static const std::regex iso(R"((\d{4}-\d{2}-\d{2}))");
    static const std::regex relative(
        R"(\b(\d+|an?)\s+(minute|minutes|min|mins|hour|hours|hr|hrs|day|days)\s+ago\b)",
        std::regex::icase);
    static const std::regex yesterday(R"(\byesterday\b)", std::regex::icase);

    std::string s(text);
    for (auto it = std::sregex_iterator(s.begin(), s.end(), iso); it != std::sregex_iterator(); ++it) {
        if (auto d = Date::parse((*it)[1].str())) return *d;
    }
    std::smatch m;
    if (std::regex_search(s, m, relative)) {
        std::string unit = m[2].str();
        std::transform(unit.begin(), unit.end(), unit.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        if (unit == "day" || unit == "days") {
            std::string n = m[1].str();
            long count = 1;
            if (std::isdigit(static_cast<unsigned char>(n[0]))) count = static_cast<long>(*parse_int(n));
            return snapshot_date.plus_days(-count);
        }
        return snapshot_date;
    }
    if (std::regex_search(s, yesterday)) return snapshot_date.plus_days(-1);
    return snapshot_date;
}

/// One HeadlineItem per element matching `selector`. A matched element's
/// descendants are not matched again. Elements with no text are skipped.
inline std::vector<HeadlineItem> parse_headline_snapshot(std::string_view html, std::string_view selector,
                                                         Date snapshot_date, std::string_view company) {
    const Selector sel = Selector::parse(selector);
    std::vector<HeadlineItem> out;
    std::size_t pos = 0;
    while ((pos = html.find('<', pos)) != std::string_view::npos) {
        std::size_t next = pos + 1;
        auto tok = detail::read_tag(html, pos, next);
        if (!tok || tok->closing || tok->name != sel.tag ||
            (!sel.klass.empty() && !detail::has_class(tok->attrs, sel.klass))) {
            pos = next;
            continue;
        }
        std::size_t content_begin = tok->end;
        std::size_t content_end = html.size();
        std::size_t after = html.size();
        if (tok->self_closing) {
            content_end = content_begin;
            after = content_begin;
        } else {
            int depth = 1;
            std::size_t scan = content_begin;
            while ((scan = html.find('<', scan)) != std::string_view::npos) {
                std::size_t skip = scan + 1;
                auto inner = detail::read_tag(html, scan, skip);
                if (inner && inner->name == sel.tag && !inner->self_closing) {
                    depth += inner->closing ? -1 : 1;
                    if (depth == 0) {
                        content_end = scan;
                        after = inner->end;
                        break;
                    }
                }
                scan = skip;
            }
        }
        std::string text = detail::element_text(html.substr(content_begin, content_end - content_begin));
        if (!text.empty()) {
            out.push_back({text, resolve_snapshot_date(text, snapshot_date), std::string(company)});
        }
        pos = after;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Normalization
// ---------------------------------------------------------------------------

inline std::string document_id(DocSource source, std::size_t index) {
    return std::string(to_string(source)) + "-" + std::to_string(index);
}

/// Reddit text as-is, news "title summary", headline text. Ids are `<source>-<index>`.
inline std::vector<Document> to_documents(const std::vector<RawComment>& comments,
                                          const std::vector<NewsItem>& news,
                                          const std::vector<HeadlineItem>& headlines) {
    std::vector<Document> docs;
    docs.reserve(comments.size() + news.size() + headlines.size());
    for (std::size_t i = 0; i < comments.size(); ++i) {
        const auto& c = comments[i];
        docs.push_back({document_id(DocSource::Reddit, i), DocSource::Reddit, c.company, c.date, c.text,
                        c.upvotes});
    }
    for (std::size_t i = 0; i < news.size(); ++i) {
        const auto& n = news[i];
        std::string text;
        if (n.title.empty()) {
            text = n.summary;
        } else if (n.summary.empty()) {
            text = n.title;
        } else {
            text = n.title + " " + n.summary;
        }
        docs.push_back({document_id(DocSource::News, i), DocSource::News, n.company, n.date, text, 0});
    }
    for (std::size_t i = 0; i < headlines.size(); ++i) {
        const auto& h = headlines[i];
        docs.push_back({document_id(DocSource::Headline, i), DocSource::Headline, h.company, h.date,
                        h.headline, 0});
    }
    return docs;
}

// Normalized document store: `id,source,company,date,engagement,combined_text`.

inline std::string documents_to_csv(const std::vector<Document>& docs) {
    std::ostringstream out;
    write_csv_row(out, {"id", "source", "company", "date", "engagement", "combined_text"});
    for (const auto& d : docs) {
        write_csv_row(out, {d.id, std::string(to_string(d.source)), d.company, d.date.iso(),
                            std::to_string(d.engagement), d.combined_text});
    }
    return out.str();
}

inline ParseResult<Document> parse_documents_csv(std::string_view text, std::string_view source) {
    return detail::parse_rows<Document>(
        text, source, {"id", "source", "company", "date", "engagement", "combined_text"},
        [](const CsvRecord& rec, const ColumnIndex& c) {
            Document d;
            d.id = rec.fields[c[0]];
            if (d.id.empty()) throw detail::BadRowError{"empty document id"};
            auto src = parse_doc_source(rec.fields[c[1]]);
            if (!src) throw detail::BadRowError{"unknown source '" + rec.fields[c[1]] + "'"};
            d.source = *src;
            d.company = detail::require_ticker(rec.fields[c[2]]);
            d.date = detail::require_date(rec.fields[c[3]]);
            d.engagement = detail::require_count(rec.fields[c[4]], "engagement");
            d.combined_text = rec.fields[c[5]];
            return d;
        });
}

/// Daily bars for several companies: `company,date,open,high,low,close,volume`.
using BarsByCompany = std::map<std::string, std::vector<OhlcvBar>>;

inline std::string bars_store_to_csv(const BarsByCompany& bars) {
    std::ostringstream out;
    write_csv_row(out, {"company", "date", "open", "high", "low", "close", "volume"});
    for (const auto& [company, series] : bars) {
        for (const auto& b : series) {
            write_csv_row(out, {company, b.date.iso(), format_double(b.open), format_double(b.high),
                                format_double(b.low), format_double(b.close), std::to_string(b.volume)});
        }
    }
    return out.str();
}

inline BarsByCompany parse_bars_store(std::string_view text, std::string_view source) {
    CsvTable csv = parse_csv(text, source);
    ColumnIndex cols(csv.header, {"company"}, source);
    std::map<std::string, std::string> per_company;
    std::vector<std::string> header;
    for (std::size_t i = 0; i < csv.header.size(); ++i) {
        if (i != cols[0]) header.push_back(csv.header[i]);
    }
    for (const auto& rec : csv.records) {
        if (rec.fields.size() != csv.header.size()) {
            throw Error(ErrorKind::BadRow, std::string(source) + ":" + std::to_string(rec.line) +
                                               ": field count mismatch");
        }
        std::vector<std::string> rest;
        for (std::size_t i = 0; i < rec.fields.size(); ++i) {
            if (i != cols[0]) rest.push_back(rec.fields[i]);
        }
        std::ostringstream line;
        auto& buf = per_company[rec.fields[cols[0]]];
        if (buf.empty()) write_csv_row(line, header);
        write_csv_row(line, rest);
        buf += line.str();
    }
    BarsByCompany out;
    for (const auto& [company, body] : per_company) {
        auto parsed = parse_ohlcv_csv(body, source);
        if (!parsed.diagnostics.empty()) {
            throw Error(ErrorKind::BadRow, parsed.diagnostics.front().message + " (company " + company + ")");
        }
        out[company] = std::move(parsed.rows);
    }
    return out;
}

}  // namespace earnsignal
