#pragma once

// Minimal CSV dialect: comma separated, double-quote quoting with "" escaping,
// first row is the header. Quoted fields may span lines.

#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <ostream>
#include <sstream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "earnsignal/core/error.hpp"

namespace earnsignal {

/// One skipped-row report, rendered as `file:line: message`.
struct Diagnostic {
    std::string file;
    std::size_t line = 0;
    std::string message;

    std::string to_string() const { return file + ":" + std::to_string(line) + ": " + message; }
};

struct CsvRecord {
    std::vector<std::string> fields;
    std::size_t line = 0;  // 1-based line where the record starts
};

struct CsvTable {
    std::vector<std::string> header;
    std::vector<CsvRecord> records;
};

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_text_file(const std::string& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::Io, "cannot write '" + path + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error(ErrorKind::Io, "write failed for '" + path + "'");
}

/// Parses CSV text. Blank lines are skipped. Throws BadRow on an unterminated quote.
inline CsvTable parse_csv(std::string_view text, std::string_view source = "<memory>") {
    CsvTable table;
    std::vector<std::string> fields;
    std::string field;
    bool in_quotes = false;
    bool field_was_quoted = false;
    std::size_t line = 1;
    std::size_t record_line = 1;
    bool first = true;

    // strip UTF-8 BOM
    if (text.size() >= 3 && text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);

    auto finish_record = [&] {
        fields.push_back(std::move(field));
        field.clear();
        field_was_quoted = false;
        bool blank = fields.size() == 1 && fields[0].empty();
        if (!blank) {
            if (first) {
                table.header = std::move(fields);
                first = false;
            } else {
                table.records.push_back({std::move(fields), record_line});
            }
        }
        fields.clear();
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                if (c == '\n') ++line;
                field.push_back(c);
            }
            continue;
        }
        switch (c) {
        case '"':
            if (field.empty() && !field_was_quoted) {
                in_quotes = true;
                field_was_quoted = true;
            } else {
                field.push_back(c);
            }
            break;
        case ',':
            fields.push_back(std::move(field));
            field.clear();
            field_was_quoted = false;
            break;
        case '\r':
            if (i + 1 < text.size() && text[i + 1] == '\n') break;
            [[fallthrough]];
        case '\n':
            finish_record();
            ++line;
            record_line = line;
            break;
        default:
            field.push_back(c);
        }
    }
    if (in_quotes) {
        throw Error(ErrorKind::BadRow,
                    std::string(source) + ":" + std::to_string(record_line) + ": unterminated quote");
    }
    if (!field.empty() || !fields.empty() || field_was_quoted) finish_record();
    return table;
}

inline std::string csv_escape(std::string_view field) {
    bool needs = field.find_first_of(",\"\r\n") != std::string_view::npos ||
                 (!field.empty() && (field.front() == ' ' || field.back() == ' '));
    if (!needs) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

inline void write_csv_row(std::ostream& out, const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out << ',';
        out << csv_escape(fields[i]);
    }
    out << '\n';
}

/// Maps required column names to positions in a header.
class ColumnIndex {
public:
    ColumnIndex(const std::vector<std::string>& header, const std::vector<std::string>& required,
                std::string_view source) {
        for (const auto& name : required) {
            std::optional<std::size_t> pos;
            for (std::size_t i = 0; i < header.size(); ++i) {
                if (header[i] == name) {
                    pos = i;
                    break;
                }
            }
            if (!pos) {
                throw Error(ErrorKind::MissingColumn,
                            std::string(source) + ": header lacks column '" + name + "'");
            }
            positions_.push_back(*pos);
        }
        width_ = header.size();
    }

    std::size_t operator[](std::size_t i) const { return positions_[i]; }
    std::size_t width() const { return width_; }

private:
    std::vector<std::size_t> positions_;
    std::size_t width_ = 0;
};

inline std::string_view trim(std::string_view s) {
    constexpr std::string_view ws = " \t\r\n\f\v";
    auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

inline std::optional<std::int64_t> parse_int(std::string_view s) {
    s = trim(s);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

/// Finite doubles only.
inline std::optional<double> parse_double(std::string_view s) {
    s = trim(s);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) {
        return std::nullopt;
    }
    return v;
}

/// Shortest representation that round-trips exactly.
inline std::string format_double(double v) {
    if (v == 0.0) return "0";  // folds -0 as well
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

}  // namespace earnsignal
