#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "earnsignal/core/csv.hpp"
#include "earnsignal/core/date.hpp"
#include "earnsignal/core/error.hpp"

namespace earnsignal {

/// Next-day close direction. Increase is the positive class everywhere.
enum class Direction { Decrease = 0, Increase = 1 };

inline std::string_view to_string(Direction d) {
    return d == Direction::Increase ? "Increase" : "Decrease";
}

inline std::optional<Direction> parse_direction(std::string_view s) {
    if (s == "Increase") return Direction::Increase;
    if (s == "Decrease") return Direction::Decrease;
    return std::nullopt;
}

inline double as_target(Direction d) { return d == Direction::Increase ? 1.0 : 0.0; }

enum class RowOrigin { Original, Synthetic };

struct FeatureRow {
    std::string company;
    Date date;
    std::vector<double> values;
    Direction label = Direction::Decrease;

    // Provenance carried through split / scaling / balancing.
    std::uint64_t row_id = 0;
    RowOrigin origin = RowOrigin::Original;
    std::uint64_t parent_a = 0;
    std::uint64_t parent_b = 0;

    bool operator==(const FeatureRow&) const = default;
};

struct FeatureTable {
    std::vector<std::string> feature_names;
    std::vector<FeatureRow> rows;

    std::size_t width() const { return feature_names.size(); }
    std::size_t size() const { return rows.size(); }
    bool empty() const { return rows.empty(); }

    std::optional<std::size_t> feature_index(std::string_view name) const {
        auto it = std::find(feature_names.begin(), feature_names.end(), name);
        if (it == feature_names.end()) return std::nullopt;
        return static_cast<std::size_t>(it - feature_names.begin());
    }

    /// Same header, no rows.
    FeatureTable empty_like() const { return FeatureTable{feature_names, {}}; }

    bool operator==(const FeatureTable&) const = default;
};

/// Throws DimensionMismatch / BadRow if a row is the wrong width or holds NaN/inf.
inline void validate_table(const FeatureTable& table) {
    for (const auto& row : table.rows) {
        if (row.values.size() != table.width()) {
            throw Error(ErrorKind::DimensionMismatch,
                        "row " + row.company + "@" + row.date.iso() + " has " +
                            std::to_string(row.values.size()) + " values, expected " +
                            std::to_string(table.width()));
        }
        for (double v : row.values) {
            if (!std::isfinite(v)) {
                throw Error(ErrorKind::BadRow,
                            "non-finite feature value in row " + row.company + "@" + row.date.iso());
            }
        }
    }
}

inline void sort_by_date_company(std::vector<FeatureRow>& rows) {
    std::stable_sort(rows.begin(), rows.end(), [](const FeatureRow& a, const FeatureRow& b) {
        if (a.date != b.date) return a.date < b.date;
        return a.company < b.company;
    });
}

/// Header: `company,date,<feature names...>,label`.
inline std::string feature_table_to_csv(const FeatureTable& table) {
    std::ostringstream out;
    std::vector<std::string> header{"company", "date"};
    header.insert(header.end(), table.feature_names.begin(), table.feature_names.end());
    header.push_back("label");
    write_csv_row(out, header);
    std::vector<std::string> fields;
    for (const auto& row : table.rows) {
        fields.clear();
        fields.push_back(row.company);
        fields.push_back(row.date.iso());
        for (double v : row.values) fields.push_back(format_double(v));
        fields.emplace_back(to_string(row.label));
        write_csv_row(out, fields);
    }
    return out.str();
}

/// Inverse of feature_table_to_csv. Row ids are assigned by file order.
/// Any malformed row is a data-contract error: feature tables are machine-written.
inline FeatureTable feature_table_from_csv(std::string_view text, std::string_view source) {
    CsvTable csv = parse_csv(text, source);
    ColumnIndex cols(csv.header, {"company", "date", "label"}, source);
    FeatureTable table;
    std::vector<std::size_t> feature_cols;
    for (std::size_t i = 0; i < csv.header.size(); ++i) {
        if (i == cols[0] || i == cols[1] || i == cols[2]) continue;
        table.feature_names.push_back(csv.header[i]);
        feature_cols.push_back(i);
    }
    std::uint64_t next_id = 0;
    for (const auto& rec : csv.records) {
        auto where = std::string(source) + ":" + std::to_string(rec.line);
        if (rec.fields.size() != csv.header.size()) {
            throw Error(ErrorKind::BadRow, where + ": expected " + std::to_string(csv.header.size()) +
                                               " fields, got " + std::to_string(rec.fields.size()));
        }
        FeatureRow row;
        row.company = rec.fields[cols[0]];
        auto date = Date::parse(rec.fields[cols[1]]);
        auto label = parse_direction(rec.fields[cols[2]]);
        if (!date) throw Error(ErrorKind::BadRow, where + ": bad date '" + rec.fields[cols[1]] + "'");
        if (!label) throw Error(ErrorKind::BadRow, where + ": bad label '" + rec.fields[cols[2]] + "'");
        row.date = *date;
        row.label = *label;
        for (std::size_t c : feature_cols) {
            auto v = parse_double(rec.fields[c]);
            if (!v) throw Error(ErrorKind::BadRow, where + ": bad number '" + rec.fields[c] + "'");
            row.values.push_back(*v);
        }
        row.row_id = next_id++;
        table.rows.push_back(std::move(row));
    }
    return table;
}

}  // namespace earnsignal
