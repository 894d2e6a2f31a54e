#pragma once

// Daily feature construction: per-source sentiment aggregates, price-derived
// stock features, next-day direction labels, calendar features, and the
// (company, date) join that produces the labeled FeatureTable.
//
// Column layout of a merged table, in order:
//   open, close, volume, daily_change, rolling_mean_close, rolling_has_data,
//   day_of_week, days_to_earnings, earnings_missing,
//   then for each source prefix P (reddit_, news_, headline_):
//   P n_docs, P mean_polarity, P weighted_polarity, P pos_frac, P neg_frac,
//   P neu_frac, P mean_doc_length, P kw_<keyword>..., P has_data

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "earnsignal/core/csv.hpp"
#include "earnsignal/core/date.hpp"
#include "earnsignal/core/error.hpp"
#include "earnsignal/core/table.hpp"
#include "earnsignal/ingest.hpp"
#include "earnsignal/sentiment.hpp"
#include "earnsignal/textprep.hpp"

namespace earnsignal {

inline const std::vector<std::string>& default_keywords() {
    static const std::vector<std::string> k{"earnings", "beat", "miss", "guidance", "call", "put"};
    return k;
}

// ---------------------------------------------------------------------------
// Sentiment aggregation
// ---------------------------------------------------------------------------

struct ScoredDocument {
    Document doc;
    SentimentScore score;
};

struct SentimentDayAggregate {
    std::string company;
    Date date;
    std::size_t n_docs = 0;
    double mean_polarity = 0.0;
    double weighted_polarity = 0.0;
    double pos_frac = 0.0;
    double neg_frac = 0.0;
    double neu_frac = 0.0;
    double mean_doc_length = 0.0;  // tokens
    std::map<std::string, std::size_t> keyword_hits;

    bool operator==(const SentimentDayAggregate&) const = default;
};

/// w = 1 + ln(1 + upvotes).
inline double upvote_weight(double engagement) { return 1.0 + std::log1p(engagement); }

/// Engagement-weighted mean of polarities; pairs are (polarity, engagement).
inline double weighted_polarity(const std::vector<std::pair<double, double>>& items) {
    double num = 0.0;
    double den = 0.0;
    for (auto [polarity, engagement] : items) {
        const double w = upvote_weight(engagement);
        num += w * polarity;
        den += w;
    }
    return den > 0.0 ? num / den : 0.0;
}

/// Groups by (company, date); output sorted by company then date.
inline std::vector<SentimentDayAggregate> aggregate_daily_sentiment(const std::vector<ScoredDocument>& docs,
                                                                    const std::vector<std::string>& keywords) {
    std::map<std::pair<std::string, Date>, std::vector<const ScoredDocument*>> groups;
    for (const auto& d : docs) groups[{d.doc.company, d.doc.date}].push_back(&d);

    std::vector<SentimentDayAggregate> out;
    out.reserve(groups.size());
    for (const auto& [key, members] : groups) {
        SentimentDayAggregate agg;
        agg.company = key.first;
        agg.date = key.second;
        agg.n_docs = members.size();
        for (const auto& k : keywords) agg.keyword_hits[k] = 0;

        std::vector<std::pair<double, double>> weighted;
        double polarity_sum = 0.0;
        double length_sum = 0.0;
        std::size_t pos = 0;
        std::size_t neg = 0;
        std::size_t neu = 0;
        for (const ScoredDocument* m : members) {
            polarity_sum += m->score.polarity;
            weighted.emplace_back(m->score.polarity, static_cast<double>(m->doc.engagement));
            switch (m->score.label) {
            case SentimentLabel::Positive: ++pos; break;
            case SentimentLabel::Negative: ++neg; break;
            case SentimentLabel::Neutral: ++neu; break;
            }
            const TokenList tokens = tokenize(clean_text(m->doc.combined_text));
            length_sum += static_cast<double>(tokens.size());
            for (const auto& t : tokens) {
                if (auto it = agg.keyword_hits.find(t); it != agg.keyword_hits.end()) ++it->second;
            }
        }
        const double n = static_cast<double>(agg.n_docs);
        agg.mean_polarity = polarity_sum / n;
        agg.weighted_polarity = weighted_polarity(weighted);
        agg.pos_frac = static_cast<double>(pos) / n;
        agg.neg_frac = static_cast<double>(neg) / n;
        agg.neu_frac = static_cast<double>(neu) / n;
        agg.mean_doc_length = length_sum / n;
        out.push_back(std::move(agg));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Stock features and labels
// ---------------------------------------------------------------------------

struct StockDayFeatures {
    std::string company;
    Date date;
    double open = 0.0;
    double close = 0.0;
    double volume = 0.0;
    double daily_change = 0.0;                // close - open
    std::optional<double> rolling_mean_close;  // current and window-1 preceding bars
    std::optional<Direction> label_next;

    bool operator==(const StockDayFeatures&) const = default;
};

struct DatedLabel {
    Date date;
    Direction label;
    bool operator==(const DatedLabel&) const = default;
};

namespace detail {

inline void require_sorted_unique(const std::vector<OhlcvBar>& bars) {
    for (std::size_t i = 1; i < bars.size(); ++i) {
        if (bars[i].date == bars[i - 1].date) {
            throw Error(ErrorKind::DuplicateDate, "duplicate bar date " + bars[i].date.iso());
        }
        if (bars[i].date < bars[i - 1].date) {
            throw Error(ErrorKind::BadParams, "bars are not sorted by date");
        }
    }
}

}  // namespace detail

/// Increase iff the next bar's close is strictly greater. The last bar is unlabeled.
inline std::vector<DatedLabel> make_labels(const std::vector<OhlcvBar>& bars) {
    if (bars.empty()) throw Error(ErrorKind::EmptySeries, "no bars to label");
    detail::require_sorted_unique(bars);
    std::vector<DatedLabel> labels;
    labels.reserve(bars.size() - 1);
    for (std::size_t i = 0; i + 1 < bars.size(); ++i) {
        labels.push_back({bars[i].date,
                          bars[i + 1].close > bars[i].close ? Direction::Increase : Direction::Decrease});
    }
    return labels;
}

inline std::vector<StockDayFeatures> stock_features(const std::string& company, const std::vector<OhlcvBar>& bars,
                                                    std::size_t window) {
    if (bars.empty()) throw Error(ErrorKind::EmptySeries, "no bars for " + company);
    if (window == 0) throw Error(ErrorKind::BadParams, "rolling window must be positive");
    detail::require_sorted_unique(bars);
    const auto labels = make_labels(bars);

    std::vector<StockDayFeatures> out;
    out.reserve(bars.size());
    for (std::size_t i = 0; i < bars.size(); ++i) {
        const auto& b = bars[i];
        StockDayFeatures f;
        f.company = company;
        f.date = b.date;
        f.open = b.open;
        f.close = b.close;
        f.volume = static_cast<double>(b.volume);
        f.daily_change = b.close - b.open;
        if (i + 1 >= window) {
            double s = 0.0;
            for (std::size_t j = i + 1 - window; j <= i; ++j) s += bars[j].close;
            f.rolling_mean_close = s / static_cast<double>(window);
        }
        if (i < labels.size()) f.label_next = labels[i].label;
        out.push_back(std::move(f));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Calendar features
// ---------------------------------------------------------------------------

struct TimeFeatures {
    int day_of_week = 0;          // 0 = Monday
    long days_to_earnings = 0;    // 0 when no report is upcoming
    bool earnings_missing = false;

    bool operator==(const TimeFeatures&) const = default;
};

/// `earnings_dates` must be sorted. A report on `date` itself counts (distance 0).
inline TimeFeatures time_features(Date date, const std::vector<Date>& earnings_dates) {
    TimeFeatures t;
    t.day_of_week = date.day_of_week();
    auto it = std::lower_bound(earnings_dates.begin(), earnings_dates.end(), date);
    if (it == earnings_dates.end()) {
        t.earnings_missing = true;
        t.days_to_earnings = 0;
    } else {
        t.days_to_earnings = date.days_until(*it);
    }
    return t;
}

using EarningsCalendar = std::map<std::string, std::vector<Date>>;

/// CSV `company,earnings_date`; dates sorted and de-duplicated per company.
inline EarningsCalendar parse_earnings_calendar(std::string_view text, std::string_view source) {
    CsvTable csv = parse_csv(text, source);
    if (csv.header.empty()) throw Error(ErrorKind::MissingColumn, std::string(source) + ": empty file");
    ColumnIndex cols(csv.header, {"company", "earnings_date"}, source);
    EarningsCalendar cal;
    for (const auto& rec : csv.records) {
        auto where = std::string(source) + ":" + std::to_string(rec.line);
        if (rec.fields.size() != csv.header.size()) throw Error(ErrorKind::BadRow, where + ": field count");
        std::string company(trim(rec.fields[cols[0]]));
        auto d = Date::parse(trim(rec.fields[cols[1]]));
        if (!valid_ticker(company) || !d) throw Error(ErrorKind::BadRow, where + ": bad earnings row");
        cal[company].push_back(*d);
    }
    for (auto& [_, dates] : cal) {
        std::sort(dates.begin(), dates.end());
        dates.erase(std::unique(dates.begin(), dates.end()), dates.end());
    }
    return cal;
}

inline EarningsCalendar load_earnings_calendar(const std::string& path) {
    return parse_earnings_calendar(read_text_file(path), path);
}

// ---------------------------------------------------------------------------
// Join
// ---------------------------------------------------------------------------

inline const std::vector<std::string>& default_source_prefixes() {
    static const std::vector<std::string> p{"reddit_", "news_", "headline_"};
    return p;
}

inline std::vector<std::string> sentiment_column_names(const std::string& prefix,
                                                       const std::vector<std::string>& keywords) {
    std::vector<std::string> names{prefix + "n_docs",   prefix + "mean_polarity", prefix + "weighted_polarity",
                                   prefix + "pos_frac", prefix + "neg_frac",      prefix + "neu_frac",
                                   prefix + "mean_doc_length"};
    for (const auto& k : keywords) names.push_back(prefix + "kw_" + k);
    names.push_back(prefix + "has_data");
    return names;
}

inline const std::vector<std::string>& stock_time_column_names() {
    static const std::vector<std::string> names{
        "open",        "close",          "volume",          "daily_change", "rolling_mean_close",
        "rolling_has_data", "day_of_week", "days_to_earnings", "earnings_missing"};
    return names;
}

/// Adds (or updates) the columns of one sentiment source. New columns start at
/// 0 with `has_data` 0; rows whose (company, date) appears in `aggregates`
/// receive its values and `has_data` 1. Aggregates on dates without a row are dropped.
inline void merge_sentiment_source(FeatureTable& table, const std::string& prefix,
                                   const std::vector<SentimentDayAggregate>& aggregates,
                                   const std::vector<std::string>& keywords) {
    const auto names = sentiment_column_names(prefix, keywords);
    std::vector<std::size_t> cols;
    cols.reserve(names.size());
    for (const auto& name : names) {
        if (auto idx = table.feature_index(name)) {
            cols.push_back(*idx);
        } else {
            table.feature_names.push_back(name);
            for (auto& row : table.rows) row.values.push_back(0.0);
            cols.push_back(table.feature_names.size() - 1);
        }
    }
    if (aggregates.empty()) return;

    std::map<std::pair<std::string, Date>, const SentimentDayAggregate*> by_key;
    for (const auto& a : aggregates) by_key[{a.company, a.date}] = &a;

    for (auto& row : table.rows) {
        auto it = by_key.find({row.company, row.date});
        if (it == by_key.end()) continue;
        const SentimentDayAggregate& a = *it->second;
        std::vector<double> v{static_cast<double>(a.n_docs), a.mean_polarity, a.weighted_polarity,
                              a.pos_frac, a.neg_frac, a.neu_frac, a.mean_doc_length};
        for (const auto& k : keywords) {
            auto hit = a.keyword_hits.find(k);
            v.push_back(hit == a.keyword_hits.end() ? 0.0 : static_cast<double>(hit->second));
        }
        v.push_back(1.0);
        for (std::size_t i = 0; i < cols.size(); ++i) row.values[cols[i]] = v[i];
    }
}

struct SourceAggregates {
    std::string prefix;
    std::vector<SentimentDayAggregate> aggregates;
};

/// One row per (company, labeled trading date), sorted by date then company.
/// Row ids are positions in the result. Throws NoOverlap when nothing is labeled.
inline FeatureTable align_and_merge(const std::vector<SourceAggregates>& sources,
                                    const std::map<std::string, std::vector<StockDayFeatures>>& stock,
                                    const EarningsCalendar& earnings, const std::vector<std::string>& keywords) {
    FeatureTable table;
    table.feature_names = stock_time_column_names();
    static const std::vector<Date> no_dates;
    for (const auto& [company, days] : stock) {
        auto cal = earnings.find(company);
        const auto& dates = cal == earnings.end() ? no_dates : cal->second;
        for (const auto& d : days) {
            if (!d.label_next) continue;
            const TimeFeatures t = time_features(d.date, dates);
            FeatureRow row;
            row.company = company;
            row.date = d.date;
            row.label = *d.label_next;
            row.values = {d.open,
                          d.close,
                          d.volume,
                          d.daily_change,
                          d.rolling_mean_close.value_or(0.0),
                          d.rolling_mean_close ? 1.0 : 0.0,
                          static_cast<double>(t.day_of_week),
                          static_cast<double>(t.days_to_earnings),
                          t.earnings_missing ? 1.0 : 0.0};
            table.rows.push_back(std::move(row));
        }
    }
    if (table.rows.empty()) {
        throw Error(ErrorKind::NoOverlap, "no (company, date) has both stock data and a label");
    }
    sort_by_date_company(table.rows);
    for (std::size_t i = 0; i < table.rows.size(); ++i) table.rows[i].row_id = i;

    // the standard sources always get columns, in a fixed order
    std::vector<std::string> prefixes = default_source_prefixes();
    for (const auto& s : sources) {
        if (std::find(prefixes.begin(), prefixes.end(), s.prefix) == prefixes.end()) prefixes.push_back(s.prefix);
    }
    for (const auto& prefix : prefixes) {
        std::vector<SentimentDayAggregate> merged;
        for (const auto& s : sources) {
            if (s.prefix == prefix) merged.insert(merged.end(), s.aggregates.begin(), s.aggregates.end());
        }
        merge_sentiment_source(table, prefix, merged, keywords);
    }
    return table;
}

}  // namespace earnsignal
