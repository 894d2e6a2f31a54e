#include <gtest/gtest.h>

#include <cmath>

#include "earnsignal/core/random.hpp"
#include "earnsignal/features.hpp"
#include "test_support.hpp"

using namespace earnsignal;

namespace {

ScoredDocument scored(const std::string& company, Date date, double polarity, std::int64_t engagement,
                      const std::string& text = "", SentimentLabel label = SentimentLabel::Neutral) {
    ScoredDocument d;
    d.doc.company = company;
    d.doc.date = date;
    d.doc.engagement = engagement;
    d.doc.combined_text = text;
    d.score.polarity = polarity;
    d.score.label = label;
    return d;
}

std::vector<OhlcvBar> bars_from_closes(const std::vector<double>& closes, Date start = Date(2024, 1, 1)) {
    std::vector<OhlcvBar> out;
    for (std::size_t i = 0; i < closes.size(); ++i) {
        OhlcvBar b;
        b.date = start.plus_days(static_cast<long>(i));
        b.open = closes[i] - 1.0;
        b.close = closes[i];
        b.high = closes[i] + 1.0;
        b.low = closes[i] - 2.0;
        b.volume = 1000 + static_cast<std::int64_t>(i);
        out.push_back(b);
    }
    return out;
}

}  // namespace

TEST(Aggregate, SingleDocIdentity) {
    auto a = aggregate_daily_sentiment({scored("AAA", Date(2024, 1, 2), 0.5, 0)}, {});
    ASSERT_EQ(a.size(), 1u);
    EXPECT_DOUBLE_EQ(a[0].weighted_polarity, 0.5);
    EXPECT_DOUBLE_EQ(a[0].mean_polarity, 0.5);
    EXPECT_EQ(a[0].n_docs, 1u);
}

TEST(Aggregate, HeavyEngagementDominates) {
    const double w = weighted_polarity({{1.0, 0.0}, {-1.0, 1e12}});
    EXPECT_LT(w, -0.9);
    EXPECT_LT(weighted_polarity({{1.0, 0.0}, {-1.0, 1e300}}), w);
}

TEST(Aggregate, HandArithmetic) {
    // upvotes e-1 gives w = 2
    const double e1 = std::exp(1.0) - 1.0;
    EXPECT_NEAR(upvote_weight(e1), 2.0, 1e-15);
    EXPECT_NEAR(weighted_polarity({{1.0, e1}, {-1.0, 0.0}}), 1.0 / 3.0, 1e-12);
}

TEST(Aggregate, GroupsFractionsAndKeywords) {
    const Date d1(2024, 1, 2);
    const Date d2(2024, 1, 3);
    std::vector<ScoredDocument> docs{
        scored("BBB", d1, 0.2, 3, "Earnings beat, earnings!", SentimentLabel::Positive),
        scored("AAA", d2, -0.4, 0, "a miss", SentimentLabel::Negative),
        scored("AAA", d2, 0.0, 10, "nothing here at all", SentimentLabel::Neutral),
        scored("AAA", d1, 0.9, 1, "beat", SentimentLabel::Positive),
    };
    auto a = aggregate_daily_sentiment(docs, default_keywords());
    ASSERT_EQ(a.size(), 3u);
    EXPECT_EQ(a[0].company, "AAA");
    EXPECT_EQ(a[0].date, d1);
    EXPECT_EQ(a[1].company, "AAA");
    EXPECT_EQ(a[1].date, d2);
    EXPECT_EQ(a[2].company, "BBB");

    EXPECT_EQ(a[1].n_docs, 2u);
    EXPECT_DOUBLE_EQ(a[1].neg_frac, 0.5);
    EXPECT_DOUBLE_EQ(a[1].neu_frac, 0.5);
    EXPECT_DOUBLE_EQ(a[1].mean_doc_length, 3.0);
    EXPECT_EQ(a[1].keyword_hits.at("miss"), 1u);
    EXPECT_EQ(a[2].keyword_hits.at("earnings"), 2u);
    EXPECT_EQ(a[2].keyword_hits.at("beat"), 1u);
    EXPECT_EQ(a[2].keyword_hits.at("put"), 0u);
}

TEST(Aggregate, FractionsSumToOne) {
    Rng rng(8);
    std::vector<ScoredDocument> docs;
    for (int i = 0; i < 300; ++i) {
        docs.push_back(scored(uniform_index(rng, 2) ? "AAA" : "BBB", Date(2024, 1, 1).plus_days(uniform_index(rng, 9)),
                              uniform_unit(rng) * 2 - 1, static_cast<std::int64_t>(uniform_index(rng, 50)), "x",
                              kAllSentimentLabels[uniform_index(rng, 3)]));
    }
    for (const auto& a : aggregate_daily_sentiment(docs, {})) {
        EXPECT_NEAR(a.pos_frac + a.neg_frac + a.neu_frac, 1.0, 1e-9);
        EXPECT_GE(a.weighted_polarity, -1.0);
        EXPECT_LE(a.weighted_polarity, 1.0);
    }
}

TEST(StockFeatures, DailyChangeAndRolling) {
    auto f = stock_features("AAA", bars_from_closes({1, 2, 3, 4}), 3);
    ASSERT_EQ(f.size(), 4u);
    EXPECT_FALSE(f[0].rolling_mean_close);
    EXPECT_FALSE(f[1].rolling_mean_close);
    EXPECT_DOUBLE_EQ(*f[2].rolling_mean_close, 2.0);
    EXPECT_DOUBLE_EQ(*f[3].rolling_mean_close, 3.0);
    for (const auto& d : f) EXPECT_EQ(d.daily_change, d.close - d.open);

    OhlcvBar b;
    b.date = Date(2024, 1, 1);
    b.open = 100;
    b.close = 103;
    EXPECT_DOUBLE_EQ(stock_features("AAA", {b}, 5)[0].daily_change, 3.0);
}

TEST(StockFeatures, WindowOneIsClose) {
    for (const auto& d : stock_features("AAA", bars_from_closes({5, 7, 6, 9}), 1)) {
        EXPECT_EQ(*d.rolling_mean_close, d.close);
    }
}

TEST(StockFeatures, Errors) {
    try {
        stock_features("AAA", {}, 5);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::EmptySeries);
    }
    EXPECT_THROW(stock_features("AAA", bars_from_closes({1, 2}), 0), Error);
}

TEST(Labels, StrictNextClose) {
    auto l = make_labels(bars_from_closes({10, 11}));
    ASSERT_EQ(l.size(), 1u);
    EXPECT_EQ(l[0].label, Direction::Increase);
    EXPECT_EQ(make_labels(bars_from_closes({10, 10}))[0].label, Direction::Decrease);
    EXPECT_TRUE(make_labels(bars_from_closes({10})).empty());
}

TEST(Labels, CountsMatchLabeledRows) {
    Rng rng(2);
    std::vector<double> closes;
    for (int i = 0; i < 200; ++i) closes.push_back(static_cast<double>(uniform_index(rng, 5)));
    auto l = make_labels(bars_from_closes(closes));
    std::size_t inc = 0;
    std::size_t dec = 0;
    for (std::size_t i = 0; i < l.size(); ++i) {
        (l[i].label == Direction::Increase ? inc : dec)++;
        EXPECT_EQ(l[i].label == Direction::Increase, closes[i + 1] > closes[i]);
    }
    EXPECT_EQ(inc + dec, closes.size() - 1);
}

TEST(TimeFeatures, Examples) {
    EXPECT_EQ(time_features(Date(2024, 11, 4), {}).day_of_week, 0);
    auto t = time_features(Date(2024, 11, 1), {Date(2024, 10, 1), Date(2024, 11, 5)});
    EXPECT_EQ(t.days_to_earnings, 4);
    EXPECT_FALSE(t.earnings_missing);
    auto none = time_features(Date(2024, 12, 1), {Date(2024, 11, 5)});
    EXPECT_TRUE(none.earnings_missing);
    EXPECT_EQ(none.days_to_earnings, 0);
    EXPECT_EQ(time_features(Date(2024, 11, 5), {Date(2024, 11, 5)}).days_to_earnings, 0);
}

TEST(EarningsCalendar, SortsAndDedups) {
    auto cal = parse_earnings_calendar("company,earnings_date\nAAA,2024-05-01\nAAA,2024-02-01\nAAA,2024-05-01\n", "m");
    EXPECT_EQ(cal.at("AAA"), (std::vector<Date>{Date(2024, 2, 1), Date(2024, 5, 1)}));
    EXPECT_THROW(parse_earnings_calendar("company,earnings_date\naaa,2024-05-01\n", "m"), Error);
}

namespace {

std::map<std::string, std::vector<StockDayFeatures>> two_company_stock() {
    std::map<std::string, std::vector<StockDayFeatures>> s;
    s["AAA"] = stock_features("AAA", bars_from_closes({10, 11, 12}, Date(2024, 1, 1)), 2);
    s["BBB"] = stock_features("BBB", bars_from_closes({5, 4, 6}, Date(2024, 1, 10)), 2);
    return s;
}

}  // namespace

TEST(Merge, GapFillAndOrdering) {
    const Date d(2024, 1, 1);
    SourceAggregates reddit{"reddit_", aggregate_daily_sentiment({scored("AAA", d, 0.5, 0, "beat")}, default_keywords())};
    // a non-trading day for AAA; dropped by the join
    SourceAggregates news{"news_", aggregate_daily_sentiment({scored("AAA", Date(2023, 12, 31), 0.9, 0)}, {})};
    FeatureTable t = align_and_merge({reddit, news}, two_company_stock(), {}, default_keywords());

    ASSERT_EQ(t.size(), 4u);  // last bar of each company is unlabeled
    EXPECT_EQ(t.rows[0].company, "AAA");
    EXPECT_EQ(t.rows[3].company, "BBB");
    for (std::size_t i = 1; i < t.size(); ++i) {
        EXPECT_TRUE(t.rows[i - 1].date < t.rows[i].date ||
                    (t.rows[i - 1].date == t.rows[i].date && t.rows[i - 1].company < t.rows[i].company));
        EXPECT_EQ(t.rows[i].row_id, i);
    }
    const auto col = [&](const std::string& n) { return *t.feature_index(n); };
    EXPECT_EQ(t.rows[0].values[col("reddit_has_data")], 1.0);
    EXPECT_EQ(t.rows[0].values[col("reddit_mean_polarity")], 0.5);
    EXPECT_EQ(t.rows[0].values[col("reddit_kw_beat")], 1.0);
    EXPECT_EQ(t.rows[1].values[col("reddit_has_data")], 0.0);
    EXPECT_EQ(t.rows[1].values[col("reddit_mean_polarity")], 0.0);
    for (const auto& r : t.rows) {
        EXPECT_EQ(r.values[col("news_has_data")], 0.0);
        EXPECT_EQ(r.values[col("headline_n_docs")], 0.0);
    }
    EXPECT_EQ(t.rows[0].values[col("rolling_has_data")], 0.0);
    EXPECT_EQ(t.rows[1].values[col("rolling_has_data")], 1.0);
    EXPECT_EQ(t.rows[1].values[col("rolling_mean_close")], 10.5);
    EXPECT_EQ(t.rows[0].values[col("earnings_missing")], 1.0);
    EXPECT_EQ(t.rows[0].label, Direction::Increase);
    EXPECT_EQ(t.rows[2].label, Direction::Decrease);  // BBB 5 -> 4
    validate_table(t);
}

TEST(Merge, ColumnLayout) {
    FeatureTable t = align_and_merge({}, two_company_stock(), {}, {"beat"});
    std::vector<std::string> expected = stock_time_column_names();
    for (const auto& p : default_source_prefixes()) {
        auto s = sentiment_column_names(p, {"beat"});
        expected.insert(expected.end(), s.begin(), s.end());
    }
    EXPECT_EQ(t.feature_names, expected);
    EXPECT_EQ(t.width(), 9u + 3u * 9u);
}

TEST(Merge, IdempotentWithEmptySources) {
    SourceAggregates reddit{"reddit_", aggregate_daily_sentiment({scored("BBB", Date(2024, 1, 11), -0.3, 4)}, {})};
    FeatureTable t = align_and_merge({reddit}, two_company_stock(), {}, {});
    FeatureTable again = t;
    for (const auto& p : default_source_prefixes()) merge_sentiment_source(again, p, {}, {});
    EXPECT_EQ(again, t);
}

TEST(Merge, NoOverlap) {
    std::map<std::string, std::vector<StockDayFeatures>> s;
    s["AAA"] = stock_features("AAA", bars_from_closes({10}), 5);
    try {
        align_and_merge({}, s, {}, {});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::NoOverlap);
    }
}

TEST(Merge, RandomInputsNeverProduceNonFinite) {
    Rng rng(31);
    for (int trial = 0; trial < 20; ++trial) {
        std::map<std::string, std::vector<StockDayFeatures>> stock;
        std::vector<ScoredDocument> docs;
        for (const std::string c : {"AAA", "BBB", "CCC"}) {
            std::vector<double> closes;
            for (int i = 0; i < 12; ++i) closes.push_back(50 + uniform_unit(rng) * 10);
            stock[c] = stock_features(c, bars_from_closes(closes), 5);
            for (int i = 0; i < 8; ++i) {
                docs.push_back(scored(c, Date(2024, 1, 1).plus_days(uniform_index(rng, 15)), uniform_unit(rng) * 2 - 1,
                                      static_cast<std::int64_t>(uniform_index(rng, 100)), "earnings call"));
            }
        }
        FeatureTable t = align_and_merge({{"reddit_", aggregate_daily_sentiment(docs, default_keywords())}}, stock, {},
                                         default_keywords());
        validate_table(t);
        const auto has = *t.feature_index("reddit_has_data");
        const auto n = *t.feature_index("reddit_n_docs");
        for (const auto& r : t.rows) {
            EXPECT_EQ(r.values[has] == 0.0, r.values[n] == 0.0);
        }
    }
}
