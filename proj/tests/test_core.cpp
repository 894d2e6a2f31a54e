#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <set>

#include "earnsignal/core/csv.hpp"
#include "earnsignal/core/date.hpp"
#include "earnsignal/core/error.hpp"
#include "earnsignal/core/random.hpp"
#include "earnsignal/core/table.hpp"
#include "test_support.hpp"

using namespace earnsignal;

TEST(Date, ParsesStrictIso) {
    auto d = Date::parse("2024-05-01");
    ASSERT_TRUE(d);
    EXPECT_EQ(d->iso(), "2024-05-01");
    EXPECT_FALSE(Date::parse("2024-02-30"));
    EXPECT_FALSE(Date::parse("2024-13-01"));
    EXPECT_FALSE(Date::parse("2024-5-01"));
    EXPECT_FALSE(Date::parse("20240501"));
    EXPECT_FALSE(Date::parse(""));
    EXPECT_FALSE(Date::parse("2024-05-01x"));
    EXPECT_TRUE(Date::parse("2024-02-29"));
    EXPECT_FALSE(Date::parse("2023-02-29"));
}

TEST(Date, CalendarArithmetic) {
    EXPECT_EQ(Date(2024, 11, 4).day_of_week(), 0);  // Monday
    EXPECT_EQ(Date(2024, 11, 10).day_of_week(), 6);
    EXPECT_EQ(Date(2024, 11, 1).days_until(Date(2024, 11, 5)), 4);
    EXPECT_EQ(Date(2024, 3, 1).plus_days(-1).iso(), "2024-02-29");
    EXPECT_LT(Date(2024, 1, 1), Date(2024, 1, 2));
}

TEST(Csv, QuotingAndEscapes) {
    auto t = parse_csv("a,b,c\n\"x, y\",\"say \"\"hi\"\"\",\"multi\nline\"\n1,,3\n");
    ASSERT_EQ(t.header, (std::vector<std::string>{"a", "b", "c"}));
    ASSERT_EQ(t.records.size(), 2u);
    EXPECT_EQ(t.records[0].fields[0], "x, y");
    EXPECT_EQ(t.records[0].fields[1], "say \"hi\"");
    EXPECT_EQ(t.records[0].fields[2], "multi\nline");
    EXPECT_EQ(t.records[0].line, 2u);
    EXPECT_EQ(t.records[1].line, 4u);
    EXPECT_EQ(t.records[1].fields[1], "");
}

TEST(Csv, CrlfBomAndBlankLines) {
    auto t = parse_csv("\xEF\xBB\xBFh1,h2\r\n1,2\r\n\r\n3,4\r\n");
    ASSERT_EQ(t.header[0], "h1");
    ASSERT_EQ(t.records.size(), 2u);
    EXPECT_EQ(t.records[1].fields[1], "4");
    EXPECT_EQ(t.records[1].line, 4u);
}

TEST(Csv, UnterminatedQuoteIsBadRow) {
    try {
        parse_csv("a\n\"open", "f.csv");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::BadRow);
        EXPECT_NE(std::string(e.what()).find("f.csv:2"), std::string::npos);
    }
}

TEST(Csv, EscapeRoundTrip) {
    const std::vector<std::string> fields{"plain", "with,comma", "q\"uote", " lead", "line\nbreak", ""};
    std::ostringstream out;
    write_csv_row(out, {"h1", "h2", "h3", "h4", "h5", "h6"});
    write_csv_row(out, fields);
    auto t = parse_csv(out.str());
    ASSERT_EQ(t.records.size(), 1u);
    EXPECT_EQ(t.records[0].fields, fields);
}

TEST(Csv, NumberParsing) {
    EXPECT_EQ(parse_int("42"), 42);
    EXPECT_EQ(parse_int(" -3 "), -3);
    EXPECT_FALSE(parse_int("4.2"));
    EXPECT_FALSE(parse_int(""));
    EXPECT_EQ(parse_double("1.5"), 1.5);
    EXPECT_FALSE(parse_double("nan"));
    EXPECT_FALSE(parse_double("inf"));
    EXPECT_FALSE(parse_double("1.5x"));
}

TEST(Csv, FormatDoubleRoundTrips) {
    Rng rng(7);
    for (int i = 0; i < 2000; ++i) {
        const double v = (uniform_unit(rng) - 0.5) * std::pow(10.0, static_cast<int>(uniform_index(rng, 20)) - 10);
        EXPECT_EQ(*parse_double(format_double(v)), v);
    }
    EXPECT_EQ(format_double(-0.0), "0");
    EXPECT_EQ(format_double(3.0), "3");
}

TEST(Random, UniformIndexRangeAndDeterminism) {
    Rng a(42);
    Rng b(42);
    std::set<std::size_t> seen;
    for (int i = 0; i < 1000; ++i) {
        const auto x = uniform_index(a, 7);
        EXPECT_EQ(x, uniform_index(b, 7));
        EXPECT_LT(x, 7u);
        seen.insert(x);
    }
    EXPECT_EQ(seen.size(), 7u);
    Rng c(1);
    for (int i = 0; i < 1000; ++i) {
        const double u = uniform_unit(c);
        EXPECT_GE(u, 0.0);
        EXPECT_LT(u, 1.0);
    }
}

TEST(Random, EngineMatchesStandardSequence) {
    // 10000th output of a default-seeded mt19937_64, fixed by the C++ standard
    Rng rng;
    rng.discard(9999);
    EXPECT_EQ(rng(), 9981545732273789042ULL);
}

TEST(Errors, ExitCodes) {
    EXPECT_EQ(exit_code_for(ErrorKind::Io), 2);
    EXPECT_EQ(exit_code_for(ErrorKind::BadConfig), 2);
    EXPECT_EQ(exit_code_for(ErrorKind::NoOverlap), 3);
    EXPECT_EQ(exit_code_for(ErrorKind::FeatureMismatch), 3);
    EXPECT_EQ(exit_code_for(ErrorKind::BadMagic), 4);
    EXPECT_EQ(exit_code_for(ErrorKind::VersionMismatch), 4);
    EXPECT_EQ(exit_code_for(ErrorKind::CorruptArtifact), 4);
}

TEST(FeatureTableCsv, RoundTripIsExact) {
    using testing_support::make_table;
    auto t = make_table({"a", "b"}, {{0.1, -2.5e-17}, {1.0 / 3.0, 12345.678}},
                        {Direction::Increase, Direction::Decrease});
    t.rows[1].company = "BBB";
    const auto text = feature_table_to_csv(t);
    EXPECT_EQ(text.substr(0, text.find('\n')), "company,date,a,b,label");
    const auto back = feature_table_from_csv(text, "mem");
    EXPECT_EQ(back, t);
    EXPECT_EQ(feature_table_to_csv(back), text);
}

TEST(FeatureTableCsv, RejectsMalformedRows) {
    EXPECT_THROW(feature_table_from_csv("company,date,a,label\nA,2024-01-01,x,Increase\n", "m"), Error);
    EXPECT_THROW(feature_table_from_csv("company,date,a,label\nA,2024-01-01,1,Up\n", "m"), Error);
    EXPECT_THROW(feature_table_from_csv("company,date,a\nA,2024-01-01,1\n", "m"), Error);
}

TEST(FeatureTable, ValidateRejectsNonFinite) {
    auto t = testing_support::make_table({"a"}, {{std::numeric_limits<double>::quiet_NaN()}}, {Direction::Increase});
    EXPECT_THROW(validate_table(t), Error);
    t.rows[0].values = {1.0, 2.0};
    try {
        validate_table(t);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::DimensionMismatch);
    }
}
