#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "earnsignal/balance.hpp"
#include "earnsignal/core/random.hpp"
#include "test_support.hpp"

using namespace earnsignal;
using testing_support::row;

namespace {

std::vector<FeatureRow> imbalanced(std::uint64_t seed, std::size_t major, std::size_t minor, std::size_t d) {
    Rng rng(seed);
    const std::size_t total = major + minor;
    std::vector<FeatureRow> rows;
    for (std::size_t i = 0; i < total; ++i) {
        std::vector<double> v(d);
        for (auto& x : v) x = testing_support::noise(rng);
        // spreads exactly `minor` Decrease rows through the sequence
        const bool is_minor = (i * minor) / total != ((i + 1) * minor) / total;
        rows.push_back(row("AAA", Date(2024, 1, 1).plus_days(static_cast<long>(i)), v,
                           is_minor ? Direction::Decrease : Direction::Increase, i));
    }
    return rows;
}

std::size_t count(const std::vector<FeatureRow>& rows, Direction d) {
    return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [&](const auto& r) { return r.label == d; }));
}

}  // namespace

TEST(Smote, TwoPointInterpolation) {
    std::vector<FeatureRow> rows{
        row("AAA", Date(2024, 1, 1), {0, 0}, Direction::Decrease, 0),
        row("AAA", Date(2024, 1, 2), {1, 1}, Direction::Decrease, 1),
        row("AAA", Date(2024, 1, 3), {5, 5}, Direction::Increase, 2),
        row("AAA", Date(2024, 1, 4), {6, 5}, Direction::Increase, 3),
        row("AAA", Date(2024, 1, 5), {5, 6}, Direction::Increase, 4),
    };
    auto r = smote(rows, {1, 1.0, 9});
    ASSERT_EQ(r.synthetic_count, 1u);
    const auto& s = r.rows.back();
    EXPECT_EQ(s.origin, RowOrigin::Synthetic);
    EXPECT_EQ(s.values[0], s.values[1]);
    EXPECT_GE(s.values[0], 0.0);
    EXPECT_LT(s.values[0], 1.0);
}

TEST(Smote, CountFormula) {
    auto rows = imbalanced(1, 10, 4, 3);
    ASSERT_EQ(count(rows, Direction::Decrease), 4u);
    auto r = smote(rows, {5, 1.0, 1});
    EXPECT_EQ(r.synthetic_count, 6u);
    EXPECT_EQ(count(r.rows, Direction::Decrease), 10u);
    EXPECT_EQ(count(r.rows, Direction::Increase), 10u);
    EXPECT_EQ(smote_synthetic_count(10, 4, 0.5), 1u);
    EXPECT_EQ(smote_synthetic_count(10, 4, 0.35), 0u);
    EXPECT_EQ(smote_synthetic_count(7, 2, 0.5), 2u);  // ceil(3.5) - 2
}

TEST(Smote, Determinism) {
    auto rows = imbalanced(2, 30, 8, 4);
    auto a = smote(rows, {3, 1.0, 77});
    auto b = smote(rows, {3, 1.0, 77});
    auto c = smote(rows, {3, 1.0, 78});
    EXPECT_EQ(a.rows, b.rows);
    EXPECT_NE(a.rows, c.rows);
}

TEST(Smote, DegenerateKClampsWithWarning) {
    auto rows = imbalanced(3, 10, 3, 2);
    auto r = smote(rows, {5, 1.0, 1});
    EXPECT_EQ(r.effective_k, 2u);
    EXPECT_TRUE(r.warning);
    EXPECT_EQ(r.synthetic_count, 7u);
}

TEST(Smote, TooFewMinority) {
    auto rows = imbalanced(4, 10, 1, 2);
    try {
        smote(rows, {5, 1.0, 1});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::TooFewMinority);
    }
}

TEST(Smote, BadParams) {
    auto rows = imbalanced(4, 10, 4, 2);
    EXPECT_THROW(smote(rows, {0, 1.0, 1}), Error);
    EXPECT_THROW(smote(rows, {5, 0.0, 1}), Error);
    EXPECT_THROW(smote(rows, {5, 1.1, 1}), Error);
}

TEST(Smote, BalancedInputUnchanged) {
    auto rows = imbalanced(5, 6, 6, 2);
    auto r = smote(rows, {5, 1.0, 1});
    EXPECT_EQ(r.synthetic_count, 0u);
    EXPECT_EQ(r.rows, rows);
}

TEST(Smote, GeometricProperties) {
    for (std::uint64_t seed = 1; seed <= 25; ++seed) {
        Rng rng(seed);
        const std::size_t major = 10 + uniform_index(rng, 40);
        const std::size_t minor = 2 + uniform_index(rng, 8);
        const std::size_t d = 1 + uniform_index(rng, 5);
        auto rows = imbalanced(seed, major, minor, d);
        const double ratio = 0.3 + 0.7 * uniform_unit(rng);
        auto r = smote(rows, {1 + uniform_index(rng, 6), ratio, seed});

        const std::size_t maj = count(rows, Direction::Increase);
        const std::size_t mnr = count(rows, Direction::Decrease);
        EXPECT_EQ(r.synthetic_count, smote_synthetic_count(maj, mnr, ratio));
        EXPECT_EQ(count(r.rows, Direction::Decrease), std::max<std::size_t>(mnr, static_cast<std::size_t>(std::ceil(ratio * maj - 1e-9))));
        ASSERT_EQ(r.rows.size(), rows.size() + r.synthetic_count);
        for (std::size_t i = 0; i < rows.size(); ++i) EXPECT_EQ(r.rows[i], rows[i]);  // originals verbatim, first

        for (std::size_t i = rows.size(); i < r.rows.size(); ++i) {
            const auto& s = r.rows[i];
            EXPECT_EQ(s.label, Direction::Decrease);
            const auto& pa = rows[s.parent_a].values;
            const auto& pb = rows[s.parent_b].values;
            EXPECT_EQ(rows[s.parent_a].label, Direction::Decrease);
            EXPECT_EQ(rows[s.parent_b].label, Direction::Decrease);
            EXPECT_NE(s.parent_a, s.parent_b);
            // collinear: the same lambda explains every coordinate
            std::size_t ref = 0;
            for (std::size_t j = 0; j < d; ++j) {
                if (std::abs(pb[j] - pa[j]) > std::abs(pb[ref] - pa[ref])) ref = j;
            }
            const double lambda = (s.values[ref] - pa[ref]) / (pb[ref] - pa[ref]);
            EXPECT_GE(lambda, -1e-12);
            EXPECT_LT(lambda, 1.0 + 1e-12);
            for (std::size_t j = 0; j < d; ++j) {
                EXPECT_NEAR(s.values[j], pa[j] + lambda * (pb[j] - pa[j]), 1e-9);
                EXPECT_GE(s.values[j], std::min(pa[j], pb[j]) - 1e-12);
                EXPECT_LE(s.values[j], std::max(pa[j], pb[j]) + 1e-12);
            }
        }
    }
}

TEST(Smote, NeighboursAreNearest) {
    // with k=1 the far minority point is nobody's neighbour
    std::vector<FeatureRow> rows;
    for (int i = 0; i < 4; ++i) rows.push_back(row("AAA", Date(2024, 1, 1), {0.1 * i}, Direction::Decrease, rows.size()));
    rows.push_back(row("AAA", Date(2024, 1, 1), {100.0}, Direction::Decrease, rows.size()));
    for (int i = 0; i < 40; ++i) rows.push_back(row("AAA", Date(2024, 1, 1), {1.0 * i}, Direction::Increase, rows.size()));
    auto r = smote(rows, {1, 1.0, 5});
    for (std::size_t i = rows.size(); i < r.rows.size(); ++i) {
        EXPECT_NE(r.rows[i].parent_b, 4u) << i;
    }
}
