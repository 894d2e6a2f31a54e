#pragma once

// Generated tables with a known answer, for checking that the pipeline can
// recover a planted relationship.

#include <cstdint>
#include <string>
#include <vector>

#include "earnsignal/core/date.hpp"
#include "earnsignal/core/random.hpp"
#include "earnsignal/core/table.hpp"

namespace earnsignal {

struct PlantedSignalSpec {
    std::size_t rows = 500;
    std::size_t noise_features = 10;
    double fidelity = 0.9;  // P(label == sign of the signal)
    std::uint64_t seed = 42;
    std::string signal_name = "reddit_weighted_polarity";
};

/// One company, one row per calendar day from 2023-01-02. Column 0 is the
/// signal, uniform in [-1, 1); its sign gives the label, flipped with
/// probability 1 - fidelity. The rest are centred noise columns.
inline FeatureTable planted_signal_table(const PlantedSignalSpec& spec) {
    Rng rng(spec.seed);
    FeatureTable t;
    t.feature_names.push_back(spec.signal_name);
    for (std::size_t j = 0; j < spec.noise_features; ++j) t.feature_names.push_back("noise_" + std::to_string(j));
    const Date start(2023, 1, 2);
    for (std::size_t i = 0; i < spec.rows; ++i) {
        FeatureRow r;
        r.company = "SYN";
        r.date = start.plus_days(static_cast<long>(i));
        r.row_id = i;
        const double signal = 2.0 * uniform_unit(rng) - 1.0;
        r.values.push_back(signal);
        for (std::size_t j = 0; j < spec.noise_features; ++j) r.values.push_back(2.0 * uniform_unit(rng) - 1.0);
        const bool faithful = uniform_unit(rng) < spec.fidelity;
        const bool up = signal > 0.0;
        r.label = (up == faithful) ? Direction::Increase : Direction::Decrease;
        t.rows.push_back(std::move(r));
    }
    return t;
}

}  // namespace earnsignal
