#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "earnsignal/core/random.hpp"
#include "earnsignal/core/table.hpp"

#ifndef EARNSIGNAL_DATA_DIR
#define EARNSIGNAL_DATA_DIR "data"
#endif

namespace testing_support {

inline std::string data_path(const std::string& rel) {
    return (std::filesystem::path(EARNSIGNAL_DATA_DIR) / rel).string();
}

/// Fresh empty scratch directory under the system temp dir.
inline std::string scratch_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("earnsignal_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir.string();
}

inline earnsignal::FeatureRow row(const std::string& company, earnsignal::Date date, std::vector<double> values,
                                  earnsignal::Direction label, std::uint64_t id = 0) {
    earnsignal::FeatureRow r;
    r.company = company;
    r.date = date;
    r.values = std::move(values);
    r.label = label;
    r.row_id = id;
    return r;
}

/// Table with consecutive daily dates from 2024-01-01 and row_id = position.
inline earnsignal::FeatureTable make_table(const std::vector<std::string>& names,
                                           const std::vector<std::vector<double>>& values,
                                           const std::vector<earnsignal::Direction>& labels) {
    earnsignal::FeatureTable t;
    t.feature_names = names;
    const earnsignal::Date start(2024, 1, 1);
    for (std::size_t i = 0; i < values.size(); ++i) {
        t.rows.push_back(row("AAA", start.plus_days(static_cast<long>(i)), values[i], labels[i], i));
    }
    return t;
}

/// Gaussian-ish noise from the portable generator (sum of 12 uniforms - 6).
inline double noise(earnsignal::Rng& rng) {
    double s = 0.0;
    for (int i = 0; i < 12; ++i) s += earnsignal::uniform_unit(rng);
    return s - 6.0;
}

}  // namespace testing_support
