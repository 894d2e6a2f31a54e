#pragma once

// Leakage-safe experiment driver:
//   temporal split -> scaler fit on train -> optional PCA fit on train ->
//   SMOTE on train -> fit each model -> metrics on the untouched test rows.
// Every row keeps its provenance (row_id, origin) so tests can assert that no
// test row reached the scaler, SMOTE, or a model.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "earnsignal/balance.hpp"
#include "earnsignal/core/error.hpp"
#include "earnsignal/core/table.hpp"
#include "earnsignal/eval.hpp"
#include "earnsignal/models/forest.hpp"
#include "earnsignal/models/gbdt.hpp"
#include "earnsignal/models/knn.hpp"
#include "earnsignal/pca.hpp"
#include "earnsignal/scaling.hpp"

namespace earnsignal {

inline constexpr int kReportSchemaVersion = 1;

enum class ModelKind { Gbdt, RandomForest, Knn };

inline std::string_view to_string(ModelKind k) {
    switch (k) {
    case ModelKind::Gbdt: return "gbdt";
    case ModelKind::RandomForest: return "random_forest";
    case ModelKind::Knn: return "knn";
    }
    return "?";
}

inline std::optional<ModelKind> parse_model_kind(std::string_view s) {
    if (s == "gbdt") return ModelKind::Gbdt;
    if (s == "random_forest") return ModelKind::RandomForest;
    if (s == "knn") return ModelKind::Knn;
    return std::nullopt;
}

struct ModelSpec {
    std::string name;
    ModelKind kind = ModelKind::Gbdt;
    GbdtParams gbdt;
    ForestParams forest;
    std::size_t knn_k = 5;
    DistanceKind distance = DistanceKind::Lorentzian;
};

inline std::vector<ModelSpec> default_model_specs() {
    std::vector<ModelSpec> specs;
    specs.push_back({"gbdt", ModelKind::Gbdt, {}, {}, 5, DistanceKind::Lorentzian});
    specs.push_back({"random_forest", ModelKind::RandomForest, {}, {}, 5, DistanceKind::Lorentzian});
    for (auto kind : {DistanceKind::Euclidean, DistanceKind::Cosine, DistanceKind::Lorentzian}) {
        specs.push_back({"knn_" + std::string(to_string(kind)), ModelKind::Knn, {}, {}, 5, kind});
    }
    return specs;
}

struct ExperimentConfig {
    double train_fraction = 0.7;
    std::vector<std::string> scale_features;  // empty: all features
    bool use_smote = true;
    SmoteConfig smote;
    std::optional<PcaTarget> pca;  // off by default
    std::vector<ModelSpec> models = default_model_specs();
    std::uint64_t seed = 42;
    std::size_t threads = 1;       // affects speed only
    nlohmann::json config_echo = nlohmann::json::object();
    std::string config_hash;
};

/// Row ids seen by each stage. Synthetic rows contribute their parents.
struct Provenance {
    std::set<std::uint64_t> scaler_fit;
    std::set<std::uint64_t> smote_input;
    std::set<std::uint64_t> training;
    std::set<std::uint64_t> test;

    /// True when any test row id appears in a fitting stage.
    bool leaks() const {
        for (auto id : test) {
            if (scaler_fit.contains(id) || smote_input.contains(id) || training.contains(id)) return true;
        }
        return false;
    }
};

struct ClassCounts {
    std::size_t increase = 0;
    std::size_t decrease = 0;
};

inline ClassCounts count_classes(const std::vector<FeatureRow>& rows) {
    ClassCounts c;
    for (const auto& r : rows) (r.label == Direction::Increase ? c.increase : c.decrease)++;
    return c;
}

/// Train/test tables after scaling (and PCA, SMOTE) plus the fitted transforms.
struct PreparedData {
    FeatureTable raw_train;
    FeatureTable raw_test;
    ScalerParams scaler;
    std::optional<PcaModel> pca;
    FeatureTable train;  // transformed, balanced
    FeatureTable test;   // transformed with train-fitted params only
    std::size_t synthetic_count = 0;
    std::optional<std::string> smote_warning;
    Provenance provenance;
};

inline PreparedData prepare_data(const FeatureTable& table, const ExperimentConfig& cfg) {
    PreparedData out;
    TemporalSplit split = temporal_split(table, cfg.train_fraction);
    out.raw_train = split.train;
    out.raw_test = split.test;

    out.scaler = fit_scaler(split.train, cfg.scale_features);
    for (const auto& r : split.train.rows) out.provenance.scaler_fit.insert(r.row_id);
    FeatureTable train = apply_scaler(out.scaler, std::move(split.train));
    FeatureTable test = apply_scaler(out.scaler, std::move(split.test));

    if (cfg.pca) {
        out.pca = fit_pca(train, *cfg.pca);
        train = apply_pca(*out.pca, std::move(train));
        test = apply_pca(*out.pca, std::move(test));
    }

    if (cfg.use_smote) {
        for (const auto& r : train.rows) out.provenance.smote_input.insert(r.row_id);
        SmoteConfig sc = cfg.smote;
        sc.seed = cfg.seed;  // one run seed drives every random stage
        SmoteResult balanced = smote(train.rows, sc);
        out.synthetic_count = balanced.synthetic_count;
        out.smote_warning = balanced.warning;
        train.rows = std::move(balanced.rows);
    }
    for (const auto& r : train.rows) {
        if (r.origin == RowOrigin::Original) {
            out.provenance.training.insert(r.row_id);
        } else {
            out.provenance.training.insert(r.parent_a);
            out.provenance.training.insert(r.parent_b);
        }
    }
    for (const auto& r : test.rows) out.provenance.test.insert(r.row_id);
    out.train = std::move(train);
    out.test = std::move(test);
    return out;
}

/// A fitted model of any supported kind.
using TrainedModel = std::variant<GbdtModel, ForestModel, KnnModel>;

inline TrainedModel fit_model(const ModelSpec& spec, const FeatureTable& train, std::uint64_t seed,
                              std::size_t threads) {
    switch (spec.kind) {
    case ModelKind::Gbdt: {
        GbdtParams p = spec.gbdt;
        p.seed = seed;
        p.threads = threads;
        return train_gbdt(train, p);
    }
    case ModelKind::RandomForest: {
        ForestParams p = spec.forest;
        p.seed = seed;
        return train_random_forest(train, p);
    }
    case ModelKind::Knn: {
        if (train.empty()) throw Error(ErrorKind::EmptyTable, "empty training table");
        if (spec.knn_k == 0 || spec.knn_k > train.size()) throw Error(ErrorKind::BadK, "k out of range");
        return KnnModel{train, spec.knn_k, spec.distance};
    }
    }
    throw Error(ErrorKind::BadParams, "unknown model kind");
}

inline Prediction predict(const TrainedModel& model, std::span<const double> row) {
    return std::visit(
        [&](const auto& m) -> Prediction {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, GbdtModel>) return gbdt_predict(m, row);
            else if constexpr (std::is_same_v<M, ForestModel>) return rf_predict(m, row);
            else return knn_predict(m, row);
        },
        model);
}

inline std::vector<Prediction> predict_table(const TrainedModel& model, const FeatureTable& table) {
    std::vector<Prediction> out;
    out.reserve(table.size());
    for (const auto& r : table.rows) out.push_back(predict(model, r.values));
    return out;
}

inline std::vector<Direction> labels_of(const FeatureTable& table) {
    std::vector<Direction> out;
    out.reserve(table.size());
    for (const auto& r : table.rows) out.push_back(r.label);
    return out;
}

struct ModelResult {
    std::string name;
    ModelKind kind = ModelKind::Gbdt;
    Metrics metrics;
    std::vector<std::pair<std::string, double>> importance;  // gbdt only
};

/// Accuracies published for the original (unavailable) scraped corpora.
/// Context only; this pipeline cannot reproduce them.
inline const std::vector<std::pair<std::string, double>>& reference_accuracies() {
    static const std::vector<std::pair<std::string, double>> ref{
        {"naive_bayes", 0.54}, {"random_forest", 0.64}, {"gradient_boosting", 0.626}, {"lightgbm", 0.701}};
    return ref;
}

struct ExperimentReport {
    nlohmann::json config_echo;
    std::string config_hash;
    std::uint64_t seed = 42;
    std::size_t n_rows = 0;
    std::size_t n_features = 0;
    std::vector<std::string> feature_names;  // as seen by the models
    ClassCounts train_raw;
    ClassCounts train_balanced;
    ClassCounts test;
    std::size_t synthetic_count = 0;
    std::optional<std::string> smote_warning;
    std::string first_test_date;
    std::string last_train_date;
    std::vector<ModelResult> results;
    Provenance provenance;
};

inline ExperimentReport run_experiment(const FeatureTable& table, const ExperimentConfig& cfg) {
    if (cfg.models.empty()) throw Error(ErrorKind::BadParams, "no models configured");
    PreparedData data = prepare_data(table, cfg);

    ExperimentReport rep;
    rep.config_echo = cfg.config_echo;
    rep.config_hash = cfg.config_hash;
    rep.seed = cfg.seed;
    rep.n_rows = table.size();
    rep.n_features = data.train.width();
    rep.feature_names = data.train.feature_names;
    rep.train_raw = count_classes(data.raw_train.rows);
    rep.train_balanced = count_classes(data.train.rows);
    rep.test = count_classes(data.test.rows);
    rep.synthetic_count = data.synthetic_count;
    rep.smote_warning = data.smote_warning;
    rep.last_train_date = data.raw_train.rows.back().date.iso();
    rep.first_test_date = data.raw_test.rows.front().date.iso();
    rep.provenance = data.provenance;

    const auto truth = labels_of(data.test);
    for (const auto& spec : cfg.models) {
        TrainedModel model = fit_model(spec, data.train, cfg.seed, cfg.threads);
        ModelResult res;
        res.name = spec.name;
        res.kind = spec.kind;
        res.metrics = compute_metrics(predict_table(model, data.test), truth);
        if (const auto* g = std::get_if<GbdtModel>(&model)) res.importance = feature_importance(*g);
        rep.results.push_back(std::move(res));
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Report rendering
// ---------------------------------------------------------------------------

inline nlohmann::json metrics_to_json(const Metrics& m) {
    auto cls = [](const ClassMetrics& c) {
        return nlohmann::json{{"precision", c.precision}, {"recall", c.recall}, {"f1", c.f1}, {"support", c.support}};
    };
    return {{"accuracy", m.accuracy},
            {"precision_increase", m.increase.precision},
            {"recall_increase", m.increase.recall},
            {"f1_increase", m.increase.f1},
            {"macro_f1", m.macro_f1},
            {"mse", m.mse},
            {"per_class", {{"Increase", cls(m.increase)}, {"Decrease", cls(m.decrease)}}},
            {"confusion_matrix",
             {{"tp", m.confusion.tp}, {"fp", m.confusion.fp}, {"fn", m.confusion.fn}, {"tn", m.confusion.tn}}}};
}

/// Machine-readable report. Schema (version 1): schema_version, config_hash,
/// seed, config, data{rows, features, feature_names, last_train_date,
/// first_test_date, class_counts{train_raw, train_balanced, test},
/// smote{synthetic, warning}}, models[{name, kind, metrics, feature_importance}],
/// reference_accuracy{note, values}.
inline nlohmann::json report_to_json(const ExperimentReport& rep) {
    auto counts = [](const ClassCounts& c) { return nlohmann::json{{"Increase", c.increase}, {"Decrease", c.decrease}}; };
    nlohmann::json j;
    j["schema_version"] = kReportSchemaVersion;
    j["config_hash"] = rep.config_hash;
    j["seed"] = rep.seed;
    j["config"] = rep.config_echo;
    j["data"] = {{"rows", rep.n_rows},
                 {"features", rep.n_features},
                 {"feature_names", rep.feature_names},
                 {"last_train_date", rep.last_train_date},
                 {"first_test_date", rep.first_test_date},
                 {"class_counts",
                  {{"train_raw", counts(rep.train_raw)},
                   {"train_balanced", counts(rep.train_balanced)},
                   {"test", counts(rep.test)}}},
                 {"smote",
                  {{"synthetic", rep.synthetic_count},
                   {"warning", rep.smote_warning ? nlohmann::json(*rep.smote_warning) : nlohmann::json(nullptr)}}}};
    nlohmann::json models = nlohmann::json::array();
    for (const auto& r : rep.results) {
        nlohmann::json m{{"name", r.name}, {"kind", std::string(to_string(r.kind))}, {"metrics", metrics_to_json(r.metrics)}};
        nlohmann::json imp = nlohmann::json::array();
        for (const auto& [name, v] : r.importance) imp.push_back({{"feature", name}, {"importance", v}});
        m["feature_importance"] = imp;
        models.push_back(std::move(m));
    }
    j["models"] = models;
    nlohmann::json ref;
    for (const auto& [name, v] : reference_accuracies()) ref[name] = v;
    j["reference_accuracy"] = {{"note", "published accuracies on unavailable scraped corpora; not reproducible here"},
                               {"values", ref}};
    return j;
}

namespace detail {

inline std::string fixed(double v, int digits = 4) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

}  // namespace detail

inline std::string report_to_text(const ExperimentReport& rep) {
    using detail::fixed;
    std::ostringstream o;
    o << "Experiment report (schema " << kReportSchemaVersion << ")\n";
    o << "config hash: " << rep.config_hash << "\n";
    o << "seed: " << rep.seed << "\n";
    o << "rows: " << rep.n_rows << ", model features: " << rep.n_features << "\n";
    o << "train ends " << rep.last_train_date << ", test starts " << rep.first_test_date << "\n";
    o << "train class counts (raw): Increase " << rep.train_raw.increase << ", Decrease " << rep.train_raw.decrease
      << "\n";
    o << "train class counts (balanced): Increase " << rep.train_balanced.increase << ", Decrease "
      << rep.train_balanced.decrease << " (" << rep.synthetic_count << " synthetic)\n";
    if (rep.smote_warning) o << "smote warning: " << *rep.smote_warning << "\n";
    o << "test class counts: Increase " << rep.test.increase << ", Decrease " << rep.test.decrease << "\n\n";

    for (const auto& r : rep.results) {
        const auto& m = r.metrics;
        o << "== " << r.name << " (" << to_string(r.kind) << ")\n";
        o << "  accuracy   " << fixed(m.accuracy) << "\n";
        o << "  mse        " << fixed(m.mse) << "\n";
        o << "  macro F1   " << fixed(m.macro_f1) << "\n";
        o << "  class      precision  recall     F1         support\n";
        for (auto [label, c] : {std::pair{"Increase", m.increase}, std::pair{"Decrease", m.decrease}}) {
            char line[128];
            std::snprintf(line, sizeof line, "  %-10s %-10s %-10s %-10s %zu\n", label, fixed(c.precision).c_str(),
                          fixed(c.recall).c_str(), fixed(c.f1).c_str(), c.support);
            o << line;
        }
        o << "  confusion (rows = truth, cols = predicted Increase/Decrease)\n";
        o << "    Increase  " << m.confusion.tp << "  " << m.confusion.fn << "\n";
        o << "    Decrease  " << m.confusion.fp << "  " << m.confusion.tn << "\n";
        if (!r.importance.empty()) {
            o << "  feature importance (top 10)\n";
            for (std::size_t i = 0; i < std::min<std::size_t>(10, r.importance.size()); ++i) {
                o << "    " << r.importance[i].first << "  " << fixed(r.importance[i].second) << "\n";
            }
        }
        o << "\n";
    }
    o << "reference accuracies (published on unavailable corpora; NOT reproduced here):\n";
    for (const auto& [name, v] : reference_accuracies()) o << "  " << name << "  " << fixed(v, 3) << "\n";
    return o.str();
}

}  // namespace earnsignal
