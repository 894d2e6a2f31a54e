#pragma once

// Model artifact file: a JSON document
//   {"magic": "EARNSIGNAL-MODEL", "format_version": 1, "kind": ...,
//    "created": {"seed": ..., "config_hash": ...},
//    "feature_names": [...], "scaler": {...} | null, "pca": {...} | null,
//    "model": {...}}
// Trees are stored as node arrays [feature, threshold, left, right, value].
// Doubles are written in shortest round-trip form, so save/load is exact.

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "earnsignal/core/csv.hpp"
#include "earnsignal/core/error.hpp"
#include "earnsignal/experiment.hpp"
#include "earnsignal/sentiment.hpp"

namespace earnsignal::cli {

inline constexpr const char* kArtifactMagic = "EARNSIGNAL-MODEL";
inline constexpr int kArtifactVersion = 1;

using ArtifactPayload = std::variant<GbdtModel, ForestModel, KnnModel, NbModel>;

struct ModelArtifact {
    ArtifactPayload model;
    std::vector<std::string> feature_names;  // names of the raw table the model expects
    std::optional<ScalerParams> scaler;
    std::optional<PcaModel> pca;
    std::uint64_t seed = 42;
    std::string config_hash;
};

inline std::string artifact_kind(const ArtifactPayload& p) {
    switch (p.index()) {
    case 0: return "gbdt";
    case 1: return "random_forest";
    case 2: return "knn";
    default: return "naive_bayes";
    }
}

namespace detail {

using ojson = nlohmann::ordered_json;

[[noreturn]] inline void corrupt(const std::string& msg) { throw Error(ErrorKind::CorruptArtifact, msg); }

inline ojson tree_to_json(const Tree& t) {
    ojson nodes = ojson::array();
    for (const auto& n : t.nodes) nodes.push_back(ojson::array({n.feature, n.threshold, n.left, n.right, n.value}));
    return nodes;
}

inline Tree tree_from_json(const ojson& j) {
    Tree t;
    for (const auto& n : j) {
        TreeNode node;
        node.feature = n.at(0).get<int>();
        node.threshold = n.at(1).get<double>();
        node.left = n.at(2).get<int>();
        node.right = n.at(3).get<int>();
        node.value = n.at(4).get<double>();
        t.nodes.push_back(node);
    }
    const int size = static_cast<int>(t.nodes.size());
    if (size == 0) corrupt("tree without nodes");
    for (const auto& n : t.nodes) {
        if (n.feature >= 0 && (n.left <= 0 || n.left >= size || n.right <= 0 || n.right >= size)) {
            corrupt("tree child index out of range");
        }
    }
    return t;
}

inline ojson depth_json(const std::optional<std::size_t>& d) { return d ? ojson(*d) : ojson(nullptr); }

inline std::optional<std::size_t> depth_from(const ojson& j) {
    if (j.is_null()) return std::nullopt;
    return j.get<std::size_t>();
}

inline ojson payload_to_json(const ArtifactPayload& payload) {
    ojson m;
    if (const auto* g = std::get_if<GbdtModel>(&payload)) {
        m["params"] = {{"n_estimators", g->params.n_estimators},
                       {"max_depth", depth_json(g->params.max_depth)},
                       {"min_samples_split", g->params.min_samples_split},
                       {"min_samples_leaf", g->params.min_samples_leaf},
                       {"learning_rate", g->params.learning_rate},
                       {"seed", g->params.seed}};
        m["base_score"] = g->base_score;
        m["feature_gains"] = g->feature_gains;
        ojson trees = ojson::array();
        for (const auto& t : g->trees) trees.push_back(tree_to_json(t));
        m["trees"] = trees;
    } else if (const auto* f = std::get_if<ForestModel>(&payload)) {
        m["params"] = {{"n_trees", f->params.n_trees},
                       {"max_depth", depth_json(f->params.max_depth)},
                       {"min_samples_split", f->params.min_samples_split},
                       {"min_samples_leaf", f->params.min_samples_leaf},
                       {"seed", f->params.seed}};
        ojson trees = ojson::array();
        for (const auto& t : f->trees) trees.push_back(tree_to_json(t));
        m["trees"] = trees;
    } else if (const auto* k = std::get_if<KnnModel>(&payload)) {
        m["k"] = k->k;
        m["distance"] = std::string(to_string(k->kind));
        ojson rows = ojson::array();
        for (const auto& r : k->train.rows) {
            rows.push_back({{"label", std::string(to_string(r.label))}, {"values", r.values}});
        }
        m["rows"] = rows;
    } else {
        const auto& nb = std::get<NbModel>(payload);
        m["alpha"] = nb.alpha;
        m["class_log_priors"] = nb.class_log_priors;
        ojson like = ojson::object();
        for (const auto& [tok, lp] : nb.token_log_likelihoods) like[tok] = lp;
        m["token_log_likelihoods"] = like;
    }
    return m;
}

inline ArtifactPayload payload_from_json(const std::string& kind, const ojson& m,
                                         const std::vector<std::string>& names) {
    if (kind == "gbdt") {
        GbdtModel g;
        const auto& p = m.at("params");
        g.params.n_estimators = p.at("n_estimators").get<std::size_t>();
        g.params.max_depth = depth_from(p.at("max_depth"));
        g.params.min_samples_split = p.at("min_samples_split").get<std::size_t>();
        g.params.min_samples_leaf = p.at("min_samples_leaf").get<std::size_t>();
        g.params.learning_rate = p.at("learning_rate").get<double>();
        g.params.seed = p.at("seed").get<std::uint64_t>();
        g.base_score = m.at("base_score").get<double>();
        g.feature_gains = m.at("feature_gains").get<std::vector<double>>();
        for (const auto& t : m.at("trees")) g.trees.push_back(tree_from_json(t));
        return g;
    }
    if (kind == "random_forest") {
        ForestModel f;
        const auto& p = m.at("params");
        f.params.n_trees = p.at("n_trees").get<std::size_t>();
        f.params.max_depth = depth_from(p.at("max_depth"));
        f.params.min_samples_split = p.at("min_samples_split").get<std::size_t>();
        f.params.min_samples_leaf = p.at("min_samples_leaf").get<std::size_t>();
        f.params.seed = p.at("seed").get<std::uint64_t>();
        for (const auto& t : m.at("trees")) f.trees.push_back(tree_from_json(t));
        if (f.trees.empty()) corrupt("forest without trees");
        return f;
    }
    if (kind == "knn") {
        KnnModel k;
        k.k = m.at("k").get<std::size_t>();
        auto d = parse_distance_kind(m.at("distance").get<std::string>());
        if (!d) corrupt("unknown distance kind");
        k.kind = *d;
        k.train.feature_names = names;
        for (const auto& r : m.at("rows")) {
            FeatureRow row;
            auto label = parse_direction(r.at("label").get<std::string>());
            if (!label) corrupt("bad kNN row label");
            row.label = *label;
            row.values = r.at("values").get<std::vector<double>>();
            if (row.values.size() != names.size()) corrupt("kNN row width mismatch");
            row.row_id = k.train.rows.size();
            k.train.rows.push_back(std::move(row));
        }
        if (k.k == 0 || k.k > k.train.size()) corrupt("kNN k out of range");
        return k;
    }
    if (kind == "naive_bayes") {
        NbModel nb;
        nb.alpha = m.at("alpha").get<double>();
        nb.class_log_priors = m.at("class_log_priors").get<LabelProbs>();
        for (const auto& [tok, lp] : m.at("token_log_likelihoods").items()) {
            nb.token_log_likelihoods[tok] = lp.get<LabelProbs>();
        }
        return nb;
    }
    corrupt("unknown model kind '" + kind + "'");
}

inline ojson scaler_to_json(const ScalerParams& s) {
    std::vector<int> constant(s.constant.begin(), s.constant.end());
    return {{"feature_names", s.feature_names}, {"mean", s.mean}, {"stddev", s.stddev}, {"constant", constant}};
}

inline ScalerParams scaler_from_json(const ojson& j) {
    ScalerParams s;
    s.feature_names = j.at("feature_names").get<std::vector<std::string>>();
    s.mean = j.at("mean").get<std::vector<double>>();
    s.stddev = j.at("stddev").get<std::vector<double>>();
    for (int c : j.at("constant").get<std::vector<int>>()) s.constant.push_back(c != 0);
    if (s.mean.size() != s.feature_names.size() || s.stddev.size() != s.mean.size() ||
        s.constant.size() != s.mean.size()) {
        corrupt("scaler arrays have unequal lengths");
    }
    return s;
}

inline ojson pca_to_json(const PcaModel& p) {
    return {{"input_names", p.input_names},
            {"mean", p.mean},
            {"components", p.components},
            {"explained_variance_ratio", p.explained_variance_ratio},
            {"eigenvalues", p.eigenvalues}};
}

inline PcaModel pca_from_json(const ojson& j) {
    PcaModel p;
    p.input_names = j.at("input_names").get<std::vector<std::string>>();
    p.mean = j.at("mean").get<std::vector<double>>();
    p.components = j.at("components").get<DenseMatrix>();
    p.explained_variance_ratio = j.at("explained_variance_ratio").get<std::vector<double>>();
    p.eigenvalues = j.at("eigenvalues").get<std::vector<double>>();
    for (const auto& row : p.components) {
        if (row.size() != p.input_names.size()) corrupt("PCA component width mismatch");
    }
    return p;
}

}  // namespace detail

inline std::string artifact_to_string(const ModelArtifact& a) {
    detail::ojson j;
    j["magic"] = kArtifactMagic;
    j["format_version"] = kArtifactVersion;
    j["kind"] = artifact_kind(a.model);
    j["created"] = {{"seed", a.seed}, {"config_hash", a.config_hash}};
    j["feature_names"] = a.feature_names;
    j["scaler"] = a.scaler ? detail::scaler_to_json(*a.scaler) : detail::ojson(nullptr);
    j["pca"] = a.pca ? detail::pca_to_json(*a.pca) : detail::ojson(nullptr);
    j["model"] = detail::payload_to_json(a.model);
    return j.dump(1) + "\n";
}

/// BadMagic, VersionMismatch, or CorruptArtifact on a bad document.
inline ModelArtifact artifact_from_string(std::string_view text, const std::string& source) {
    detail::ojson j;
    try {
        j = detail::ojson::parse(text);
    } catch (const nlohmann::json::exception&) {
        // a file that is not even JSON cannot carry our magic string
        throw Error(ErrorKind::BadMagic, source + ": not a model artifact");
    }
    if (!j.is_object() || !j.contains("magic") || j["magic"] != kArtifactMagic) {
        throw Error(ErrorKind::BadMagic, source + ": not a model artifact");
    }
    if (!j.contains("format_version") || !j["format_version"].is_number_integer() ||
        j["format_version"].get<int>() != kArtifactVersion) {
        throw Error(ErrorKind::VersionMismatch, source + ": unsupported artifact format version " +
                                                    (j.contains("format_version") ? j["format_version"].dump() : "?") +
                                                    " (expected " + std::to_string(kArtifactVersion) + ")");
    }
    try {
        ModelArtifact a;
        a.feature_names = j.at("feature_names").get<std::vector<std::string>>();
        a.seed = j.at("created").at("seed").get<std::uint64_t>();
        a.config_hash = j.at("created").at("config_hash").get<std::string>();
        if (!j.at("scaler").is_null()) a.scaler = detail::scaler_from_json(j["scaler"]);
        if (!j.at("pca").is_null()) a.pca = detail::pca_from_json(j["pca"]);
        std::vector<std::string> model_names = a.feature_names;
        if (a.pca) {
            model_names.clear();
            for (std::size_t i = 0; i < a.pca->k(); ++i) model_names.push_back("pc" + std::to_string(i + 1));
        }
        a.model = detail::payload_from_json(j.at("kind").get<std::string>(), j.at("model"), model_names);
        if (auto* g = std::get_if<GbdtModel>(&a.model)) g->feature_names = model_names;
        if (auto* f = std::get_if<ForestModel>(&a.model)) f->feature_names = model_names;
        return a;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::CorruptArtifact, source + ": " + e.what());
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::CorruptArtifact) throw Error(ErrorKind::CorruptArtifact, source + ": " + e.what());
        throw;
    }
}

inline void save_artifact(const ModelArtifact& a, const std::string& path) {
    write_text_file(path, artifact_to_string(a));
}

inline ModelArtifact load_artifact(const std::string& path) { return artifact_from_string(read_text_file(path), path); }

/// Applies the stored scaler and PCA to a raw table. FeatureMismatch when the
/// table's columns differ from the ones the model was trained on.
inline FeatureTable transform_for_model(const ModelArtifact& a, FeatureTable table) {
    if (table.feature_names != a.feature_names) {
        throw Error(ErrorKind::FeatureMismatch, "table columns do not match the model's feature names");
    }
    if (a.scaler) table = apply_scaler(*a.scaler, std::move(table));
    if (a.pca) table = apply_pca(*a.pca, std::move(table));
    return table;
}

inline TrainedModel as_trained_model(const ArtifactPayload& p) {
    if (const auto* g = std::get_if<GbdtModel>(&p)) return *g;
    if (const auto* f = std::get_if<ForestModel>(&p)) return *f;
    if (const auto* k = std::get_if<KnnModel>(&p)) return *k;
    throw Error(ErrorKind::BadParams, "a naive_bayes artifact scores text, not feature rows");
}

}  // namespace earnsignal::cli
