#pragma once

// Run configuration: one JSON file, overridable by command-line flags.
//
// Keys (all optional unless noted; relative paths resolve against the
// config file's directory):
//
//   seed                      integer, default 42
//   output_dir                string, default "out"
//   inputs.reddit             [csv paths]    text,upvotes,date,company
//   inputs.news               [csv paths]    title,summary,date,company
//   inputs.headlines          [csv paths]    headline,date,company
//   inputs.headline_snapshots [{path, selector, snapshot_date, company}]
//   inputs.ohlcv              [{company, path}]  (required, non-empty)
//   inputs.earnings           csv path       company,earnings_date
//   sentiment.method          "lexicon" | "naive_bayes" | "external" (default "lexicon")
//   sentiment.methods         {reddit|news|headline: method} per-source override
//   sentiment.lexicon         csv path       token,weight   (required for the lexicon method; data/lexicon.csv ships)
//   sentiment.stoplist        path           one token per line
//   sentiment.nb_training     csv path       text,label
//   sentiment.nb_alpha        real > 0, default 1
//   sentiment.external_scores [csv paths]    doc_id,p_positive,p_neutral,p_negative
//   sentiment.pos_threshold / neg_threshold  default 0.05 / -0.05
//   sentiment.lexicon_remove_stopwords       default false
//   features.keywords         [strings]
//   features.rolling_window   integer >= 1, default 5
//   features.pca              null | {"components": k} | {"variance": f}
//   smote.enabled / k_neighbors / target_ratio   default true / 5 / 1.0
//   split.train_fraction      default 0.7
//   models                    [{name, kind: gbdt|random_forest|knn, ...params}]
//   train.model               name of the model spec used by `train` (default: first)

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "earnsignal/core/csv.hpp"
#include "earnsignal/core/date.hpp"
#include "earnsignal/core/error.hpp"
#include "earnsignal/experiment.hpp"
#include "earnsignal/features.hpp"
#include "earnsignal/ingest.hpp"

namespace earnsignal::cli {

enum class SentimentMethod { Lexicon, NaiveBayes, External };

inline std::string_view to_string(SentimentMethod m) {
    switch (m) {
    case SentimentMethod::Lexicon: return "lexicon";
    case SentimentMethod::NaiveBayes: return "naive_bayes";
    case SentimentMethod::External: return "external";
    }
    return "?";
}

struct SnapshotInput {
    std::string path;
    std::string selector;
    Date snapshot_date;
    std::string company;
};

struct OhlcvInput {
    std::string company;
    std::string path;
};

struct RunConfig {
    std::string base_dir = ".";
    std::uint64_t seed = 42;
    std::string output_dir = "out";

    std::vector<std::string> reddit;
    std::vector<std::string> news;
    std::vector<std::string> headlines;
    std::vector<SnapshotInput> snapshots;
    std::vector<OhlcvInput> ohlcv;
    std::optional<std::string> earnings;

    SentimentMethod method = SentimentMethod::Lexicon;
    std::map<DocSource, SentimentMethod> method_overrides;
    std::optional<std::string> lexicon;
    std::optional<std::string> stoplist;
    std::optional<std::string> nb_training;
    double nb_alpha = 1.0;
    std::vector<std::string> external_scores;
    double pos_threshold = 0.05;
    double neg_threshold = -0.05;
    bool lexicon_remove_stopwords = false;

    std::vector<std::string> keywords = default_keywords();
    std::size_t rolling_window = 5;
    std::optional<PcaTarget> pca;

    bool smote_enabled = true;
    std::size_t smote_k = 5;
    double smote_ratio = 1.0;
    double train_fraction = 0.7;
    std::vector<ModelSpec> models = default_model_specs();
    std::optional<std::string> train_model;

    /// Config as written (minus output_dir), with the resolved seed; echoed into reports and hashed.
    nlohmann::json echo = nlohmann::json::object();

    SentimentMethod method_for(DocSource s) const {
        auto it = method_overrides.find(s);
        return it == method_overrides.end() ? method : it->second;
    }

    std::string resolve(const std::string& p) const {
        std::filesystem::path path(p);
        if (path.is_absolute()) return p;
        return (std::filesystem::path(base_dir) / path).lexically_normal().string();
    }

    std::string out_path(const std::string& name) const {
        return (std::filesystem::path(output_dir) / name).string();
    }
};

/// FNV-1a 64-bit, hex.
inline std::string fnv1a_hex(std::string_view data) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

inline std::string config_hash(const RunConfig& cfg) { return fnv1a_hex(cfg.echo.dump()); }

namespace detail {

[[noreturn]] inline void bad_config(const std::string& msg) { throw Error(ErrorKind::BadConfig, msg); }

inline SentimentMethod parse_method(const std::string& s) {
    if (s == "lexicon") return SentimentMethod::Lexicon;
    if (s == "naive_bayes") return SentimentMethod::NaiveBayes;
    if (s == "external") return SentimentMethod::External;
    bad_config("unknown sentiment method '" + s + "'");
}

inline std::vector<std::string> string_list(const nlohmann::json& j, const char* key) {
    std::vector<std::string> out;
    if (!j.contains(key) || j[key].is_null()) return out;
    if (!j[key].is_array()) bad_config(std::string(key) + " must be a list of paths");
    for (const auto& v : j[key]) out.push_back(v.get<std::string>());
    return out;
}

inline std::optional<std::size_t> optional_depth(const nlohmann::json& j) {
    if (!j.contains("max_depth") || j["max_depth"].is_null()) return std::nullopt;
    return j["max_depth"].get<std::size_t>();
}

inline ModelSpec parse_model_spec(const nlohmann::json& j) {
    ModelSpec m;
    m.name = j.value("name", std::string{});
    auto kind = parse_model_kind(j.value("kind", std::string("gbdt")));
    if (!kind) bad_config("unknown model kind in '" + m.name + "'");
    m.kind = *kind;
    if (m.name.empty()) m.name = std::string(to_string(m.kind));
    switch (m.kind) {
    case ModelKind::Gbdt:
        m.gbdt.n_estimators = j.value("n_estimators", m.gbdt.n_estimators);
        m.gbdt.max_depth = optional_depth(j);
        m.gbdt.min_samples_split = j.value("min_samples_split", m.gbdt.min_samples_split);
        m.gbdt.min_samples_leaf = j.value("min_samples_leaf", m.gbdt.min_samples_leaf);
        m.gbdt.learning_rate = j.value("learning_rate", m.gbdt.learning_rate);
        validate_gbdt_params(m.gbdt);
        break;
    case ModelKind::RandomForest:
        m.forest.n_trees = j.value("n_trees", m.forest.n_trees);
        m.forest.max_depth = optional_depth(j);
        m.forest.min_samples_split = j.value("min_samples_split", m.forest.min_samples_split);
        m.forest.min_samples_leaf = j.value("min_samples_leaf", m.forest.min_samples_leaf);
        break;
    case ModelKind::Knn: {
        m.knn_k = j.value("k", m.knn_k);
        auto d = parse_distance_kind(j.value("distance", std::string("lorentzian")));
        if (!d) bad_config("unknown distance in '" + m.name + "'");
        m.distance = *d;
        break;
    }
    }
    return m;
}

}  // namespace detail

/// Parses a config document. `base_dir` anchors relative paths. Does not touch the filesystem.
inline RunConfig parse_run_config(const nlohmann::json& j, const std::string& base_dir) {
    using detail::bad_config;
    if (!j.is_object()) bad_config("config must be a JSON object");
    RunConfig c;
    c.base_dir = base_dir;
    try {
        c.seed = j.value("seed", c.seed);
        c.output_dir = j.value("output_dir", c.output_dir);

        const auto inputs = j.value("inputs", nlohmann::json::object());
        c.reddit = detail::string_list(inputs, "reddit");
        c.news = detail::string_list(inputs, "news");
        c.headlines = detail::string_list(inputs, "headlines");
        const auto snapshots = inputs.value("headline_snapshots", nlohmann::json::array());
        for (const auto& s : snapshots) {
            SnapshotInput in;
            in.path = s.at("path").get<std::string>();
            in.selector = s.at("selector").get<std::string>();
            auto d = Date::parse(s.at("snapshot_date").get<std::string>());
            if (!d) bad_config("bad snapshot_date for " + in.path);
            in.snapshot_date = *d;
            in.company = s.at("company").get<std::string>();
            if (!valid_ticker(in.company)) bad_config("bad company ticker '" + in.company + "'");
            c.snapshots.push_back(std::move(in));
        }
        const auto ohlcv = inputs.value("ohlcv", nlohmann::json::array());
        for (const auto& o : ohlcv) {
            OhlcvInput in{o.at("company").get<std::string>(), o.at("path").get<std::string>()};
            if (!valid_ticker(in.company)) bad_config("bad company ticker '" + in.company + "'");
            c.ohlcv.push_back(std::move(in));
        }
        if (inputs.contains("earnings") && !inputs["earnings"].is_null()) c.earnings = inputs["earnings"].get<std::string>();

        const auto sent = j.value("sentiment", nlohmann::json::object());
        c.method = detail::parse_method(sent.value("method", std::string("lexicon")));
        const auto overrides = sent.value("methods", nlohmann::json::object());
        for (const auto& [src, m] : overrides.items()) {
            auto s = parse_doc_source(src);
            if (!s) bad_config("unknown source '" + src + "' in sentiment.methods");
            c.method_overrides[*s] = detail::parse_method(m.get<std::string>());
        }
        if (sent.contains("lexicon")) c.lexicon = sent["lexicon"].get<std::string>();
        if (sent.contains("stoplist")) c.stoplist = sent["stoplist"].get<std::string>();
        if (sent.contains("nb_training")) c.nb_training = sent["nb_training"].get<std::string>();
        c.nb_alpha = sent.value("nb_alpha", c.nb_alpha);
        c.external_scores = detail::string_list(sent, "external_scores");
        c.pos_threshold = sent.value("pos_threshold", c.pos_threshold);
        c.neg_threshold = sent.value("neg_threshold", c.neg_threshold);
        c.lexicon_remove_stopwords = sent.value("lexicon_remove_stopwords", c.lexicon_remove_stopwords);

        const auto feat = j.value("features", nlohmann::json::object());
        if (feat.contains("keywords")) c.keywords = feat["keywords"].get<std::vector<std::string>>();
        c.rolling_window = feat.value("rolling_window", c.rolling_window);
        if (feat.contains("pca") && !feat["pca"].is_null()) {
            const auto& p = feat["pca"];
            if (p.contains("components")) c.pca = PcaTarget::components(p["components"].get<std::size_t>());
            else if (p.contains("variance")) c.pca = PcaTarget::variance_fraction(p["variance"].get<double>());
            else bad_config("features.pca needs 'components' or 'variance'");
        }

        const auto sm = j.value("smote", nlohmann::json::object());
        c.smote_enabled = sm.value("enabled", c.smote_enabled);
        c.smote_k = sm.value("k_neighbors", c.smote_k);
        c.smote_ratio = sm.value("target_ratio", c.smote_ratio);
        c.train_fraction = j.value("split", nlohmann::json::object()).value("train_fraction", c.train_fraction);

        if (j.contains("models")) {
            c.models.clear();
            for (const auto& m : j["models"]) c.models.push_back(detail::parse_model_spec(m));
            if (c.models.empty()) bad_config("models list is empty");
        }
        const auto tr = j.value("train", nlohmann::json::object());
        if (tr.contains("model")) c.train_model = tr["model"].get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        bad_config(std::string("malformed config: ") + e.what());
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::BadConfig) throw;
        bad_config(e.what());
    }

    if (c.rolling_window < 1) bad_config("features.rolling_window must be >= 1");
    if (!(c.neg_threshold < c.pos_threshold)) bad_config("sentiment thresholds out of order");
    if (!(c.nb_alpha > 0.0)) bad_config("sentiment.nb_alpha must be positive");
    if (c.smote_k < 1 || !(c.smote_ratio > 0.0 && c.smote_ratio <= 1.0)) bad_config("bad smote settings");
    if (!(c.train_fraction > 0.0 && c.train_fraction < 1.0)) bad_config("split.train_fraction must be in (0, 1)");

    c.echo = j;
    c.echo.erase("output_dir");
    c.echo["seed"] = c.seed;
    return c;
}

inline RunConfig load_run_config(const std::string& path) {
    std::string text = read_text_file(path);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::BadConfig, path + ": " + e.what());
    }
    auto base = std::filesystem::path(path).parent_path().string();
    return parse_run_config(j, base.empty() ? "." : base);
}

inline void set_seed(RunConfig& c, std::uint64_t seed) {
    c.seed = seed;
    c.echo["seed"] = seed;
}

/// Every referenced input path must exist (Io otherwise).
inline void validate_input_paths(const RunConfig& c) {
    auto check = [&](const std::string& p) {
        if (!std::filesystem::exists(c.resolve(p))) throw Error(ErrorKind::Io, "input file not found: " + c.resolve(p));
    };
    for (const auto& p : c.reddit) check(p);
    for (const auto& p : c.news) check(p);
    for (const auto& p : c.headlines) check(p);
    for (const auto& s : c.snapshots) check(s.path);
    for (const auto& o : c.ohlcv) check(o.path);
    if (c.earnings) check(*c.earnings);
    if (c.lexicon) check(*c.lexicon);
    if (c.stoplist) check(*c.stoplist);
    if (c.nb_training) check(*c.nb_training);
    for (const auto& p : c.external_scores) check(p);
}

inline ExperimentConfig experiment_config(const RunConfig& c, std::size_t threads) {
    ExperimentConfig e;
    e.train_fraction = c.train_fraction;
    e.use_smote = c.smote_enabled;
    e.smote.k_neighbors = c.smote_k;
    e.smote.target_ratio = c.smote_ratio;
    e.smote.seed = c.seed;
    e.pca = c.pca;
    e.models = c.models;
    e.seed = c.seed;
    e.threads = threads;
    e.config_echo = c.echo;
    e.config_hash = config_hash(c);
    return e;
}

}  // namespace earnsignal::cli
