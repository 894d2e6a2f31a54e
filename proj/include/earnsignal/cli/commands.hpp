#pragma once

// The five pipeline commands. Each reads its inputs from the config (and from
// earlier commands' outputs under the output directory) and writes plain files:
//
//   ingest     <out>/ingest/documents_{reddit,news,headline}.csv, bars.csv, ingest_summary.json
//   featurize  <out>/features.csv, featurize_summary.json [, nb_model.json]
//   train      <out>/model.json, train_table.csv, test_table.csv, train_predictions.csv
//   evaluate   <out>/report.json, report.txt
//   predict    predictions CSV `company,date,p_increase,label`
//
// Skipped-row diagnostics go to `log` as `file:line: message`.

#include <filesystem>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "earnsignal/cli/artifact.hpp"
#include "earnsignal/cli/config.hpp"
#include "earnsignal/core/csv.hpp"
#include "earnsignal/core/table.hpp"
#include "earnsignal/experiment.hpp"
#include "earnsignal/features.hpp"
#include "earnsignal/ingest.hpp"
#include "earnsignal/sentiment.hpp"
#include "earnsignal/textprep.hpp"

namespace earnsignal::cli {

namespace detail {

inline void ensure_dir(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error(ErrorKind::Io, "cannot create directory " + dir + ": " + ec.message());
}

inline void require_file(const std::string& path, const std::string& hint) {
    if (!std::filesystem::exists(path)) throw Error(ErrorKind::Io, path + " not found (" + hint + ")");
}

inline void report(std::ostream& log, const std::vector<Diagnostic>& diags) {
    for (const auto& d : diags) log << d.to_string() << "\n";
}

inline std::string ingest_dir(const RunConfig& c) { return c.out_path("ingest"); }

inline std::string store_path(const RunConfig& c, DocSource s) {
    return (std::filesystem::path(ingest_dir(c)) / ("documents_" + std::string(to_string(s)) + ".csv")).string();
}

inline std::string predictions_to_csv(const FeatureTable& table, const std::vector<Prediction>& preds) {
    std::ostringstream out;
    write_csv_row(out, {"company", "date", "p_increase", "label"});
    for (std::size_t i = 0; i < table.size(); ++i) {
        write_csv_row(out, {table.rows[i].company, table.rows[i].date.iso(), format_double(preds[i].p_increase),
                            std::string(to_string(preds[i].label))});
    }
    return out.str();
}

inline std::vector<LabeledTokens> read_nb_corpus(const std::string& path, const Stoplist& stop) {
    CsvTable csv = parse_csv(read_text_file(path), path);
    if (csv.header.empty()) throw Error(ErrorKind::EmptyTrainingSet, path + ": empty file");
    ColumnIndex cols(csv.header, {"text", "label"}, path);
    std::vector<LabeledTokens> out;
    for (const auto& rec : csv.records) {
        auto where = path + ":" + std::to_string(rec.line);
        if (rec.fields.size() != csv.header.size()) throw Error(ErrorKind::BadRow, where + ": field count");
        auto label = parse_sentiment_label(trim(rec.fields[cols[1]]));
        if (!label) throw Error(ErrorKind::BadRow, where + ": unknown label '" + rec.fields[cols[1]] + "'");
        out.push_back({remove_stopwords(tokenize(clean_text(rec.fields[cols[0]])), stop), *label});
    }
    return out;
}

}  // namespace detail

struct IngestSummary {
    std::map<std::string, std::size_t> rows;     // by store
    std::map<std::string, std::size_t> skipped;  // by store
};

inline IngestSummary cmd_ingest(const RunConfig& cfg, std::ostream& log) {
    validate_input_paths(cfg);
    if (cfg.ohlcv.empty()) throw Error(ErrorKind::BadConfig, "inputs.ohlcv lists no price files");

    IngestSummary sum;
    std::vector<RawComment> comments;
    std::vector<NewsItem> news;
    std::vector<HeadlineItem> headlines;
    std::size_t skipped = 0;
    for (const auto& p : cfg.reddit) {
        auto r = read_reddit_csv(cfg.resolve(p));
        detail::report(log, r.diagnostics);
        skipped += r.skipped();
        comments.insert(comments.end(), r.rows.begin(), r.rows.end());
    }
    sum.skipped["reddit"] = skipped;
    skipped = 0;
    for (const auto& p : cfg.news) {
        auto r = read_news_csv(cfg.resolve(p));
        detail::report(log, r.diagnostics);
        skipped += r.skipped();
        news.insert(news.end(), r.rows.begin(), r.rows.end());
    }
    sum.skipped["news"] = skipped;
    skipped = 0;
    for (const auto& p : cfg.headlines) {
        auto r = read_headlines_csv(cfg.resolve(p));
        detail::report(log, r.diagnostics);
        skipped += r.skipped();
        headlines.insert(headlines.end(), r.rows.begin(), r.rows.end());
    }
    for (const auto& s : cfg.snapshots) {
        auto items = parse_headline_snapshot(read_text_file(cfg.resolve(s.path)), s.selector, s.snapshot_date,
                                             s.company);
        headlines.insert(headlines.end(), items.begin(), items.end());
    }
    sum.skipped["headline"] = skipped;

    BarsByCompany bars;
    skipped = 0;
    for (const auto& o : cfg.ohlcv) {
        if (bars.contains(o.company)) throw Error(ErrorKind::BadConfig, "price file listed twice for " + o.company);
        auto r = read_ohlcv_csv(cfg.resolve(o.path));
        detail::report(log, r.diagnostics);
        skipped += r.skipped();
        bars[o.company] = std::move(r.rows);
    }
    sum.skipped["bars"] = skipped;

    const auto docs = to_documents(comments, news, headlines);
    std::map<DocSource, std::vector<Document>> by_source{
        {DocSource::Reddit, {}}, {DocSource::News, {}}, {DocSource::Headline, {}}};
    for (const auto& d : docs) by_source[d.source].push_back(d);

    detail::ensure_dir(detail::ingest_dir(cfg));
    for (const auto& [source, list] : by_source) {
        write_text_file(detail::store_path(cfg, source), documents_to_csv(list));
        sum.rows[std::string(to_string(source))] = list.size();
    }
    write_text_file((std::filesystem::path(detail::ingest_dir(cfg)) / "bars.csv").string(), bars_store_to_csv(bars));
    std::size_t n_bars = 0;
    for (const auto& [_, series] : bars) n_bars += series.size();
    sum.rows["bars"] = n_bars;

    nlohmann::json j{{"seed", cfg.seed}, {"config_hash", config_hash(cfg)}, {"rows", sum.rows}, {"skipped", sum.skipped}};
    write_text_file((std::filesystem::path(detail::ingest_dir(cfg)) / "ingest_summary.json").string(), j.dump(2) + "\n");
    return sum;
}

/// Scores every stored document with its source's configured method.
/// External scoring drops documents that have no score (counted in `unscored`).
inline std::vector<ScoredDocument> score_documents(const RunConfig& cfg, const std::vector<Document>& docs,
                                                   std::ostream& log, std::size_t& unscored) {
    const Stoplist stop = cfg.stoplist ? load_stoplist(cfg.resolve(*cfg.stoplist)) : default_stoplist();
    bool need_lex = false;
    bool need_nb = false;
    bool need_ext = false;
    for (auto s : {DocSource::Reddit, DocSource::News, DocSource::Headline}) {
        switch (cfg.method_for(s)) {
        case SentimentMethod::Lexicon: need_lex = true; break;
        case SentimentMethod::NaiveBayes: need_nb = true; break;
        case SentimentMethod::External: need_ext = true; break;
        }
    }
    Lexicon lex;
    if (need_lex) {
        if (!cfg.lexicon) throw Error(ErrorKind::BadConfig, "sentiment.lexicon is required for the lexicon method");
        lex = load_lexicon(cfg.resolve(*cfg.lexicon));
    }
    NbModel nb;
    if (need_nb) {
        if (!cfg.nb_training) throw Error(ErrorKind::BadConfig, "sentiment.nb_training is required for naive_bayes");
        nb = train_naive_bayes(detail::read_nb_corpus(cfg.resolve(*cfg.nb_training), stop), cfg.nb_alpha);
        ModelArtifact a{nb, {}, std::nullopt, std::nullopt, cfg.seed, config_hash(cfg)};
        save_artifact(a, cfg.out_path("nb_model.json"));
    }
    ExternalScores ext;
    if (need_ext) {
        for (const auto& p : cfg.external_scores) {
            auto one = load_external_scores(cfg.resolve(p));
            detail::report(log, one.diagnostics);
            for (auto& [id, s] : one.scores) {
                if (!ext.scores.emplace(id, s).second) {
                    throw Error(ErrorKind::DuplicateDocId, p + ": doc_id '" + id + "' already scored");
                }
            }
        }
    }

    unscored = 0;
    std::vector<ScoredDocument> out;
    out.reserve(docs.size());
    for (const auto& d : docs) {
        const TokenList tokens = tokenize(clean_text(d.combined_text));
        switch (cfg.method_for(d.source)) {
        case SentimentMethod::Lexicon: {
            const TokenList& use = cfg.lexicon_remove_stopwords ? remove_stopwords(tokens, stop) : tokens;
            out.push_back({d, lexicon_score(use, lex, cfg.pos_threshold, cfg.neg_threshold)});
            break;
        }
        case SentimentMethod::NaiveBayes:
            out.push_back({d, nb_predict(nb, remove_stopwords(tokens, stop))});
            break;
        case SentimentMethod::External: {
            auto it = ext.scores.find(d.id);
            if (it == ext.scores.end()) {
                ++unscored;
                continue;
            }
            out.push_back({d, it->second});
            break;
        }
        }
    }
    if (unscored > 0) log << "warning: " << unscored << " documents have no external score and were left out\n";
    return out;
}

inline FeatureTable cmd_featurize(const RunConfig& cfg, std::ostream& log) {
    validate_input_paths(cfg);
    const std::string bars_path = (std::filesystem::path(detail::ingest_dir(cfg)) / "bars.csv").string();
    detail::require_file(bars_path, "run `ingest` first");

    std::vector<Document> docs;
    for (auto s : {DocSource::Reddit, DocSource::News, DocSource::Headline}) {
        const auto path = detail::store_path(cfg, s);
        detail::require_file(path, "run `ingest` first");
        auto r = parse_documents_csv(read_text_file(path), path);
        if (r.skipped() > 0) {
            detail::report(log, r.diagnostics);
            throw Error(ErrorKind::BadRow, path + ": normalized store is damaged");
        }
        docs.insert(docs.end(), r.rows.begin(), r.rows.end());
    }
    const BarsByCompany bars = parse_bars_store(read_text_file(bars_path), bars_path);

    std::size_t unscored = 0;
    const auto scored = score_documents(cfg, docs, log, unscored);
    std::map<DocSource, std::vector<ScoredDocument>> per_source;
    for (const auto& s : scored) per_source[s.doc.source].push_back(s);
    std::vector<SourceAggregates> sources;
    for (const auto& [source, list] : per_source) {
        sources.push_back({std::string(to_string(source)) + "_", aggregate_daily_sentiment(list, cfg.keywords)});
    }

    std::map<std::string, std::vector<StockDayFeatures>> stock;
    for (const auto& [company, series] : bars) {
        if (series.empty()) continue;
        stock[company] = stock_features(company, series, cfg.rolling_window);
    }
    const EarningsCalendar cal = cfg.earnings ? load_earnings_calendar(cfg.resolve(*cfg.earnings)) : EarningsCalendar{};
    FeatureTable table = align_and_merge(sources, stock, cal, cfg.keywords);

    write_text_file(cfg.out_path("features.csv"), feature_table_to_csv(table));
    nlohmann::json methods;
    for (auto s : {DocSource::Reddit, DocSource::News, DocSource::Headline}) {
        methods[std::string(to_string(s))] = std::string(to_string(cfg.method_for(s)));
    }
    nlohmann::json j{{"seed", cfg.seed},
                     {"config_hash", config_hash(cfg)},
                     {"rows", table.size()},
                     {"documents_scored", scored.size()},
                     {"documents_unscored", unscored},
                     {"sentiment_methods", methods},
                     {"feature_names", table.feature_names}};
    write_text_file(cfg.out_path("featurize_summary.json"), j.dump(2) + "\n");
    return table;
}

inline FeatureTable read_features(const RunConfig& cfg) {
    const auto path = cfg.out_path("features.csv");
    detail::require_file(path, "run `featurize` first");
    return feature_table_from_csv(read_text_file(path), path);
}

inline const ModelSpec& training_spec(const RunConfig& cfg) {
    if (!cfg.train_model) return cfg.models.front();
    for (const auto& m : cfg.models) {
        if (m.name == *cfg.train_model) return m;
    }
    throw Error(ErrorKind::BadConfig, "train.model '" + *cfg.train_model + "' is not in the models list");
}

inline ModelArtifact cmd_train(const RunConfig& cfg, std::size_t threads, std::ostream& log) {
    const FeatureTable table = read_features(cfg);
    const ExperimentConfig ecfg = experiment_config(cfg, threads);
    PreparedData data = prepare_data(table, ecfg);
    if (data.smote_warning) log << "warning: " << *data.smote_warning << "\n";
    const ModelSpec& spec = training_spec(cfg);
    TrainedModel fitted = fit_model(spec, data.train, cfg.seed, threads);

    ModelArtifact a;
    std::visit([&](auto&& m) { a.model = std::move(m); }, std::move(fitted));
    a.feature_names = table.feature_names;
    a.scaler = data.scaler;
    a.pca = data.pca;
    a.seed = cfg.seed;
    a.config_hash = ecfg.config_hash;
    save_artifact(a, cfg.out_path("model.json"));

    write_text_file(cfg.out_path("train_table.csv"), feature_table_to_csv(data.raw_train));
    write_text_file(cfg.out_path("test_table.csv"), feature_table_to_csv(data.raw_test));
    const TrainedModel model = as_trained_model(a.model);
    const auto preds = predict_table(model, transform_for_model(a, data.raw_train));
    write_text_file(cfg.out_path("train_predictions.csv"), detail::predictions_to_csv(data.raw_train, preds));
    return a;
}

inline ExperimentReport cmd_evaluate(const RunConfig& cfg, std::size_t threads, std::ostream& log) {
    const FeatureTable table = read_features(cfg);
    ExperimentReport rep = run_experiment(table, experiment_config(cfg, threads));
    if (rep.smote_warning) log << "warning: " << *rep.smote_warning << "\n";
    write_text_file(cfg.out_path("report.json"), report_to_json(rep).dump(2) + "\n");
    write_text_file(cfg.out_path("report.txt"), report_to_text(rep));
    return rep;
}

/// Scores every row of `table_path` with the model in `model_path`.
inline std::vector<Prediction> cmd_predict(const std::string& model_path, const std::string& table_path,
                                           const std::string& out_path) {
    const ModelArtifact a = load_artifact(model_path);
    const TrainedModel model = as_trained_model(a.model);
    const FeatureTable raw = feature_table_from_csv(read_text_file(table_path), table_path);
    const auto preds = predict_table(model, transform_for_model(a, raw));
    write_text_file(out_path, detail::predictions_to_csv(raw, preds));
    return preds;
}

}  // namespace earnsignal::cli
