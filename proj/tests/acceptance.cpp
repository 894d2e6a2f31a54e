// Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any FAIL.

#include <sys/wait.h>

#include <Eigen/Dense>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <iostream>
#include <numeric>
#include <set>
#include <sstream>

#include "earnsignal/earnsignal.hpp"
#include "test_support.hpp"

#ifndef EARNSIGNAL_CLI_PATH
#define EARNSIGNAL_CLI_PATH "earnsignal"
#endif

using namespace earnsignal;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool ok = true;
    std::ostringstream detail;

    void require(bool cond, const std::string& what) {
        if (!cond) {
            if (!ok) detail << "; ";
            else detail.str("");
            ok = false;
            detail << what;
        }
    }
};

int failures = 0;

void criterion(const std::string& name, const std::function<void(Outcome&)>& body) {
    Outcome o;
    try {
        body(o);
    } catch (const std::exception& e) {
        o.ok = false;
        o.detail.str("");
        o.detail << "exception: " << e.what();
    }
    if (!o.ok) ++failures;
    std::cout << (o.ok ? "PASS " : "FAIL ") << name;
    const std::string d = o.detail.str();
    if (!d.empty()) std::cout << " | " << d;
    std::cout << std::endl;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int run_cli(const std::string& args, const std::string& log) {
    const std::string cmd = std::string("\"") + EARNSIGNAL_CLI_PATH + "\" " + args + " >>\"" + log + "\" 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

FeatureTable load_fixture(const std::string& name) {
    const std::string path = testing_support::data_path("fixtures/" + name);
    return feature_table_from_csv(read_text_file(path), path);
}

std::vector<LabeledTokens> nb_fixture() {
    CsvTable csv = parse_csv(read_text_file(testing_support::data_path("fixtures/nb_corpus.csv")));
    std::vector<LabeledTokens> out;
    for (const auto& r : csv.records) out.push_back({tokenize(clean_text(r.fields[0])), *parse_sentiment_label(r.fields[1])});
    return out;
}

FeatureTable random_table(std::uint64_t seed, std::size_t n, std::size_t d) {
    Rng rng(seed);
    std::vector<std::vector<double>> v(n, std::vector<double>(d));
    std::vector<Direction> l;
    for (auto& row : v) {
        const double shared = testing_support::noise(rng);
        for (std::size_t j = 0; j < d; ++j) row[j] = shared * 0.4 * static_cast<double>(j) + testing_support::noise(rng);
        l.push_back(row[0] + row[1] > 0 ? Direction::Increase : Direction::Decrease);
    }
    std::vector<std::string> names;
    for (std::size_t j = 0; j < d; ++j) names.push_back("f" + std::to_string(j));
    return testing_support::make_table(names, v, l);
}

ExperimentConfig gbdt_only() {
    ExperimentConfig cfg;
    cfg.models = {ModelSpec{"gbdt", ModelKind::Gbdt, {}, {}, 5, DistanceKind::Lorentzian}};
    return cfg;
}

// Checks the three leakage guards on one prepared split.
void check_no_leak(Outcome& o, const FeatureTable& table, const PreparedData& d, const std::string& tag) {
    const auto& p = d.provenance;
    o.require(!p.leaks(), tag + ": provenance leak");
    std::set<std::uint64_t> train_ids;
    for (const auto& r : d.raw_train.rows) train_ids.insert(r.row_id);
    o.require(p.scaler_fit == train_ids, tag + ": scaler fit set != train rows");
    o.require(p.smote_input.empty() || p.smote_input == train_ids, tag + ": SMOTE input != train rows");
    o.require(std::includes(train_ids.begin(), train_ids.end(), p.training.begin(), p.training.end()),
              tag + ": training used a non-train row");
    Date last_train = d.raw_train.rows.front().date;
    for (const auto& r : d.raw_train.rows) last_train = std::max(last_train, r.date);
    for (const auto& r : d.raw_test.rows) o.require(r.date > last_train, tag + ": test row not after train");
    for (const auto& r : d.test.rows) o.require(r.origin == RowOrigin::Original, tag + ": synthetic row in test");
    o.require(d.raw_train.size() + d.raw_test.size() == table.size(), tag + ": rows lost in split");
}

}  // namespace

int main() {
    std::cout << std::setprecision(4);

    criterion("planted-signal recovery (500 rows, 10 noise features, GBDT seed 42: acc >= 0.80, signal ranked first, < 10 s)",
              [](Outcome& o) {
                  const auto t0 = std::chrono::steady_clock::now();
                  PlantedSignalSpec spec;
                  const FeatureTable table = planted_signal_table(spec);
                  const auto rep = run_experiment(table, gbdt_only());
                  const double secs = seconds_since(t0);
                  const auto& r = rep.results.at(0);
                  o.require(r.metrics.accuracy >= 0.80, "accuracy below 0.80");
                  o.require(r.importance.at(0).first == spec.signal_name, "top feature is " + r.importance.at(0).first);
                  o.require(secs < 10.0, "took too long");
                  o.detail << "accuracy " << r.metrics.accuracy << ", top " << r.importance[0].first << " ("
                           << r.importance[0].second << "), " << secs << " s";
              });

    criterion("oracle: metrics and confusion matrix vs exact recount", [](Outcome& o) {
        using D = Direction;
        const std::vector<Prediction> p{{0.9, D::Increase}, {0.8, D::Increase}, {0.55, D::Increase}, {0.3, D::Decrease},
                                        {0.2, D::Decrease}, {0.6, D::Increase}, {0.45, D::Decrease}, {0.1, D::Decrease},
                                        {0.7, D::Increase}, {0.35, D::Decrease}, {0.5, D::Increase}, {0.05, D::Increase}};
        const std::vector<D> t{D::Increase, D::Increase, D::Decrease, D::Decrease, D::Decrease, D::Increase,
                               D::Increase, D::Decrease, D::Decrease, D::Increase, D::Increase, D::Decrease};
        const auto m = compute_metrics(p, t);
        o.require(m.confusion == ConfusionMatrix{4, 3, 2, 3}, "confusion counts differ");
        const std::vector<std::pair<double, double>> pairs{
            {m.accuracy, 7.0 / 12.0},      {m.increase.precision, 4.0 / 7.0}, {m.increase.recall, 2.0 / 3.0},
            {m.increase.f1, 8.0 / 13.0},   {m.decrease.precision, 0.6},       {m.decrease.recall, 0.5},
            {m.decrease.f1, 6.0 / 11.0},   {m.macro_f1, 83.0 / 143.0},        {m.mse, 53.0 / 300.0}};
        for (auto [got, want] : pairs) o.require(std::abs(got - want) <= 1e-6, "metric off");
    });

    criterion("oracle: NB posteriors on the 20-doc fixture and leave-one-out 8/20", [](Outcome& o) {
        const std::vector<LabelProbs> want{
            {0.980727291694341, 0.00697289660183518, 0.0122998117038235},
            {0.971040663094832, 0.00460268360517085, 0.0243566532999976},
            {0.945826816453911, 0.00672475687199653, 0.047448426674092},
            {0.909838309782461, 0.0388132879276221, 0.0513484022899171},
            {0.832427936916762, 0.0266332475071354, 0.140938815576102},
            {0.943711406531826, 0.0089462886240276, 0.0473423048441464},
            {0.867501304159413, 0.0164476491330165, 0.11605104670757},
            {0.0538061064722037, 0.881412094919806, 0.0647817986079903},
            {0.0143882753352911, 0.972881737143322, 0.0127299875213866},
            {0.00955059415017043, 0.938704888670506, 0.0517445171793236},
            {0.0117604102788265, 0.894594670266665, 0.0936449194545087},
            {0.0288471082481028, 0.945104256018745, 0.0260486357331519},
            {0.0284762248440933, 0.932953177283177, 0.0385705978727295},
            {0.0933905007454826, 0.00708265996260055, 0.899526839291917},
            {0.132713694464473, 0.0150973487041367, 0.85218895683139},
            {0.0821210196825026, 0.0280259623942103, 0.889853017923287},
            {0.212889294068193, 0.0181635206575388, 0.768947185274268},
            {0.0198072868965142, 0.121675656696744, 0.858517056406741},
            {0.0640267576052981, 0.010925409278933, 0.925047833115769},
            {0.0095753932453204, 0.0939537991063345, 0.896470807648345}};
        const auto corpus = nb_fixture();
        const NbModel m = train_naive_bayes(corpus, 1.0);
        double worst = 0.0;
        for (std::size_t i = 0; i < corpus.size(); ++i) {
            const auto s = nb_predict(m, corpus[i].tokens);
            for (std::size_t c = 0; c < 3; ++c) worst = std::max(worst, std::abs(s.probs[c] - want[i][c]));
        }
        o.require(worst <= 1e-6, "posterior deviation too large");
        std::size_t correct = 0;
        for (std::size_t i = 0; i < corpus.size(); ++i) {
            auto rest = corpus;
            rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(i));
            correct += nb_predict(train_naive_bayes(rest, 1.0), corpus[i].tokens).label == corpus[i].label;
        }
        o.require(correct == 8, "leave-one-out count " + std::to_string(correct));
        o.detail << "max deviation " << worst << ", LOO " << correct << "/20";
    });

    criterion("oracle: PCA projections vs Eigen self-adjoint eigensolver", [](Outcome& o) {
        double worst = 0.0;
        for (std::uint64_t seed = 1; seed <= 5; ++seed) {
            const std::size_t n = 80;
            const std::size_t d = 5;
            const auto t = random_table(seed, n, d);
            const auto m = fit_pca(t, PcaTarget::components(2));
            Eigen::MatrixXd x(n, d);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < d; ++j) x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = t.rows[i].values[j];
            const Eigen::MatrixXd c = x.rowwise() - x.colwise().mean();
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(c.transpose() * c / static_cast<double>(n));
            for (std::size_t k = 0; k < 2; ++k) {
                Eigen::VectorXd v = es.eigenvectors().col(static_cast<Eigen::Index>(d - 1 - k));
                Eigen::Index big;
                v.cwiseAbs().maxCoeff(&big);
                if (v(big) < 0) v = -v;
                for (std::size_t i = 0; i < n; ++i) {
                    const double want = c.row(static_cast<Eigen::Index>(i)).dot(v);
                    worst = std::max(worst, std::abs(pca_project(m, t.rows[i].values)[k] - want));
                }
            }
        }
        o.require(worst <= 1e-6, "projection deviation too large");
        o.detail << "max deviation " << worst;
    });

    criterion("oracle: kNN neighbour order vs exhaustive distance table", [](Outcome& o) {
        const auto train = load_fixture("knn_outlier_train.csv");
        const auto queries = load_fixture("knn_outlier_queries.csv");
        for (auto kind : {DistanceKind::Euclidean, DistanceKind::Lorentzian}) {
            for (const auto& q : queries.rows) {
                std::vector<std::pair<double, std::size_t>> table;
                for (std::size_t i = 0; i < train.size(); ++i) {
                    double s = 0.0;
                    for (std::size_t j = 0; j < q.values.size(); ++j) {
                        const double diff = std::abs(train.rows[i].values[j] - q.values[j]);
                        s += kind == DistanceKind::Euclidean ? diff * diff : std::log(1.0 + diff);
                    }
                    table.emplace_back(kind == DistanceKind::Euclidean ? std::sqrt(s) : s, i);
                }
                std::sort(table.begin(), table.end());
                const auto got = knn_neighbors(train, q.values, train.size(), kind);
                for (std::size_t i = 0; i < got.size(); ++i) o.require(got[i] == table[i].second, "neighbour order differs");
            }
        }
    });

    criterion("conservation: NB normalization, scaler moments, SMOTE counts, PCA orthonormality, GBDT loss", [](Outcome& o) {
        const NbModel nb = train_naive_bayes(nb_fixture(), 1.0);
        double priors = 0.0;
        for (double lp : nb.class_log_priors) priors += std::exp(lp);
        o.require(std::abs(priors - 1.0) <= 1e-9, "NB priors");
        for (std::size_t c = 0; c < 3; ++c) {
            double s = 0.0;
            for (const auto& [_, ll] : nb.token_log_likelihoods) s += std::exp(ll[c]);
            o.require(std::abs(s - 1.0) <= 1e-9, "NB likelihoods");
        }
        for (const auto& d : nb_fixture()) {
            const auto p = nb_predict(nb, d.tokens).probs;
            o.require(std::abs(p[0] + p[1] + p[2] - 1.0) <= 1e-9, "NB posterior");
        }

        const auto t = random_table(77, 90, 6);
        const auto s = apply_scaler(fit_scaler(t), t);
        for (std::size_t j = 0; j < 6; ++j) {
            double m = 0.0;
            double v = 0.0;
            for (const auto& r : s.rows) m += r.values[j];
            m /= static_cast<double>(s.size());
            for (const auto& r : s.rows) v += (r.values[j] - m) * (r.values[j] - m);
            v /= static_cast<double>(s.size());
            o.require(std::abs(m) < 1e-9 && std::abs(std::sqrt(v) - 1.0) < 1e-9, "scaler moments");
        }

        for (double ratio : {0.5, 0.8, 1.0}) {
            auto rows = t.rows;
            for (std::size_t i = 0; i < rows.size(); ++i) rows[i].label = i % 5 == 0 ? Direction::Decrease : Direction::Increase;
            const auto r = smote(rows, {5, ratio, 42});
            const auto c = count_classes(r.rows);
            const auto want = static_cast<std::size_t>(std::ceil(ratio * 72.0 - 1e-9));
            o.require(c.increase == 72 && c.decrease == std::max<std::size_t>(18, want), "SMOTE count formula");
        }

        const auto pca = fit_pca(s, PcaTarget::components(6));
        for (std::size_t a = 0; a < 6; ++a)
            for (std::size_t b = 0; b < 6; ++b) {
                double dot = 0.0;
                for (std::size_t j = 0; j < 6; ++j) dot += pca.components[a][j] * pca.components[b][j];
                o.require(std::abs(dot - (a == b ? 1.0 : 0.0)) <= 1e-8, "PCA orthonormality");
            }

        const auto g = train_gbdt(t, {});
        double prev = gbdt_log_loss(g, t, 0);
        for (std::size_t k = 1; k <= g.trees.size(); ++k) {
            const double cur = gbdt_log_loss(g, t, k);
            o.require(cur <= prev + 1e-12, "GBDT loss rose at round " + std::to_string(k));
            prev = cur;
        }
    });

    criterion("leakage: shared boundary dates, single-date table, unbalanced classes", [](Outcome& o) {
        ExperimentConfig cfg = gbdt_only();

        // three companies per date, so floor(0.7 n) lands inside a date group
        FeatureTable shared = random_table(5, 100, 4);
        for (std::size_t i = 0; i < shared.size(); ++i) {
            shared.rows[i].date = Date(2024, 1, 1).plus_days(static_cast<long>(i / 3));
            shared.rows[i].company = std::string(1, static_cast<char>('A' + i % 3)) + "CO";
        }
        const auto d1 = prepare_data(shared, cfg);
        check_no_leak(o, shared, d1, "shared-date");
        o.require(d1.raw_train.size() == 72, "boundary date group not moved into train");

        FeatureTable single = random_table(6, 30, 3);
        for (auto& r : single.rows) r.date = Date(2024, 2, 1);
        try {
            prepare_data(single, cfg);
            o.require(false, "single-date table was split");
        } catch (const Error& e) {
            o.require(e.kind() == ErrorKind::DegenerateSplit, "single-date: wrong error");
        }

        FeatureTable skewed = random_table(7, 120, 4);
        for (std::size_t i = 0; i < skewed.size(); ++i) {
            skewed.rows[i].label = i % 8 == 0 ? Direction::Decrease : Direction::Increase;
        }
        const auto d3 = prepare_data(skewed, cfg);
        check_no_leak(o, skewed, d3, "unbalanced");
        const auto raw = count_classes(d3.raw_test.rows);
        const auto after = count_classes(d3.test.rows);
        o.require(raw.increase == after.increase && raw.decrease == after.decrease, "test class counts changed");
        o.require(d3.synthetic_count > 0, "no SMOTE happened");
        o.detail << "train/test " << d1.raw_train.size() << "/" << d1.raw_test.size() << ", " << d3.synthetic_count
                 << " synthetic rows from train only";
    });

    criterion("determinism: featurize -> train -> evaluate twice (threads 1 vs 4) byte-identical", [](Outcome& o) {
        const std::string cfg = testing_support::data_path("minicorpus/config.json");
        const std::string a = testing_support::scratch_dir("accept_det_a");
        const std::string b = testing_support::scratch_dir("accept_det_b");
        const std::string log = a + "/log.txt";
        for (const auto& [dir, threads] : {std::pair{a, 1}, std::pair{b, 4}}) {
            const std::string base = "--config \"" + cfg + "\" --out \"" + dir + "\" --seed 42 --threads " +
                                     std::to_string(threads) + " ";
            for (const char* cmd : {"ingest", "featurize", "train", "evaluate"}) {
                o.require(run_cli(base + cmd, log) == 0, std::string(cmd) + " failed");
            }
        }
        for (const char* f : {"features.csv", "model.json", "train_predictions.csv", "report.json", "report.txt"}) {
            o.require(read_text_file(a + "/" + f) == read_text_file(b + "/" + f), std::string(f) + " differs");
        }
    });

    criterion("distance claim: planted outlier flips Euclidean 1-NN, Lorentzian 1-NN unchanged", [](Outcome& o) {
        const auto train = load_fixture("knn_outlier_train.csv");
        const auto q = load_fixture("knn_outlier_queries.csv");
        const auto e0 = knn_predict(train, q.rows[0].values, 1, DistanceKind::Euclidean).label;
        const auto e1 = knn_predict(train, q.rows[1].values, 1, DistanceKind::Euclidean).label;
        const auto l0 = knn_predict(train, q.rows[0].values, 1, DistanceKind::Lorentzian).label;
        const auto l1 = knn_predict(train, q.rows[1].values, 1, DistanceKind::Lorentzian).label;
        o.require(e0 != e1, "Euclidean did not flip");
        o.require(l0 == l1, "Lorentzian flipped");
        o.detail << "Euclidean " << to_string(e0) << " -> " << to_string(e1) << ", Lorentzian " << to_string(l0)
                 << " -> " << to_string(l1);
    });

    criterion("end-to-end smoke on the mini-corpus (< 30 s, every metric in the report)", [](Outcome& o) {
        const std::string cfg = testing_support::data_path("minicorpus/config.json");
        const std::string out = testing_support::scratch_dir("accept_smoke");
        const std::string log = out + "/log.txt";
        const auto t0 = std::chrono::steady_clock::now();
        for (const char* cmd : {"ingest", "featurize", "train", "evaluate"}) {
            o.require(run_cli("--config \"" + cfg + "\" --out \"" + out + "\" " + cmd, log) == 0,
                      std::string(cmd) + " failed");
        }
        const double secs = seconds_since(t0);
        o.require(secs < 30.0, "took too long");
        const auto rep = nlohmann::json::parse(read_text_file(out + "/report.json"));
        std::size_t docs = 0;
        const auto summary = nlohmann::json::parse(read_text_file(out + "/ingest/ingest_summary.json"));
        for (const char* s : {"reddit", "news", "headline"}) docs += summary["rows"][s].get<std::size_t>();
        o.require(rep["models"].size() >= 1, "no models in report");
        for (const auto& m : rep["models"]) {
            for (const char* key : {"accuracy", "precision_increase", "recall_increase", "f1_increase", "mse"}) {
                o.require(m["metrics"].contains(key), std::string("missing ") + key);
            }
        }
        o.detail << rep["data"]["rows"].get<std::size_t>() << " rows, " << docs << " documents, "
                 << rep["models"].size() << " models, " << secs << " s";
    });

    std::cout << (failures == 0 ? "ALL CRITERIA PASS" : std::to_string(failures) + " CRITERIA FAILED") << std::endl;
    return failures == 0 ? 0 : 1;
}
