#pragma once

// Document-level sentiment: multinomial Naive Bayes, a weighted lexicon, and
// ingestion of precomputed (transformer) class probabilities.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "earnsignal/core/csv.hpp"
#include "earnsignal/core/error.hpp"
#include "earnsignal/textprep.hpp"

namespace earnsignal {

/// Declaration order is the tie-break order.
enum class SentimentLabel { Positive = 0, Neutral = 1, Negative = 2 };

inline constexpr std::size_t kSentimentClasses = 3;
inline constexpr std::array<SentimentLabel, kSentimentClasses> kAllSentimentLabels{
    SentimentLabel::Positive, SentimentLabel::Neutral, SentimentLabel::Negative};

using LabelProbs = std::array<double, kSentimentClasses>;

inline std::size_t index_of(SentimentLabel l) { return static_cast<std::size_t>(l); }

inline std::string_view to_string(SentimentLabel l) {
    switch (l) {
    case SentimentLabel::Positive: return "Positive";
    case SentimentLabel::Neutral: return "Neutral";
    case SentimentLabel::Negative: return "Negative";
    }
    return "?";
}

inline std::optional<SentimentLabel> parse_sentiment_label(std::string_view s) {
    std::string lower(trim(s));
    for (auto& c : lower) {
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    }
    if (lower == "positive") return SentimentLabel::Positive;
    if (lower == "neutral") return SentimentLabel::Neutral;
    if (lower == "negative") return SentimentLabel::Negative;
    return std::nullopt;
}

struct SentimentScore {
    double polarity = 0.0;  // [-1, 1]
    LabelProbs probs{0.0, 1.0, 0.0};
    SentimentLabel label = SentimentLabel::Neutral;

    bool operator==(const SentimentScore&) const = default;
};

/// First maximum in Positive < Neutral < Negative order.
inline SentimentLabel argmax_label(const LabelProbs& probs) {
    std::size_t best = 0;
    for (std::size_t c = 1; c < kSentimentClasses; ++c) {
        if (probs[c] > probs[best]) best = c;
    }
    return kAllSentimentLabels[best];
}

/// Classifier-style score: label = argmax, polarity = P(pos) - P(neg).
inline SentimentScore score_from_probs(const LabelProbs& probs) {
    SentimentScore s;
    s.probs = probs;
    s.label = argmax_label(probs);
    s.polarity = probs[index_of(SentimentLabel::Positive)] - probs[index_of(SentimentLabel::Negative)];
    return s;
}

inline SentimentLabel label_from_polarity(double polarity, double pos_threshold = 0.05,
                                          double neg_threshold = -0.05) {
    if (!(neg_threshold < pos_threshold)) {
        throw Error(ErrorKind::BadThresholds, "negative threshold must be below positive threshold");
    }
    if (polarity > pos_threshold) return SentimentLabel::Positive;
    if (polarity < neg_threshold) return SentimentLabel::Negative;
    return SentimentLabel::Neutral;
}

// ---------------------------------------------------------------------------
// Multinomial Naive Bayes
// ---------------------------------------------------------------------------

struct LabeledTokens {
    TokenList tokens;
    SentimentLabel label = SentimentLabel::Neutral;
};

struct NbModel {
    LabelProbs class_log_priors{};
    /// token -> per-class log P(token | class); keys form the vocabulary.
    std::map<std::string, LabelProbs, std::less<>> token_log_likelihoods;
    double alpha = 1.0;

    std::size_t vocabulary_size() const { return token_log_likelihoods.size(); }
    bool operator==(const NbModel&) const = default;
};

/// Laplace-smoothed multinomial NB:
///   P(t|c) = (count(t,c) + alpha) / (tokens(c) + alpha * |V|)
///   P(c)   = (docs(c) + alpha) / (N + 3 * alpha)
inline NbModel train_naive_bayes(const std::vector<LabeledTokens>& labeled, double alpha) {
    if (labeled.empty()) throw Error(ErrorKind::EmptyTrainingSet, "no labeled documents");
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
        throw Error(ErrorKind::BadAlpha, "smoothing alpha must be a positive finite number");
    }
    std::map<std::string, std::array<double, kSentimentClasses>, std::less<>> counts;
    std::array<double, kSentimentClasses> docs{};
    std::array<double, kSentimentClasses> totals{};
    for (const auto& doc : labeled) {
        const std::size_t c = index_of(doc.label);
        docs[c] += 1.0;
        for (const auto& t : doc.tokens) {
            counts[t][c] += 1.0;
            totals[c] += 1.0;
        }
    }
    NbModel model;
    model.alpha = alpha;
    const double n = static_cast<double>(labeled.size());
    const double vocab = static_cast<double>(counts.size());
    for (std::size_t c = 0; c < kSentimentClasses; ++c) {
        model.class_log_priors[c] = std::log((docs[c] + alpha) / (n + alpha * kSentimentClasses));
    }
    for (const auto& [token, per_class] : counts) {
        LabelProbs ll{};
        for (std::size_t c = 0; c < kSentimentClasses; ++c) {
            ll[c] = std::log((per_class[c] + alpha) / (totals[c] + alpha * vocab));
        }
        model.token_log_likelihoods.emplace(token, ll);
    }
    return model;
}

/// Log-domain posterior over the three classes; out-of-vocabulary tokens are ignored.
inline SentimentScore nb_predict(const NbModel& model, const TokenList& tokens) {
    LabelProbs log_post = model.class_log_priors;
    for (const auto& t : tokens) {
        auto it = model.token_log_likelihoods.find(t);
        if (it == model.token_log_likelihoods.end()) continue;
        for (std::size_t c = 0; c < kSentimentClasses; ++c) log_post[c] += it->second[c];
    }
    const double peak = *std::max_element(log_post.begin(), log_post.end());
    LabelProbs probs{};
    double z = 0.0;
    for (std::size_t c = 0; c < kSentimentClasses; ++c) {
        probs[c] = std::exp(log_post[c] - peak);
        z += probs[c];
    }
    for (auto& p : probs) p /= z;
    // argmax on log scores so exact ties survive the normalization
    SentimentScore s = score_from_probs(probs);
    std::size_t best = 0;
    for (std::size_t c = 1; c < kSentimentClasses; ++c) {
        if (log_post[c] > log_post[best]) best = c;
    }
    s.label = kAllSentimentLabels[best];
    return s;
}

// ---------------------------------------------------------------------------
// Lexicon
// ---------------------------------------------------------------------------

struct Lexicon {
    std::map<std::string, double, std::less<>> weights;
};

/// polarity = clamp(sum of matched weights / max(1, matches), -1, 1); probs put all mass on the label.
inline SentimentScore lexicon_score(const TokenList& tokens, const Lexicon& lexicon,
                                    double pos_threshold = 0.05, double neg_threshold = -0.05) {
    double sum = 0.0;
    std::size_t matched = 0;
    for (const auto& t : tokens) {
        auto it = lexicon.weights.find(t);
        if (it == lexicon.weights.end()) continue;
        sum += it->second;
        ++matched;
    }
    SentimentScore s;
    s.polarity = std::clamp(sum / static_cast<double>(std::max<std::size_t>(1, matched)), -1.0, 1.0);
    s.label = label_from_polarity(s.polarity, pos_threshold, neg_threshold);
    s.probs = {0.0, 0.0, 0.0};
    s.probs[index_of(s.label)] = 1.0;
    return s;
}

/// CSV `token,weight`. Tokens are lowercased.
inline Lexicon parse_lexicon(std::string_view text, std::string_view source) {
    CsvTable csv = parse_csv(text, source);
    ColumnIndex cols(csv.header, {"token", "weight"}, source);
    Lexicon lex;
    for (const auto& rec : csv.records) {
        auto where = std::string(source) + ":" + std::to_string(rec.line);
        if (rec.fields.size() != csv.header.size()) throw Error(ErrorKind::BadRow, where + ": field count");
        std::string tok(trim(rec.fields[cols[0]]));
        for (auto& c : tok) {
            if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
        }
        auto w = parse_double(rec.fields[cols[1]]);
        if (tok.empty() || !w) throw Error(ErrorKind::BadRow, where + ": bad lexicon entry");
        lex.weights[tok] = *w;
    }
    return lex;
}

inline Lexicon load_lexicon(const std::string& path) { return parse_lexicon(read_text_file(path), path); }

// ---------------------------------------------------------------------------
// Precomputed external scores
// ---------------------------------------------------------------------------

struct ExternalScores {
    std::map<std::string, SentimentScore> scores;  // keyed by document id
    std::vector<Diagnostic> diagnostics;
};

/// CSV `doc_id,p_positive,p_neutral,p_negative`. Rows whose probabilities are
/// negative or do not sum to 1 within 1e-6 are skipped with a diagnostic; the
/// rest are renormalized. A repeated doc_id throws DuplicateDocId.
inline ExternalScores parse_external_scores(std::string_view text, std::string_view source) {
    CsvTable csv = parse_csv(text, source);
    if (csv.header.empty()) throw Error(ErrorKind::MissingColumn, std::string(source) + ": empty file");
    ColumnIndex cols(csv.header, {"doc_id", "p_positive", "p_neutral", "p_negative"}, source);
    ExternalScores out;
    for (const auto& rec : csv.records) {
        auto bad = [&](const std::string& msg) { out.diagnostics.push_back({std::string(source), rec.line, msg}); };
        if (rec.fields.size() != csv.header.size()) {
            bad("expected " + std::to_string(csv.header.size()) + " fields");
            continue;
        }
        std::string id(trim(rec.fields[cols[0]]));
        if (id.empty()) {
            bad("empty doc_id");
            continue;
        }
        LabelProbs p{};
        bool ok = true;
        for (std::size_t c = 0; c < kSentimentClasses; ++c) {
            auto v = parse_double(rec.fields[cols[c + 1]]);
            if (!v || *v < 0.0) {
                ok = false;
                break;
            }
            p[c] = *v;
        }
        if (!ok) {
            bad("invalid probability");
            continue;
        }
        const double sum = p[0] + p[1] + p[2];
        if (std::abs(sum - 1.0) > 1e-6) {
            bad("probabilities sum to " + format_double(sum) + ", not 1");
            continue;
        }
        for (auto& v : p) v /= sum;
        if (out.scores.contains(id)) {
            throw Error(ErrorKind::DuplicateDocId, std::string(source) + ":" + std::to_string(rec.line) +
                                                       ": duplicate doc_id '" + id + "'");
        }
        out.scores.emplace(std::move(id), score_from_probs(p));
    }
    return out;
}

inline ExternalScores load_external_scores(const std::string& path) {
    return parse_external_scores(read_text_file(path), path);
}

}  // namespace earnsignal
