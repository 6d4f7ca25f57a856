#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "curator/audit.hpp"
#include "curator/document.hpp"

namespace curator {

// Labeled snippet in the annotation schema: four 0..4 sub-scores plus an
// overall 0..4 score. Sub-scores are optional (-1 when absent).
struct LabeledSnippet {
    std::string content;
    int overall = 0;
    int correctness = -1;
    int readability = -1;
    int security = -1;
    int solution_value = -1;
};

// JSONL: one object per line with `content`, `overall` and the optional
// dimension fields. Throws DataError on malformed records.
std::vector<LabeledSnippet> read_labeled_jsonl(const std::filesystem::path& file);
void write_labeled_jsonl(const std::filesystem::path& file,
                         std::span<const LabeledSnippet> data);

struct FeatureSpec {
    std::vector<uint32_t> ngram_sizes = {3, 4, 5};  // character n-grams (bytes)
    uint32_t buckets = 1u << 18;                    // D
    uint64_t seed = 0xfea7;

    bool operator==(const FeatureSpec&) const = default;
};

// bucket -> count, L2-normalized; deterministic in (content, spec).
// bucket(g) = splitmix64(fnv1a64(g) ^ seed) % buckets.
std::map<uint32_t, double> featurize(std::string_view content, const FeatureSpec& spec);

// Logistic regression over hashed n-gram features. score() is
// logistic(w . x + b), always in (0,1); the zero model scores 0.5 everywhere.
struct QualityClassifier {
    FeatureSpec spec;
    std::vector<double> weights;  // length spec.buckets
    double bias = 0.0;

    double score(std::string_view content) const;
    double score(const Document& doc) const { return score(doc.content); }

    void save(const std::filesystem::path& file) const;
    static QualityClassifier load(const std::filesystem::path& file);
};

struct TrainParams {
    double learning_rate = 1.0;
    uint32_t epochs = 10;
    double l2 = 1e-4;
    int positive_min_overall = 3;  // positive class: overall >= 3
};

// Mean logistic loss + (l2/2)*||w||^2 and its gradient, exposed so the
// gradient can be checked against finite differences.
double logistic_loss(const QualityClassifier& model,
                     std::span<const std::map<uint32_t, double>> features,
                     std::span<const int> labels, double l2);
void logistic_gradient(const QualityClassifier& model,
                       std::span<const std::map<uint32_t, double>> features,
                       std::span<const int> labels, double l2,
                       std::vector<double>* grad_w, double* grad_b);

// Full-batch gradient descent; deterministic in (data order, params).
// Throws DataError("degenerate_labels") when only one class is present.
QualityClassifier train_classifier(std::span<const LabeledSnippet> data,
                                   const FeatureSpec& spec, const TrainParams& params);

struct LearnedFilterResult {
    std::vector<uint64_t> kept_ids;
    std::vector<FilterDecision> decisions;
};

// kept iff score >= cutoff.
LearnedFilterResult learned_filter(std::span<const std::pair<uint64_t, double>> scored,
                                   double cutoff);

}  // namespace curator
