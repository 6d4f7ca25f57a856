#include "curator/learned_filter.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>

#include <json.hpp>

#include "curator/util.hpp"

namespace curator {

namespace {

double logistic(double z) {
    if (z >= 0) {
        return 1.0 / (1.0 + std::exp(-z));
    }
    const double e = std::exp(z);
    return e / (1.0 + e);
}

double dot_sparse(const std::vector<double>& w, const std::map<uint32_t, double>& x) {
    double z = 0.0;
    for (const auto& [idx, v] : x) z += w[idx] * v;
    return z;
}

}  // namespace

std::map<uint32_t, double> featurize(std::string_view content, const FeatureSpec& spec) {
    std::map<uint32_t, double> counts;
    for (uint32_t n : spec.ngram_sizes) {
        if (content.size() < n) continue;
        for (size_t i = 0; i + n <= content.size(); ++i) {
            const uint64_t h = splitmix64(fnv1a64(content.substr(i, n)) ^ spec.seed);
            counts[static_cast<uint32_t>(h % spec.buckets)] += 1.0;
        }
    }
    double norm = 0.0;
    for (const auto& [_, v] : counts) norm += v * v;
    if (norm > 0.0) {
        norm = std::sqrt(norm);
        for (auto& [_, v] : counts) v /= norm;
    }
    return counts;
}

double QualityClassifier::score(std::string_view content) const {
    const auto x = featurize(content, spec);
    return logistic(dot_sparse(weights, x) + bias);
}

double logistic_loss(const QualityClassifier& model,
                     std::span<const std::map<uint32_t, double>> features,
                     std::span<const int> labels, double l2) {
    double loss = 0.0;
    for (size_t i = 0; i < features.size(); ++i) {
        const double z = dot_sparse(model.weights, features[i]) + model.bias;
        const double p = logistic(z);
        const double y = labels[i];
        // Clamp away from 0/1; the gradient itself never needs this.
        const double eps = 1e-12;
        loss += -(y * std::log(std::max(p, eps)) +
                  (1.0 - y) * std::log(std::max(1.0 - p, eps)));
    }
    loss /= static_cast<double>(features.size());
    double reg = 0.0;
    for (double w : model.weights) reg += w * w;
    return loss + 0.5 * l2 * reg;
}

void logistic_gradient(const QualityClassifier& model,
                       std::span<const std::map<uint32_t, double>> features,
                       std::span<const int> labels, double l2,
                       std::vector<double>* grad_w, double* grad_b) {
    grad_w->assign(model.weights.size(), 0.0);
    *grad_b = 0.0;
    const double inv_n = 1.0 / static_cast<double>(features.size());
    for (size_t i = 0; i < features.size(); ++i) {
        const double z = dot_sparse(model.weights, features[i]) + model.bias;
        const double err = (logistic(z) - labels[i]) * inv_n;
        for (const auto& [idx, v] : features[i]) (*grad_w)[idx] += err * v;
        *grad_b += err;
    }
    for (size_t j = 0; j < grad_w->size(); ++j) (*grad_w)[j] += l2 * model.weights[j];
}

QualityClassifier train_classifier(std::span<const LabeledSnippet> data,
                                   const FeatureSpec& spec, const TrainParams& params) {
    if (data.empty()) throw DataError("degenerate_labels: empty training data");

    std::vector<std::map<uint32_t, double>> features;
    std::vector<int> labels;
    features.reserve(data.size());
    labels.reserve(data.size());
    size_t positives = 0;
    for (const LabeledSnippet& s : data) {
        features.push_back(featurize(s.content, spec));
        const int y = s.overall >= params.positive_min_overall ? 1 : 0;
        positives += y;
        labels.push_back(y);
    }
    if (positives == 0 || positives == data.size()) {
        throw DataError("degenerate_labels: training data has a single class");
    }

    QualityClassifier model;
    model.spec = spec;
    model.weights.assign(spec.buckets, 0.0);
    model.bias = 0.0;

    std::vector<double> grad_w;
    double grad_b = 0.0;
    for (uint32_t epoch = 0; epoch < params.epochs; ++epoch) {
        logistic_gradient(model, features, labels, params.l2, &grad_w, &grad_b);
        for (size_t j = 0; j < model.weights.size(); ++j) {
            model.weights[j] -= params.learning_rate * grad_w[j];
        }
        model.bias -= params.learning_rate * grad_b;
    }
    return model;
}

LearnedFilterResult learned_filter(std::span<const std::pair<uint64_t, double>> scored,
                                   double cutoff) {
    LearnedFilterResult r;
    for (const auto& [id, score] : scored) {
        if (score >= cutoff) {
            r.kept_ids.push_back(id);
            r.decisions.push_back(FilterDecision::keep(id, "learned"));
        } else {
            r.decisions.push_back(FilterDecision::drop(id, "learned", "low_learned_score"));
        }
    }
    return r;
}

// --- labeled data IO --------------------------------------------------------

std::vector<LabeledSnippet> read_labeled_jsonl(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw DataError("cannot open labeled data: " + file.string());
    std::vector<LabeledSnippet> out;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object() || !j.contains("content") ||
            !j.contains("overall")) {
            throw DataError("labeled data " + file.string() + ":" + std::to_string(lineno) +
                            ": need content and overall");
        }
        LabeledSnippet s;
        s.content = j["content"].get<std::string>();
        s.overall = j["overall"].get<int>();
        auto opt = [&](const char* key) {
            return j.contains(key) && j[key].is_number_integer() ? j[key].get<int>() : -1;
        };
        s.correctness = opt("correctness");
        s.readability = opt("readability");
        s.security = opt("security");
        s.solution_value = opt("solution_value");
        if (s.overall < 0 || s.overall > 4) {
            throw DataError("labeled data " + file.string() + ":" + std::to_string(lineno) +
                            ": overall out of 0..4");
        }
        for (int v : {s.correctness, s.readability, s.security, s.solution_value}) {
            if (v != -1 && (v < 0 || v > 4)) {
                throw DataError("labeled data " + file.string() + ":" +
                                std::to_string(lineno) + ": sub-score out of 0..4");
            }
        }
        out.push_back(std::move(s));
    }
    return out;
}

void write_labeled_jsonl(const std::filesystem::path& file,
                         std::span<const LabeledSnippet> data) {
    std::ofstream out(file, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot open output file: " + file.string());
    for (const LabeledSnippet& s : data) {
        nlohmann::ordered_json j;
        j["content"] = s.content;
        j["overall"] = s.overall;
        if (s.correctness >= 0) j["correctness"] = s.correctness;
        if (s.readability >= 0) j["readability"] = s.readability;
        if (s.security >= 0) j["security"] = s.security;
        if (s.solution_value >= 0) j["solution_value"] = s.solution_value;
        out << j.dump() << '\n';
    }
}

// --- model persistence -------------------------------------------------------

namespace {
constexpr char kModelMagic[4] = {'Q', 'C', 'L', 'F'};
constexpr uint32_t kModelVersion = 1;

template <typename T>
void put(std::ostream& out, T v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}
template <typename T>
T get(std::istream& in) {
    T v{};
    in.read(reinterpret_cast<char*>(&v), sizeof(v));
    return v;
}
}  // namespace

void QualityClassifier::save(const std::filesystem::path& file) const {
    std::ofstream out(file, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot open model file: " + file.string());
    out.write(kModelMagic, 4);
    put(out, kModelVersion);
    put(out, static_cast<uint32_t>(spec.ngram_sizes.size()));
    for (uint32_t n : spec.ngram_sizes) put(out, n);
    put(out, spec.buckets);
    put(out, spec.seed);
    put(out, bias);
    out.write(reinterpret_cast<const char*>(weights.data()),
              static_cast<std::streamsize>(weights.size() * sizeof(double)));
    if (!out) throw DataError("write error: " + file.string());
}

QualityClassifier QualityClassifier::load(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw DataError("cannot open model file: " + file.string());
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kModelMagic, 4) != 0) {
        throw DataError("not a classifier file: " + file.string());
    }
    if (get<uint32_t>(in) != kModelVersion) {
        throw DataError("unsupported classifier version: " + file.string());
    }
    QualityClassifier m;
    const uint32_t n_sizes = get<uint32_t>(in);
    m.spec.ngram_sizes.clear();
    for (uint32_t i = 0; i < n_sizes; ++i) m.spec.ngram_sizes.push_back(get<uint32_t>(in));
    m.spec.buckets = get<uint32_t>(in);
    m.spec.seed = get<uint64_t>(in);
    m.bias = get<double>(in);
    m.weights.resize(m.spec.buckets);
    in.read(reinterpret_cast<char*>(m.weights.data()),
            static_cast<std::streamsize>(m.weights.size() * sizeof(double)));
    if (!in) throw DataError("truncated classifier file: " + file.string());
    return m;
}

}  // namespace curator
