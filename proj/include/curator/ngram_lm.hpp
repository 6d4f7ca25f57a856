#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "curator/audit.hpp"
#include "curator/document.hpp"

namespace curator {

// Character-level add-k n-gram model.
//
// Training pads each document with n-1 begin-of-document symbols, so every
// position contributes one window. Scoring walks only positions whose full
// context lies inside the document, so a document needs at least n symbols
// to be scorable.
//
// P(sym | ctx) = (count + k) / (context_total + k*|vocab| + k); the trailing
// +k is the shared unknown bucket, which keeps every conditional distribution
// normalized and strictly positive.
class NgramModel {
  public:
    static constexpr char32_t kBos = 0x110000;  // just past the Unicode range

    NgramModel() = default;
    NgramModel(uint32_t order, double smoothing_k);

    uint32_t order() const { return order_; }
    double smoothing_k() const { return k_; }
    size_t vocab_size() const { return vocab_.size(); }
    const std::set<char32_t>& vocab() const { return vocab_; }

    void add_document(const Document& doc);

    // P(symbol | context); symbols outside the vocabulary hit the unknown
    // bucket. context must have length order-1.
    double probability(std::u32string_view context, char32_t symbol) const;
    double log_probability(std::u32string_view context, char32_t symbol) const;

    // Observed contexts in sorted order (for inspection and persistence).
    std::vector<std::u32string> contexts() const;

    void save(const std::filesystem::path& file) const;
    static NgramModel load(const std::filesystem::path& file);

    bool operator==(const NgramModel& other) const;

  private:
    friend NgramModel train_ngram(std::span<const Document>, uint32_t, double);

    uint32_t order_ = 0;
    double k_ = 0.0;
    std::set<char32_t> vocab_;
    // context -> (symbol -> count); std::map keeps iteration deterministic.
    std::map<std::u32string, std::map<char32_t, uint64_t>> counts_;
    std::map<std::u32string, uint64_t> totals_;
};

// Trains on every document; throws ConfigError for empty corpus or bad params.
NgramModel train_ngram(std::span<const Document> corpus, uint32_t order, double smoothing_k);

struct PerplexityScore {
    uint64_t doc_id = 0;
    double ppl = 0.0;
    uint64_t token_count = 0;  // scored positions
};

// nullopt when the document has no scorable position (too short / empty);
// callers flag such documents rather than silently keeping or dropping them.
std::optional<PerplexityScore> perplexity(const NgramModel& model, const Document& doc);

struct PerplexityFilterMode {
    enum Kind { kAbsolute, kPercentile } kind = kPercentile;
    double absolute_threshold = 0.0;  // drop ppl > threshold
    double percentile_q = 0.2;        // drop top q fraction per language
};

struct PerplexityFilterResult {
    std::set<uint64_t> kept_ids;
    std::vector<FilterDecision> decisions;
};

// languages maps doc_id -> language tag (percentile mode groups by it).
PerplexityFilterResult perplexity_filter(std::span<const PerplexityScore> scores,
                                         const std::map<uint64_t, std::string>& languages,
                                         const PerplexityFilterMode& mode);

}  // namespace curator
