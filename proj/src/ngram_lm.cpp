#include "curator/ngram_lm.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>

#include "curator/util.hpp"

namespace curator {

NgramModel::NgramModel(uint32_t order, double smoothing_k) : order_(order), k_(smoothing_k) {
    if (order == 0) throw ConfigError("n-gram order must be >= 1");
    if (smoothing_k <= 0.0) throw ConfigError("smoothing k must be > 0");
}

void NgramModel::add_document(const Document& doc) {
    const std::u32string tokens = decode_utf8(doc.content);
    if (tokens.empty()) return;

    std::u32string padded(order_ - 1, kBos);
    padded += tokens;

    for (char32_t c : tokens) vocab_.insert(c);
    // One window per document position; the first order-1 contexts reach
    // into the padding.
    for (size_t i = 0; i < tokens.size(); ++i) {
        std::u32string ctx = padded.substr(i, order_ - 1);
        const char32_t sym = padded[i + order_ - 1];
        counts_[ctx][sym] += 1;
        totals_[ctx] += 1;
    }
}

double NgramModel::probability(std::u32string_view context, char32_t symbol) const {
    const std::u32string key(context);
    uint64_t total = 0;
    uint64_t count = 0;
    if (auto it = totals_.find(key); it != totals_.end()) total = it->second;
    const bool known = vocab_.count(symbol) > 0;
    if (known) {
        if (auto it = counts_.find(key); it != counts_.end()) {
            if (auto sit = it->second.find(symbol); sit != it->second.end()) {
                count = sit->second;
            }
        }
    }
    const double v = static_cast<double>(vocab_.size());
    const double denom = static_cast<double>(total) + k_ * v + k_;
    // Unknown symbols share one bucket worth k pseudo-counts.
    const double numer = known ? static_cast<double>(count) + k_ : k_;
    return numer / denom;
}

double NgramModel::log_probability(std::u32string_view context, char32_t symbol) const {
    return std::log(probability(context, symbol));
}

std::vector<std::u32string> NgramModel::contexts() const {
    std::vector<std::u32string> out;
    out.reserve(counts_.size());
    for (const auto& [ctx, _] : counts_) out.push_back(ctx);
    return out;
}

bool NgramModel::operator==(const NgramModel& other) const {
    return order_ == other.order_ && k_ == other.k_ && vocab_ == other.vocab_ &&
           counts_ == other.counts_ && totals_ == other.totals_;
}

NgramModel train_ngram(std::span<const Document> corpus, uint32_t order, double smoothing_k) {
    if (corpus.empty()) throw ConfigError("n-gram training corpus is empty");
    NgramModel model(order, smoothing_k);
    for (const Document& d : corpus) model.add_document(d);
    return model;
}

std::optional<PerplexityScore> perplexity(const NgramModel& model, const Document& doc) {
    const std::u32string tokens = decode_utf8(doc.content);
    const uint32_t n = model.order();
    if (tokens.size() < n) return std::nullopt;  // no position has a full context

    const size_t steps = tokens.size() - (n - 1);
    double log_sum = 0.0;
    for (size_t i = n - 1; i < tokens.size(); ++i) {
        const std::u32string_view ctx(tokens.data() + i - (n - 1), n - 1);
        log_sum += model.log_probability(ctx, tokens[i]);
    }
    PerplexityScore s;
    s.doc_id = doc.id;
    s.token_count = steps;
    s.ppl = std::exp(-log_sum / static_cast<double>(steps));
    return s;
}

PerplexityFilterResult perplexity_filter(std::span<const PerplexityScore> scores,
                                         const std::map<uint64_t, std::string>& languages,
                                         const PerplexityFilterMode& mode) {
    PerplexityFilterResult result;

    if (mode.kind == PerplexityFilterMode::kAbsolute) {
        for (const PerplexityScore& s : scores) {
            if (s.ppl > mode.absolute_threshold) {
                result.decisions.push_back(FilterDecision::drop(s.doc_id, "perplexity", "high_ppl"));
            } else {
                result.kept_ids.insert(s.doc_id);
                result.decisions.push_back(FilterDecision::keep(s.doc_id, "perplexity"));
            }
        }
        return result;
    }

    const double q = mode.percentile_q;
    if (q < 0.0 || q > 1.0) throw ConfigError("percentile q must be in [0,1]");

    std::map<std::string, std::vector<const PerplexityScore*>> by_lang;
    for (const PerplexityScore& s : scores) {
        auto it = languages.find(s.doc_id);
        const std::string lang = it != languages.end() ? it->second : "unknown";
        by_lang[lang].push_back(&s);
    }

    std::map<uint64_t, bool> dropped;
    for (auto& [lang, group] : by_lang) {
        const size_t n = group.size();
        // Small epsilon absorbs binary floating-point artifacts in q*n.
        const size_t drop_n = static_cast<size_t>(std::floor(q * static_cast<double>(n) + 1e-9));
        if (drop_n == 0) continue;
        std::vector<const PerplexityScore*> sorted = group;
        std::sort(sorted.begin(), sorted.end(), [](const auto* a, const auto* b) {
            if (a->ppl != b->ppl) return a->ppl > b->ppl;
            return a->doc_id < b->doc_id;
        });
        if (drop_n >= n) {
            for (const auto* s : sorted) dropped[s->doc_id] = true;
            continue;
        }
        // Ties at the boundary survive: only strictly-greater ppl is dropped.
        const double cutoff = sorted[drop_n]->ppl;
        for (size_t i = 0; i < drop_n; ++i) {
            if (sorted[i]->ppl > cutoff) dropped[sorted[i]->doc_id] = true;
        }
    }

    for (const PerplexityScore& s : scores) {
        if (dropped.count(s.doc_id)) {
            result.decisions.push_back(FilterDecision::drop(s.doc_id, "perplexity", "high_ppl"));
        } else {
            result.kept_ids.insert(s.doc_id);
            result.decisions.push_back(FilterDecision::keep(s.doc_id, "perplexity"));
        }
    }
    return result;
}

// --- persistence ---------------------------------------------------------

namespace {
constexpr char kModelMagic[4] = {'N', 'G', 'L', 'M'};
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

void NgramModel::save(const std::filesystem::path& file) const {
    std::ofstream out(file, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot open model file: " + file.string());
    out.write(kModelMagic, 4);
    put(out, kModelVersion);
    put(out, order_);
    put(out, k_);
    put(out, static_cast<uint64_t>(vocab_.size()));
    for (char32_t c : vocab_) put(out, static_cast<uint32_t>(c));
    put(out, static_cast<uint64_t>(counts_.size()));
    for (const auto& [ctx, table] : counts_) {  // std::map: sorted context records
        for (char32_t c : ctx) put(out, static_cast<uint32_t>(c));
        put(out, totals_.at(ctx));
        put(out, static_cast<uint64_t>(table.size()));
        for (const auto& [sym, count] : table) {
            put(out, static_cast<uint32_t>(sym));
            put(out, count);
        }
    }
    if (!out) throw DataError("write error: " + file.string());
}

NgramModel NgramModel::load(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw DataError("cannot open model file: " + file.string());
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kModelMagic, 4) != 0) {
        throw DataError("not an n-gram model file: " + file.string());
    }
    if (get<uint32_t>(in) != kModelVersion) {
        throw DataError("unsupported model version: " + file.string());
    }
    NgramModel m;
    m.order_ = get<uint32_t>(in);
    m.k_ = get<double>(in);
    const uint64_t vsize = get<uint64_t>(in);
    for (uint64_t i = 0; i < vsize; ++i) m.vocab_.insert(static_cast<char32_t>(get<uint32_t>(in)));
    const uint64_t ctx_count = get<uint64_t>(in);
    for (uint64_t i = 0; i < ctx_count; ++i) {
        std::u32string ctx;
        for (uint32_t j = 0; j + 1 < m.order_; ++j) {
            ctx.push_back(static_cast<char32_t>(get<uint32_t>(in)));
        }
        const uint64_t total = get<uint64_t>(in);
        const uint64_t entries = get<uint64_t>(in);
        auto& table = m.counts_[ctx];
        for (uint64_t e = 0; e < entries; ++e) {
            const char32_t sym = static_cast<char32_t>(get<uint32_t>(in));
            table[sym] = get<uint64_t>(in);
        }
        m.totals_[ctx] = total;
        if (!in) throw DataError("truncated model file: " + file.string());
    }
    return m;
}

}  // namespace curator
