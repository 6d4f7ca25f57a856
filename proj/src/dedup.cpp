#include "curator/dedup.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>
#include <unordered_map>
#include <unordered_set>

#include "curator/util.hpp"

namespace curator {

namespace {

constexpr char kTokenSep = '\x1f';

inline bool is_word_byte(unsigned char c) {
    return (c >= '0' && c <= '9') || (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') ||
           c >= 0x80;
}

inline bool is_space_byte(unsigned char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

// Per-permutation 64-bit keys derived from the run seed.
std::vector<uint64_t> permutation_keys(uint64_t seed, uint32_t count) {
    std::mt19937_64 rng(seed);
    std::vector<uint64_t> keys(count);
    for (auto& k : keys) k = rng();
    return keys;
}

uint64_t shingle_base_hash(std::span<const std::string_view> tokens) {
    uint64_t h = kFnvOffset64;
    for (std::string_view t : tokens) {
        h = fnv1a64(t, h);
        h ^= static_cast<unsigned char>(kTokenSep);
        h *= kFnvPrime64;
    }
    return h;
}

// Minimal union-find over dense indices.
class UnionFind {
  public:
    explicit UnionFind(size_t n) : parent_(n) {
        std::iota(parent_.begin(), parent_.end(), size_t{0});
    }
    size_t find(size_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }
    void unite(size_t a, size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        // Attach the later root under the earlier one so the representative
        // is always the smallest (earliest) index.
        if (a < b) parent_[b] = a;
        else parent_[a] = b;
    }

  private:
    std::vector<size_t> parent_;
};

}  // namespace

void LshParams::validate() const {
    if (permutations == 0 || bands == 0 || rows == 0) {
        throw ConfigError("LSH parameters must be positive");
    }
    if (static_cast<uint64_t>(bands) * rows != permutations) {
        throw ConfigError("LSH bands * rows must equal permutations");
    }
    if (jaccard_threshold < 0.0 || jaccard_threshold > 1.0) {
        throw ConfigError("jaccard_threshold must be in [0,1]");
    }
    if (shingle_width == 0) throw ConfigError("shingle_width must be positive");
}

std::vector<std::string_view> shingle_tokens(std::string_view content) {
    std::vector<std::string_view> tokens;
    size_t i = 0;
    const size_t n = content.size();
    while (i < n) {
        const unsigned char c = static_cast<unsigned char>(content[i]);
        if (is_space_byte(c)) {
            ++i;
            continue;
        }
        if (is_word_byte(c)) {
            size_t j = i + 1;
            while (j < n && is_word_byte(static_cast<unsigned char>(content[j]))) ++j;
            tokens.push_back(content.substr(i, j - i));
            i = j;
        } else {
            tokens.push_back(content.substr(i, 1));  // single punctuation mark
            ++i;
        }
    }
    return tokens;
}

std::set<std::string> shingle_set(const Document& doc, uint32_t shingle_width) {
    const auto tokens = shingle_tokens(doc.content);
    std::set<std::string> shingles;
    auto join = [](std::span<const std::string_view> window) {
        std::string s;
        for (std::string_view t : window) {
            s += t;
            s += kTokenSep;
        }
        return s;
    };
    if (tokens.size() < shingle_width) {
        if (!tokens.empty()) shingles.insert(join(tokens));
        return shingles;
    }
    for (size_t i = 0; i + shingle_width <= tokens.size(); ++i) {
        shingles.insert(join(std::span(tokens).subspan(i, shingle_width)));
    }
    return shingles;
}

MinHashSignature minhash_signature(const Document& doc, const LshParams& p) {
    p.validate();
    const auto tokens = shingle_tokens(doc.content);
    const auto keys = permutation_keys(p.seed, p.permutations);

    MinHashSignature sig;
    sig.shingle_width = p.shingle_width;
    sig.minima.assign(p.permutations, std::numeric_limits<uint64_t>::max());

    auto absorb = [&](std::span<const std::string_view> window) {
        const uint64_t base = shingle_base_hash(window);
        for (uint32_t i = 0; i < p.permutations; ++i) {
            const uint64_t h = splitmix64(base ^ keys[i]);
            if (h < sig.minima[i]) sig.minima[i] = h;
        }
    };

    if (tokens.size() < p.shingle_width) {
        sig.short_doc = true;
        if (!tokens.empty()) absorb(tokens);
        return sig;
    }
    for (size_t i = 0; i + p.shingle_width <= tokens.size(); ++i) {
        absorb(std::span(tokens).subspan(i, p.shingle_width));
    }
    return sig;
}

double estimated_jaccard(const MinHashSignature& a, const MinHashSignature& b) {
    if (a.minima.size() != b.minima.size() || a.minima.empty()) {
        throw ConfigError("signatures have mismatched permutation counts");
    }
    size_t agree = 0;
    for (size_t i = 0; i < a.minima.size(); ++i) {
        if (a.minima[i] == b.minima[i]) ++agree;
    }
    return static_cast<double>(agree) / static_cast<double>(a.minima.size());
}

double exact_jaccard(const std::set<std::string>& a, const std::set<std::string>& b) {
    if (a.empty() && b.empty()) return 0.0;
    size_t inter = 0;
    const std::set<std::string>& small = a.size() <= b.size() ? a : b;
    const std::set<std::string>& large = a.size() <= b.size() ? b : a;
    for (const auto& s : small) {
        if (large.count(s)) ++inter;
    }
    return static_cast<double>(inter) /
           static_cast<double>(a.size() + b.size() - inter);
}

std::vector<std::pair<uint64_t, uint64_t>> lsh_candidate_pairs(
    std::span<const std::pair<uint64_t, const MinHashSignature*>> signatures,
    const LshParams& p) {
    p.validate();
    for (const auto& [id, sig] : signatures) {
        if (sig->minima.size() != p.permutations) {
            throw ConfigError("signature length does not match LSH permutation count");
        }
    }

    std::set<std::pair<uint64_t, uint64_t>> pairs;
    std::unordered_map<uint64_t, std::vector<size_t>> buckets;
    buckets.reserve(signatures.size() * 2);

    for (uint32_t band = 0; band < p.bands; ++band) {
        buckets.clear();
        for (size_t idx = 0; idx < signatures.size(); ++idx) {
            const uint64_t* row = signatures[idx].second->minima.data() + band * p.rows;
            const std::string_view bytes(reinterpret_cast<const char*>(row),
                                         sizeof(uint64_t) * p.rows);
            buckets[fnv1a64(bytes)].push_back(idx);
        }
        for (const auto& [_, members] : buckets) {
            if (members.size() < 2) continue;
            for (size_t i = 0; i < members.size(); ++i) {
                for (size_t j = i + 1; j < members.size(); ++j) {
                    const auto& [id_a, sig_a] = signatures[members[i]];
                    const auto& [id_b, sig_b] = signatures[members[j]];
                    if (id_a == id_b) continue;
                    // Bucket hash can collide; require true row agreement.
                    if (!std::equal(sig_a->minima.begin() + band * p.rows,
                                    sig_a->minima.begin() + (band + 1) * p.rows,
                                    sig_b->minima.begin() + band * p.rows)) {
                        continue;
                    }
                    pairs.insert({std::min(id_a, id_b), std::max(id_a, id_b)});
                }
            }
        }
    }
    return {pairs.begin(), pairs.end()};
}

DedupResult exact_dedup(std::vector<Document> docs) {
    DedupResult result;
    result.decisions.reserve(docs.size());
    std::unordered_set<std::string> seen;
    seen.reserve(docs.size() * 2);
    for (Document& d : docs) {
        const Md5Digest digest = content_digest(d);
        const std::string key(digest.bytes.begin(), digest.bytes.end());
        if (seen.insert(key).second) {
            result.decisions.push_back(FilterDecision::keep(d.id, "exact_dedup"));
            result.kept.push_back(std::move(d));
        } else {
            result.decisions.push_back(FilterDecision::drop(d.id, "exact_dedup", "exact_dup"));
        }
    }
    return result;
}

DedupResult near_dedup(std::vector<Document> docs, const LshParams& p, bool exact_confirm) {
    p.validate();

    std::vector<MinHashSignature> sigs;
    sigs.reserve(docs.size());
    for (const Document& d : docs) sigs.push_back(minhash_signature(d, p));

    std::vector<std::pair<uint64_t, const MinHashSignature*>> keyed;
    keyed.reserve(docs.size());
    std::unordered_map<uint64_t, size_t> index_by_id;
    for (size_t i = 0; i < docs.size(); ++i) {
        keyed.emplace_back(docs[i].id, &sigs[i]);
        index_by_id[docs[i].id] = i;
    }

    const auto candidates = lsh_candidate_pairs(keyed, p);

    UnionFind uf(docs.size());
    std::unordered_map<size_t, std::set<std::string>> shingle_cache;
    auto shingles_of = [&](size_t idx) -> const std::set<std::string>& {
        auto it = shingle_cache.find(idx);
        if (it == shingle_cache.end()) {
            it = shingle_cache.emplace(idx, shingle_set(docs[idx], p.shingle_width)).first;
        }
        return it->second;
    };

    for (const auto& [id_a, id_b] : candidates) {
        const size_t ia = index_by_id.at(id_a);
        const size_t ib = index_by_id.at(id_b);
        const double sim = exact_confirm ? exact_jaccard(shingles_of(ia), shingles_of(ib))
                                         : estimated_jaccard(sigs[ia], sigs[ib]);
        if (sim >= p.jaccard_threshold) uf.unite(ia, ib);
    }

    DedupResult result;
    result.decisions.reserve(docs.size());
    for (size_t i = 0; i < docs.size(); ++i) {
        if (uf.find(i) == i) {
            result.decisions.push_back(FilterDecision::keep(docs[i].id, "near_dedup"));
            result.kept.push_back(std::move(docs[i]));
        } else {
            result.decisions.push_back(
                FilterDecision::drop(docs[i].id, "near_dedup", "near_dup"));
        }
    }
    return result;
}

namespace {
constexpr char kSigMagic[4] = {'C', 'S', 'I', 'G'};
constexpr uint32_t kSigVersion = 1;

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

void write_signatures(const std::filesystem::path& file,
                      std::span<const std::pair<uint64_t, MinHashSignature>> sigs,
                      const LshParams& p) {
    std::ofstream out(file, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot open signature file: " + file.string());
    out.write(kSigMagic, 4);
    put(out, kSigVersion);
    put(out, p.permutations);
    put(out, p.bands);
    put(out, p.rows);
    put(out, p.seed);
    put(out, p.shingle_width);
    put(out, static_cast<uint64_t>(sigs.size()));
    for (const auto& [id, sig] : sigs) {
        put(out, id);
        out.write(reinterpret_cast<const char*>(sig.minima.data()),
                  static_cast<std::streamsize>(sig.minima.size() * sizeof(uint64_t)));
    }
    if (!out) throw DataError("write error: " + file.string());
}

std::vector<std::pair<uint64_t, MinHashSignature>> read_signatures(
    const std::filesystem::path& file, LshParams* params_out) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw DataError("cannot open signature file: " + file.string());
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kSigMagic, 4) != 0) {
        throw DataError("not a signature file: " + file.string());
    }
    if (get<uint32_t>(in) != kSigVersion) {
        throw DataError("unsupported signature file version: " + file.string());
    }
    LshParams p;
    p.permutations = get<uint32_t>(in);
    p.bands = get<uint32_t>(in);
    p.rows = get<uint32_t>(in);
    p.seed = get<uint64_t>(in);
    p.shingle_width = get<uint32_t>(in);
    const uint64_t count = get<uint64_t>(in);
    std::vector<std::pair<uint64_t, MinHashSignature>> sigs;
    sigs.reserve(count);
    for (uint64_t i = 0; i < count; ++i) {
        const uint64_t id = get<uint64_t>(in);
        MinHashSignature sig;
        sig.shingle_width = p.shingle_width;
        sig.minima.resize(p.permutations);
        in.read(reinterpret_cast<char*>(sig.minima.data()),
                static_cast<std::streamsize>(sig.minima.size() * sizeof(uint64_t)));
        if (!in) throw DataError("truncated signature file: " + file.string());
        sigs.emplace_back(id, std::move(sig));
    }
    if (params_out) *params_out = p;
    return sigs;
}

}  // namespace curator
