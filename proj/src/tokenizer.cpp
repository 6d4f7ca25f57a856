#include "curator/tokenizer.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "curator/util.hpp"

namespace curator {

namespace {

std::string escape_token(std::string_view raw) {
    std::string out;
    for (unsigned char c : raw) {
        if (c == '\\') {
            out += "\\\\";
        } else if (c >= 0x21 && c <= 0x7E) {
            out.push_back(static_cast<char>(c));
        } else if (c == ' ') {
            out += "\\s";
        } else {
            static const char* digits = "0123456789abcdef";
            out += "\\x";
            out.push_back(digits[c >> 4]);
            out.push_back(digits[c & 0xF]);
        }
    }
    return out;
}

std::string unescape_token(std::string_view esc, const std::string& where) {
    std::string out;
    size_t i = 0;
    auto hexval = [&](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        return -1;
    };
    while (i < esc.size()) {
        if (esc[i] != '\\') {
            out.push_back(esc[i]);
            ++i;
            continue;
        }
        if (i + 1 >= esc.size()) throw DataError("bad escape in " + where);
        const char kind = esc[i + 1];
        if (kind == '\\') {
            out.push_back('\\');
            i += 2;
        } else if (kind == 's') {
            out.push_back(' ');
            i += 2;
        } else if (kind == 'x') {
            if (i + 3 >= esc.size()) throw DataError("bad \\x escape in " + where);
            const int hi = hexval(esc[i + 2]);
            const int lo = hexval(esc[i + 3]);
            if (hi < 0 || lo < 0) throw DataError("bad \\x escape in " + where);
            out.push_back(static_cast<char>((hi << 4) | lo));
            i += 4;
        } else {
            throw DataError("unknown escape in " + where);
        }
    }
    return out;
}

}  // namespace

std::vector<std::string> default_specials() {
    std::vector<std::string> s = {"<fim_prefix>", "<fim_middle>", "<fim_suffix>", "<pad>",
                                  "<eod>"};
    for (int i = 5; i < 20; ++i) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "<reserved_%02d>", i);
        s.push_back(buf);
    }
    return s;
}

Vocabulary Vocabulary::byte_fallback() {
    std::vector<std::string> tokens;
    tokens.reserve(256);
    for (int b = 0; b < 256; ++b) tokens.push_back(std::string(1, static_cast<char>(b)));
    return from_tokens(std::move(tokens), {});
}

Vocabulary Vocabulary::from_tokens(std::vector<std::string> tokens,
                                   std::vector<std::string> specials) {
    Vocabulary v;
    v.tokens_ = std::move(tokens);
    v.specials_ = std::move(specials);

    std::set<std::string_view> seen;
    for (const auto& t : v.tokens_) {
        if (t.empty()) throw ConfigError("empty token in vocabulary");
        if (!seen.insert(t).second) throw ConfigError("duplicate token in vocabulary");
    }
    for (const auto& s : v.specials_) {
        if (seen.count(s)) {
            throw ConfigError("special token collides with a content token: " + s);
        }
        if (!seen.insert(s).second) throw ConfigError("duplicate special token: " + s);
    }
    v.rebuild_index();
    return v;
}

void Vocabulary::rebuild_index() {
    index_.clear();
    index_.reserve(tokens_.size() * 2);
    max_token_len_ = 0;
    for (uint32_t id = 0; id < tokens_.size(); ++id) {
        index_.emplace(tokens_[id], id);
        max_token_len_ = std::max(max_token_len_, tokens_[id].size());
    }
}

std::optional<uint32_t> Vocabulary::special_id(std::string_view name) const {
    for (uint32_t i = 0; i < specials_.size(); ++i) {
        if (specials_[i] == name) return static_cast<uint32_t>(tokens_.size()) + i;
    }
    return std::nullopt;
}

std::vector<uint32_t> Vocabulary::encode(std::string_view text) const {
    std::vector<uint32_t> out;
    out.reserve(text.size() / 3 + 1);
    size_t i = 0;
    while (i < text.size()) {
        const size_t limit = std::min(max_token_len_, text.size() - i);
        uint32_t id = 0;
        size_t matched = 0;
        for (size_t len = limit; len >= 1; --len) {
            auto it = index_.find(text.substr(i, len));
            if (it != index_.end()) {
                id = it->second;
                matched = len;
                break;
            }
        }
        if (matched == 0) {
            throw DataError("vocabulary lacks byte fallback for input at offset " +
                            std::to_string(i));
        }
        out.push_back(id);
        i += matched;
    }
    return out;
}

std::string Vocabulary::decode(std::span<const uint32_t> ids) const {
    std::string out;
    for (uint32_t id : ids) {
        if (id < tokens_.size()) {
            out += tokens_[id];
        } else if (id < size()) {
            out += specials_[id - tokens_.size()];
        } else {
            throw DataError("token id out of range: " + std::to_string(id));
        }
    }
    return out;
}

uint64_t Vocabulary::content_hash() const {
    uint64_t h = kFnvOffset64;
    for (const auto& t : tokens_) {
        h = fnv1a64(t, h);
        h = splitmix64(h);
    }
    h = splitmix64(h ^ 0x905ec1a15ULL);  // separates tokens from specials
    for (const auto& s : specials_) {
        h = fnv1a64(s, h);
        h = splitmix64(h);
    }
    return h;
}

void Vocabulary::save(const std::filesystem::path& file) const {
    std::ostringstream out;
    out << "# curator vocabulary v1\n";
    for (const auto& t : tokens_) out << escape_token(t) << '\n';
    out << "%%specials\n";
    for (const auto& s : specials_) out << escape_token(s) << '\n';
    write_file(file, out.str());
}

Vocabulary Vocabulary::load(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw DataError("cannot open vocabulary: " + file.string());
    std::string line;
    if (!std::getline(in, line) || line.rfind("# curator vocabulary", 0) != 0) {
        throw DataError("not a vocabulary file: " + file.string());
    }
    std::vector<std::string> tokens, specials;
    bool in_specials = false;
    size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line == "%%specials") {
            in_specials = true;
            continue;
        }
        const std::string where = file.string() + ":" + std::to_string(lineno);
        (in_specials ? specials : tokens).push_back(unescape_token(line, where));
    }
    return from_tokens(std::move(tokens), std::move(specials));
}

// --- BPE training -----------------------------------------------------------

namespace {

// Linked-list node in a flat arena; sequences never link across documents.
struct BpeNode {
    int32_t sym;
    int32_t prev;
    int32_t next;
};

inline uint64_t pair_key(int32_t a, int32_t b) {
    return (static_cast<uint64_t>(static_cast<uint32_t>(a)) << 32) |
           static_cast<uint32_t>(b);
}

}  // namespace

Vocabulary train_bpe(std::span<const Document> corpus, size_t target_size,
                     std::vector<std::string> specials) {
    if (corpus.empty()) throw ConfigError("BPE training corpus is empty");
    if (target_size < 256) throw ConfigError("BPE target size must be >= 256");

    std::vector<std::string> token_bytes;
    token_bytes.reserve(target_size);
    for (int b = 0; b < 256; ++b) token_bytes.push_back(std::string(1, static_cast<char>(b)));

    // Build the node arena.
    std::vector<BpeNode> nodes;
    {
        size_t total = 0;
        for (const auto& d : corpus) total += d.content.size();
        nodes.reserve(total);
    }
    std::unordered_map<uint64_t, int64_t> pair_count;
    std::unordered_map<uint64_t, std::vector<int32_t>> pair_pos;

    auto count_pair = [&](int32_t left_node) {
        const BpeNode& n = nodes[left_node];
        const uint64_t key = pair_key(n.sym, nodes[n.next].sym);
        pair_count[key] += 1;
        pair_pos[key].push_back(left_node);
    };

    for (const auto& d : corpus) {
        const int32_t base = static_cast<int32_t>(nodes.size());
        const int32_t len = static_cast<int32_t>(d.content.size());
        for (int32_t i = 0; i < len; ++i) {
            nodes.push_back({static_cast<int32_t>(static_cast<unsigned char>(d.content[i])),
                             i > 0 ? base + i - 1 : -1,
                             i + 1 < len ? base + i + 1 : -1});
        }
        for (int32_t i = 0; i + 1 < len; ++i) count_pair(base + i);
    }

    Vocabulary result;
    bool undersized = false;
    while (token_bytes.size() < target_size) {
        // Highest count; ties to the lexicographically smallest byte pair.
        int64_t best_count = 0;
        uint64_t best_key = 0;
        for (const auto& [key, count] : pair_count) {
            if (count <= 0) continue;
            if (count > best_count) {
                best_count = count;
                best_key = key;
            } else if (count == best_count) {
                const auto& bl = token_bytes[static_cast<int32_t>(best_key >> 32)];
                const auto& br = token_bytes[static_cast<int32_t>(best_key & 0xffffffff)];
                const auto& cl = token_bytes[static_cast<int32_t>(key >> 32)];
                const auto& cr = token_bytes[static_cast<int32_t>(key & 0xffffffff)];
                if (std::tie(cl, cr) < std::tie(bl, br)) best_key = key;
            }
        }
        if (best_count < 2) {
            undersized = true;
            break;
        }

        const int32_t left_sym = static_cast<int32_t>(best_key >> 32);
        const int32_t right_sym = static_cast<int32_t>(best_key & 0xffffffff);
        const int32_t merged_sym = static_cast<int32_t>(token_bytes.size());
        token_bytes.push_back(token_bytes[left_sym] + token_bytes[right_sym]);

        // Consume the occurrence list; stale entries fail the validity check.
        std::vector<int32_t> occurrences = std::move(pair_pos[best_key]);
        pair_pos.erase(best_key);
        for (int32_t ni : occurrences) {
            BpeNode& n = nodes[ni];
            if (n.sym != left_sym || n.next < 0) continue;
            BpeNode& m = nodes[n.next];
            if (m.sym != right_sym) continue;

            // Neighbor pair counts around the merge site.
            if (n.prev >= 0) pair_count[pair_key(nodes[n.prev].sym, n.sym)] -= 1;
            if (m.next >= 0) pair_count[pair_key(m.sym, nodes[m.next].sym)] -= 1;
            pair_count[best_key] -= 1;

            const int32_t after = m.next;
            m.sym = -1;  // dead
            n.sym = merged_sym;
            n.next = after;
            if (after >= 0) nodes[after].prev = ni;

            if (n.prev >= 0) count_pair(n.prev);
            if (n.next >= 0) count_pair(ni);
        }
        pair_count.erase(best_key);
    }

    result = Vocabulary::from_tokens(std::move(token_bytes), std::move(specials));
    result.undersized = undersized;
    return result;
}

Vocabulary merge_vocab(const Vocabulary& a, const Vocabulary& b,
                       std::vector<std::string> specials) {
    struct Entry {
        size_t best_rank;
        int source;  // 0 = a (wins ties), 1 = b
        const std::string* token;
    };
    std::unordered_map<std::string_view, size_t> rank_a;
    for (size_t i = 0; i < a.tokens().size(); ++i) rank_a.emplace(a.tokens()[i], i);

    std::vector<Entry> entries;
    entries.reserve(a.tokens().size() + b.tokens().size());
    for (size_t i = 0; i < a.tokens().size(); ++i) entries.push_back({i, 0, &a.tokens()[i]});
    for (size_t i = 0; i < b.tokens().size(); ++i) {
        const auto it = rank_a.find(b.tokens()[i]);
        if (it != rank_a.end()) continue;  // duplicate collapses to a's entry
        entries.push_back({i, 1, &b.tokens()[i]});
    }
    std::sort(entries.begin(), entries.end(), [](const Entry& x, const Entry& y) {
        if (x.best_rank != y.best_rank) return x.best_rank < y.best_rank;
        return x.source < y.source;
    });

    std::vector<std::string> tokens;
    tokens.reserve(entries.size());
    for (const Entry& e : entries) tokens.push_back(*e.token);
    return Vocabulary::from_tokens(std::move(tokens), std::move(specials));
}

// --- compression -------------------------------------------------------------

CompressionReport compression_rate(const Vocabulary& v, std::span<const Document> corpus) {
    std::map<std::string, std::pair<uint64_t, uint64_t>> by_domain;  // chars, tokens
    for (const Document& d : corpus) {
        auto& [chars, tokens] = by_domain[d.language];
        chars += utf8_length(d.content);
        tokens += v.encode(d.content).size();
    }

    CompressionReport r;
    for (const auto& [domain, ct] : by_domain) {
        const auto [chars, tokens] = ct;
        if (chars == 0 || tokens == 0) {
            r.empty_domains.push_back(domain);
            continue;
        }
        r.entries.push_back(
            {domain, chars, tokens, static_cast<double>(chars) / static_cast<double>(tokens)});
        r.total_chars += chars;
        r.total_tokens += tokens;
    }
    r.total_rate = r.total_tokens > 0 ? static_cast<double>(r.total_chars) /
                                            static_cast<double>(r.total_tokens)
                                      : 0.0;
    return r;
}

std::string CompressionReport::render() const {
    std::ostringstream out;
    // Rates are characters per token (Unicode scalar values, not bytes).
    out << "domain              chars        tokens       rate\n";
    char buf[128];
    for (const auto& e : entries) {
        std::snprintf(buf, sizeof(buf), "%-18s %-12llu %-12llu %.4f\n", e.domain.c_str(),
                      static_cast<unsigned long long>(e.chars),
                      static_cast<unsigned long long>(e.tokens), e.rate);
        out << buf;
    }
    std::snprintf(buf, sizeof(buf), "%-18s %-12llu %-12llu %.4f\n", "total",
                  static_cast<unsigned long long>(total_chars),
                  static_cast<unsigned long long>(total_tokens), total_rate);
    out << buf;
    for (const auto& d : empty_domains) out << "warning: empty domain omitted: " << d << "\n";
    return out.str();
}

}  // namespace curator
