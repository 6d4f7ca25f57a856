#include "curator/fim_pack.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>

#include <json.hpp>

#include "curator/util.hpp"

namespace curator {

FimExample fim_transform(const Document& doc, double rate, uint64_t run_seed,
                         const Vocabulary& vocab) {
    if (rate < 0.0 || rate > 1.0) throw ConfigError("FIM rate must be in [0,1]");
    const auto pre_id = vocab.special_id("<fim_prefix>");
    const auto mid_id = vocab.special_id("<fim_middle>");
    const auto suf_id = vocab.special_id("<fim_suffix>");
    if (!pre_id || !mid_id || !suf_id) {
        throw ConfigError("vocabulary lacks FIM sentinel tokens");
    }

    FimExample ex;
    ex.doc_id = doc.id;

    DetRng rng(splitmix64(run_seed ^ doc.id));
    const bool want = rng.next_double() < rate;

    const std::u32string points = decode_utf8(doc.content);
    if (points.size() < 3) {
        ex.degenerate = true;
        ex.applied = false;
        ex.prefix = doc.content;
        ex.serialized = vocab.encode(doc.content);
        return ex;
    }
    if (!want) {
        ex.applied = false;
        ex.prefix = doc.content;
        ex.serialized = vocab.encode(doc.content);
        return ex;
    }

    // Two uniform character split points, sorted; spans may be empty.
    const uint64_t n = points.size();
    uint64_t i = rng.next_below(n + 1);
    uint64_t j = rng.next_below(n + 1);
    if (i > j) std::swap(i, j);

    ex.applied = true;
    ex.prefix = encode_utf8(std::u32string_view(points).substr(0, i));
    ex.middle = encode_utf8(std::u32string_view(points).substr(i, j - i));
    ex.suffix = encode_utf8(std::u32string_view(points).substr(j));

    ex.serialized.push_back(*pre_id);
    for (uint32_t t : vocab.encode(ex.prefix)) ex.serialized.push_back(t);
    ex.serialized.push_back(*suf_id);
    for (uint32_t t : vocab.encode(ex.suffix)) ex.serialized.push_back(t);
    ex.serialized.push_back(*mid_id);
    for (uint32_t t : vocab.encode(ex.middle)) ex.serialized.push_back(t);
    return ex;
}

PackResult pack_sequences(std::span<const std::pair<uint64_t, std::vector<uint32_t>>> examples,
                          uint32_t context_length, uint32_t end_token, bool drop_remainder) {
    if (context_length == 0) throw ConfigError("context length must be positive");
    const uint32_t L = context_length;

    PackResult result;
    PackedSequence current;
    current.ids.reserve(L);
    uint64_t span_start = 0;

    auto close_span = [&](uint64_t doc_id) {
        const uint64_t end = current.ids.size();
        if (end > span_start) {
            current.spans.push_back({doc_id, static_cast<uint32_t>(span_start),
                                     static_cast<uint32_t>(end)});
        }
        span_start = end;
    };
    auto flush_full = [&]() {
        result.sequences.push_back(std::move(current));
        current = PackedSequence{};
        current.ids.reserve(L);
        span_start = 0;
    };

    for (const auto& [doc_id, ids] : examples) {
        result.input_tokens += ids.size() + 1;
        size_t offset = 0;
        const size_t total = ids.size() + 1;  // trailing end_token
        while (offset < total) {
            const size_t room = L - current.ids.size();
            const size_t take = std::min(room, total - offset);
            for (size_t k = 0; k < take; ++k) {
                const size_t idx = offset + k;
                current.ids.push_back(idx < ids.size() ? ids[idx] : end_token);
            }
            offset += take;
            close_span(doc_id);
            if (current.ids.size() == L) flush_full();
        }
    }

    if (!current.ids.empty()) {
        if (drop_remainder) {
            result.dropped_tokens = current.ids.size();
        } else {
            close_span(0);  // ensure prior spans are closed (no-op here)
            const uint64_t pad_from = current.ids.size();
            while (current.ids.size() < L) current.ids.push_back(end_token);
            current.spans.push_back({0, static_cast<uint32_t>(pad_from), L});
            current.padded = true;
            result.sequences.push_back(std::move(current));
        }
    }
    return result;
}

// --- shard IO -----------------------------------------------------------------

namespace {
constexpr char kShardMagic[4] = {'P', 'A', 'C', 'K'};
constexpr uint32_t kShardVersion = 1;

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

void write_shard(const std::filesystem::path& file, std::span<const PackedSequence> seqs,
                 uint32_t context_length, uint64_t vocab_hash, uint32_t shard_index) {
    std::ofstream out(file, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot open shard file: " + file.string());
    out.write(kShardMagic, 4);
    put(out, kShardVersion);
    put(out, context_length);
    put(out, vocab_hash);
    put(out, shard_index);
    put(out, static_cast<uint64_t>(seqs.size()));
    for (const auto& s : seqs) {
        if (s.ids.size() != context_length) {
            throw DataError("packed sequence length mismatch in shard write");
        }
        out.write(reinterpret_cast<const char*>(s.ids.data()),
                  static_cast<std::streamsize>(s.ids.size() * sizeof(uint32_t)));
    }
    if (!out) throw DataError("write error: " + file.string());

    std::ofstream prov(file.string() + ".prov.jsonl", std::ios::binary | std::ios::trunc);
    if (!prov) throw DataError("cannot open provenance sidecar for " + file.string());
    for (size_t i = 0; i < seqs.size(); ++i) {
        nlohmann::ordered_json j;
        j["seq"] = i;
        if (seqs[i].padded) j["padded"] = true;
        auto& spans = j["spans"] = nlohmann::json::array();
        for (const auto& sp : seqs[i].spans) {
            spans.push_back({{"doc_id", sp.doc_id}, {"start", sp.start}, {"end", sp.end}});
        }
        prov << j.dump() << '\n';
    }
}

std::vector<PackedSequence> read_shard(const std::filesystem::path& file,
                                       ShardHeader* header) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw DataError("cannot open shard file: " + file.string());
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kShardMagic, 4) != 0) {
        throw DataError("not a shard file: " + file.string());
    }
    if (get<uint32_t>(in) != kShardVersion) {
        throw DataError("unsupported shard version: " + file.string());
    }
    ShardHeader h;
    h.context_length = get<uint32_t>(in);
    h.vocab_hash = get<uint64_t>(in);
    h.shard_index = get<uint32_t>(in);
    const uint64_t count = get<uint64_t>(in);
    std::vector<PackedSequence> seqs(count);
    for (auto& s : seqs) {
        s.ids.resize(h.context_length);
        in.read(reinterpret_cast<char*>(s.ids.data()),
                static_cast<std::streamsize>(s.ids.size() * sizeof(uint32_t)));
        if (!in) throw DataError("truncated shard file: " + file.string());
    }
    if (header) *header = h;
    return seqs;
}

}  // namespace curator
