#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "curator/document.hpp"
#include "curator/tokenizer.hpp"

namespace curator {

// Deterministic xorshift-free RNG built on splitmix64; identical streams on
// every platform, unlike std distributions.
class DetRng {
  public:
    explicit DetRng(uint64_t seed) : state_(seed) {}

    uint64_t next() {
        state_ += 0x9e3779b97f4a7c15ULL;
        uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    double next_double() {  // [0, 1)
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }
    uint64_t next_below(uint64_t n) { return n == 0 ? 0 : next() % n; }

  private:
    uint64_t state_;
};

struct FimExample {
    uint64_t doc_id = 0;
    bool applied = false;
    bool degenerate = false;  // document shorter than 3 characters
    std::string prefix, middle, suffix;  // original-order spans
    std::vector<uint32_t> serialized;    // PSM token ids, or the plain document
};

// With probability `rate` (seeded per document from run_seed and doc id),
// split at two uniform character positions and serialize as
// <fim_prefix> prefix <fim_suffix> suffix <fim_middle> middle.
// prefix+middle+suffix always reconstructs the document exactly.
// Throws ConfigError when the vocabulary lacks the FIM sentinels.
FimExample fim_transform(const Document& doc, double rate, uint64_t run_seed,
                         const Vocabulary& vocab);

struct PackSpan {
    uint64_t doc_id = 0;  // 0 marks padding
    uint32_t start = 0;
    uint32_t end = 0;  // [start, end) within the window
};

struct PackedSequence {
    std::vector<uint32_t> ids;     // exactly L tokens
    std::vector<PackSpan> spans;   // tile [0, L) without overlap
    bool padded = false;
};

struct PackResult {
    std::vector<PackedSequence> sequences;
    uint64_t input_tokens = 0;    // document tokens + one separator each
    uint64_t dropped_tokens = 0;  // final partial window under drop policy
};

// Concatenates (ids + end_token) per document and slices into L-token
// windows. The final partial window is padded with end_token (flagged) or
// dropped, per drop_remainder.
PackResult pack_sequences(std::span<const std::pair<uint64_t, std::vector<uint32_t>>> examples,
                          uint32_t context_length, uint32_t end_token, bool drop_remainder);

// Binary shard: header (L, vocabulary hash, shard index), then seq_count
// fixed-width rows of L token ids. Provenance sidecar (<file>.prov.jsonl)
// carries one record per sequence with its spans.
void write_shard(const std::filesystem::path& file, std::span<const PackedSequence> seqs,
                 uint32_t context_length, uint64_t vocab_hash, uint32_t shard_index);

struct ShardHeader {
    uint32_t context_length = 0;
    uint64_t vocab_hash = 0;
    uint32_t shard_index = 0;
};

std::vector<PackedSequence> read_shard(const std::filesystem::path& file,
                                       ShardHeader* header = nullptr);

}  // namespace curator
