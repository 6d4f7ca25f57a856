#pragma once

#include <cstdint>
#include <filesystem>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "curator/audit.hpp"
#include "curator/document.hpp"
#include "curator/md5.hpp"

namespace curator {

// MD5 of the raw content bytes; path plays no part.
inline Md5Digest content_digest(const Document& doc) { return md5(doc.content); }

struct LshParams {
    uint32_t permutations = 128;  // P
    uint32_t bands = 16;          // b
    uint32_t rows = 8;            // r, with b * r == P
    double jaccard_threshold = 0.85;
    uint32_t shingle_width = 5;  // tokens per shingle
    uint64_t seed = 0x5eed;

    void validate() const;  // throws ConfigError (b*r != P, threshold range, ...)
};

struct MinHashSignature {
    std::vector<uint64_t> minima;  // length P
    uint32_t shingle_width = 0;
    bool short_doc = false;  // fewer tokens than shingle_width; whole doc was one shingle
};

// Shingle tokens: maximal runs of alphanumerics (bytes >= 0x80 included, so
// multi-byte characters stay inside runs) plus single punctuation marks.
// Whitespace only separates.
std::vector<std::string_view> shingle_tokens(std::string_view content);

// The document's shingle set as joined token strings ('\x1f' separators).
// Exposed for exact-confirm mode; also what the signature hashes.
std::set<std::string> shingle_set(const Document& doc, uint32_t shingle_width);

MinHashSignature minhash_signature(const Document& doc, const LshParams& p);

// Fraction of agreeing coordinates; unbiased estimator of shingle Jaccard.
double estimated_jaccard(const MinHashSignature& a, const MinHashSignature& b);

// Exact Jaccard between two shingle sets (the quantity MinHash estimates).
double exact_jaccard(const std::set<std::string>& a, const std::set<std::string>& b);

// Pairs agreeing on all r rows of at least one band, deduplicated and sorted.
// Throws ConfigError on mismatched signature lengths.
std::vector<std::pair<uint64_t, uint64_t>> lsh_candidate_pairs(
    std::span<const std::pair<uint64_t, const MinHashSignature*>> signatures,
    const LshParams& p);

struct DedupResult {
    std::vector<Document> kept;
    std::vector<FilterDecision> decisions;  // one per input document
};

// First occurrence per content digest wins; input order is canonical.
DedupResult exact_dedup(std::vector<Document> docs);

// LSH candidates whose similarity clears the threshold are clustered
// (union-find); the earliest cluster member survives. When exact_confirm is
// set, similarity is the exact shingle Jaccard instead of the signature
// estimate.
DedupResult near_dedup(std::vector<Document> docs, const LshParams& p,
                       bool exact_confirm = false);

// Binary sidecar: header (P, b, r, seed, shingle_width), then fixed-width
// records of doc_id + P x 8-byte minima.
void write_signatures(const std::filesystem::path& file,
                      std::span<const std::pair<uint64_t, MinHashSignature>> sigs,
                      const LshParams& p);
std::vector<std::pair<uint64_t, MinHashSignature>> read_signatures(
    const std::filesystem::path& file, LshParams* params_out = nullptr);

}  // namespace curator
