#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "curator/document.hpp"

namespace curator {

// Ranked token inventory with greedy longest-match encoding.
//
// Content token ids are [0, tokens.size()) in rank order (most frequent
// first); special ids follow. Trained vocabularies always contain all 256
// single-byte tokens, so encode() is total on them; encode() throws DataError
// when a synthetic vocabulary lacks the needed fallback.
class Vocabulary {
  public:
    Vocabulary() = default;

    // 256 single-byte tokens, no merges.
    static Vocabulary byte_fallback();

    // Arbitrary ranked token list (specials appended). Throws ConfigError on
    // duplicate tokens or special/content collisions.
    static Vocabulary from_tokens(std::vector<std::string> tokens,
                                  std::vector<std::string> specials);

    const std::vector<std::string>& tokens() const { return tokens_; }
    const std::vector<std::string>& specials() const { return specials_; }
    size_t size() const { return tokens_.size() + specials_.size(); }

    std::optional<uint32_t> special_id(std::string_view name) const;

    // Greedy longest-match left to right over the content token set.
    std::vector<uint32_t> encode(std::string_view text) const;

    // Concatenated token bytes; special ids emit their names. Throws
    // DataError on an id outside the vocabulary.
    std::string decode(std::span<const uint32_t> ids) const;

    uint64_t content_hash() const;

    // Plain text: one escaped token per line, specials after a "%%specials"
    // marker line.
    void save(const std::filesystem::path& file) const;
    static Vocabulary load(const std::filesystem::path& file);

    // Set when train_bpe stopped before reaching its target size.
    bool undersized = false;

  private:
    void rebuild_index();

    std::vector<std::string> tokens_;
    std::vector<std::string> specials_;

    struct StringHash {
        using is_transparent = void;
        size_t operator()(std::string_view s) const {
            return std::hash<std::string_view>{}(s);
        }
    };
    std::unordered_map<std::string, uint32_t, StringHash, std::equal_to<>> index_;
    size_t max_token_len_ = 0;
};

// The 20 reserved sentinels: FIM triple, padding, end-of-document, spares.
std::vector<std::string> default_specials();

// Byte-level BPE: start from the 256 byte tokens and merge the most frequent
// adjacent pair until the content token count reaches target_size. Ties break
// to the lexicographically smallest (left, right) byte pair. Stops early with
// the `undersized` flag when no pair occurs at least twice.
Vocabulary train_bpe(std::span<const Document> corpus, size_t target_size,
                     std::vector<std::string> specials = {});

// Token set union; rank = best rank across sources, ties to a. Specials are
// appended; a special colliding with a content token is a hard error.
Vocabulary merge_vocab(const Vocabulary& a, const Vocabulary& b,
                       std::vector<std::string> specials);

struct CompressionReport {
    struct Entry {
        std::string domain;
        uint64_t chars = 0;   // Unicode scalar values
        uint64_t tokens = 0;
        double rate = 0.0;    // chars / tokens
    };
    std::vector<Entry> entries;            // sorted by domain tag
    uint64_t total_chars = 0;
    uint64_t total_tokens = 0;
    double total_rate = 0.0;               // character-weighted
    std::vector<std::string> empty_domains;  // omitted from entries

    std::string render() const;  // aligned-column text
};

// Documents are grouped by their language tag as the domain.
CompressionReport compression_rate(const Vocabulary& v, std::span<const Document> corpus);

}  // namespace curator
