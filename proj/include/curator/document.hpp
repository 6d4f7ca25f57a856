#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace curator {

// One source file flowing through the pipeline. Immutable after creation;
// safe to share across workers.
struct Document {
    uint64_t id = 0;           // deterministic: derived from content digest + path
    std::string path;          // relative path, '/' separators
    std::string language;      // lowercase tag, "unknown" allowed
    std::string content;       // valid UTF-8 (lossy-decoded when flagged)
    uint64_t byte_size = 0;    // bytes of content
    uint64_t line_count = 0;   // newline-delimited lines, final partial counts as one
    bool decode_lossy = false; // replacement characters were substituted on ingest
};

// Builds a Document with id/byte_size/line_count derived from the inputs.
Document make_document(std::string path, std::string language, std::string content,
                       bool decode_lossy = false);

struct LanguageStats {
    std::string language;
    uint64_t total_bytes = 0;
    uint64_t file_count = 0;
    double proportion = 0.0;  // of total corpus bytes, in [0,1]
};

// One entry per distinct language, ordered by descending total_bytes
// (ties by language tag). Proportions sum to 1 when the corpus is non-empty.
std::vector<LanguageStats> collect_language_stats(std::span<const Document> docs);

}  // namespace curator
