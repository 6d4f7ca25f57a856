#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "curator/audit.hpp"
#include "curator/document.hpp"

namespace curator {

// extension -> language table. Detection is by extension only; unmapped
// extensions yield "unknown".
class ExtensionMap {
  public:
    static ExtensionMap defaults();

    // One "ext<TAB>language" pair per line; '#' starts a comment line.
    static ExtensionMap load(const std::filesystem::path& file);
    void save(const std::filesystem::path& file) const;

    void set(std::string ext, std::string language);

    // Language for a path, from its final extension (lowercased, no dot).
    std::string language_for(const std::filesystem::path& path) const;

  private:
    std::unordered_map<std::string, std::string> map_;
};

struct IngestStats {
    uint64_t emitted = 0;
    uint64_t skipped_binary = 0;      // NUL byte detected
    uint64_t skipped_unreadable = 0;  // IO error or malformed record
    uint64_t lossy_decoded = 0;
};

// Walk a directory tree and emit one Document per regular file, in
// lexicographic order of relative path. Unreadable files are skipped with a
// diagnostic; files containing NUL bytes are skipped as binary.
std::vector<Document> ingest_dir(const std::filesystem::path& root, const ExtensionMap& ext_map,
                                 IngestStats* stats = nullptr, AuditLog* audit = nullptr);

// Read a record-stream file: one JSON object per line with fields `path`,
// `content` and optional `lang`. Emission order is lexicographic by path.
std::vector<Document> read_corpus_jsonl(const std::filesystem::path& file,
                                        const ExtensionMap& ext_map,
                                        IngestStats* stats = nullptr, AuditLog* audit = nullptr);

// Write Documents in the same one-object-per-line format, adding `id`,
// `byte_size` and `line_count`.
void write_corpus_jsonl(std::ostream& out, std::span<const Document> docs);
void write_corpus_jsonl(const std::filesystem::path& file, std::span<const Document> docs);

}  // namespace curator
