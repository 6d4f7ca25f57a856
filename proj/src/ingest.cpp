#include "curator/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <ostream>

#include <json.hpp>

#include "curator/util.hpp"

namespace fs = std::filesystem;

namespace curator {

namespace {

// Covers the Table-1 style corpus languages plus common variants.
const std::pair<const char*, const char*> kDefaultExtensions[] = {
    {"py", "python"},       {"pyw", "python"},     {"md", "markdown"},
    {"markdown", "markdown"}, {"java", "java"},    {"js", "javascript"},
    {"mjs", "javascript"},  {"cjs", "javascript"}, {"jsx", "javascript"},
    {"php", "php"},         {"cpp", "cpp"},        {"cc", "cpp"},
    {"cxx", "cpp"},         {"hpp", "cpp"},        {"hh", "cpp"},
    {"hxx", "cpp"},         {"c", "c"},            {"h", "c"},
    {"cs", "c-sharp"},      {"go", "go"},          {"rs", "rust"},
    {"rb", "ruby"},         {"kt", "kotlin"},      {"kts", "kotlin"},
    {"swift", "swift"},     {"ts", "typescript"},  {"tsx", "typescript"},
    {"scala", "scala"},     {"lua", "lua"},        {"jl", "julia"},
    {"html", "html"},       {"htm", "html"},       {"sh", "shell"},
    {"bash", "shell"},      {"zsh", "shell"},      {"pl", "perl"},
    {"pm", "perl"},         {"css", "css"},        {"s", "assembly"},
    {"asm", "assembly"},    {"ps1", "powershell"}, {"json", "json"},
    {"r", "r"},             {"sql", "sql"},        {"dart", "dart"},
    {"tex", "tex"},         {"rst", "restructuredtext"}, {"hs", "haskell"},
    {"adb", "ada"},         {"ads", "ada"},        {"yaml", "yaml"},
    {"yml", "yaml"},        {"lisp", "common-lisp"}, {"lsp", "common-lisp"},
    {"pas", "pascal"},      {"mk", "makefile"},    {"jsp", "java-server-pages"},
    {"ml", "ocaml"},        {"mli", "ocaml"},      {"f90", "fortran"},
    {"f", "fortran"},       {"vb", "visual-basic"}, {"nb", "mathematica"},
    {"erl", "erlang"},      {"hrl", "erlang"},     {"vhd", "vhdl"},
    {"vhdl", "vhdl"},       {"ex", "elixir"},      {"exs", "elixir"},
    {"groovy", "groovy"},   {"st", "smalltalk"},   {"ipynb", "jupyter-scripts-dedup-filtered"},
    {"txt", "text"},
};

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

bool has_nul(std::string_view bytes) {
    return bytes.find('\0') != std::string_view::npos;
}

// Decode raw bytes, re-encoding lossily when invalid UTF-8 is found.
std::string sanitize_utf8(std::string&& raw, bool* lossy) {
    bool bad = false;
    std::u32string points = decode_utf8(raw, &bad);
    *lossy = bad;
    if (!bad) return std::move(raw);
    return encode_utf8(points);
}

Document finish_document(std::string path, std::string lang, std::string raw,
                         IngestStats* stats) {
    bool lossy = false;
    std::string content = sanitize_utf8(std::move(raw), &lossy);
    if (lossy && stats) ++stats->lossy_decoded;
    if (stats) ++stats->emitted;
    return make_document(std::move(path), std::move(lang), std::move(content), lossy);
}

}  // namespace

ExtensionMap ExtensionMap::defaults() {
    ExtensionMap m;
    for (const auto& [ext, lang] : kDefaultExtensions) m.map_[ext] = lang;
    return m;
}

ExtensionMap ExtensionMap::load(const fs::path& file) {
    ExtensionMap m;
    std::ifstream in(file);
    if (!in) throw ConfigError("cannot open extension map: " + file.string());
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        const size_t tab = line.find('\t');
        if (tab == std::string::npos) {
            throw ConfigError("extension map " + file.string() + ":" + std::to_string(lineno) +
                              ": expected ext<TAB>language");
        }
        m.map_[lower(line.substr(0, tab))] = line.substr(tab + 1);
    }
    return m;
}

void ExtensionMap::save(const fs::path& file) const {
    std::vector<std::pair<std::string, std::string>> entries(map_.begin(), map_.end());
    std::sort(entries.begin(), entries.end());
    std::string out;
    for (const auto& [ext, lang] : entries) {
        out += ext;
        out += '\t';
        out += lang;
        out += '\n';
    }
    write_file(file, out);
}

void ExtensionMap::set(std::string ext, std::string language) {
    map_[lower(std::move(ext))] = std::move(language);
}

std::string ExtensionMap::language_for(const fs::path& path) const {
    std::string ext = path.extension().string();
    if (!ext.empty() && ext[0] == '.') ext.erase(0, 1);
    ext = lower(ext);
    // Extensionless well-known filenames.
    if (ext.empty()) {
        const std::string name = lower(path.filename().string());
        if (name == "makefile") return "makefile";
        return "unknown";
    }
    auto it = map_.find(ext);
    return it != map_.end() ? it->second : "unknown";
}

std::vector<Document> ingest_dir(const fs::path& root, const ExtensionMap& ext_map,
                                 IngestStats* stats, AuditLog* audit) {
    if (!fs::is_directory(root)) throw DataError("not a directory: " + root.string());

    std::vector<std::pair<std::string, fs::path>> files;  // (relative path, absolute)
    for (const auto& entry : fs::recursive_directory_iterator(root)) {
        if (!entry.is_regular_file()) continue;
        files.emplace_back(fs::relative(entry.path(), root).generic_string(), entry.path());
    }
    // Lexicographic by relative path: the determinism anchor for first-wins dedup.
    std::sort(files.begin(), files.end());

    std::vector<Document> docs;
    docs.reserve(files.size());
    for (auto& [rel, abs] : files) {
        std::string raw;
        try {
            raw = read_file(abs);
        } catch (const DataError& e) {
            if (stats) ++stats->skipped_unreadable;
            if (audit) audit->diagnostic("unreadable_file", 0, rel);
            continue;
        }
        if (has_nul(raw)) {
            if (stats) ++stats->skipped_binary;
            if (audit) audit->diagnostic("binary_file", 0, rel);
            continue;
        }
        docs.push_back(finish_document(rel, ext_map.language_for(rel), std::move(raw), stats));
    }
    return docs;
}

std::vector<Document> read_corpus_jsonl(const fs::path& file, const ExtensionMap& ext_map,
                                        IngestStats* stats, AuditLog* audit) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw DataError("cannot open corpus file: " + file.string());

    std::vector<Document> docs;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object() || !j.contains("path") || !j.contains("content") ||
            !j["path"].is_string() || !j["content"].is_string()) {
            if (stats) ++stats->skipped_unreadable;
            if (audit) {
                audit->diagnostic("malformed_record", 0,
                                  file.filename().string() + ":" + std::to_string(lineno));
            }
            continue;
        }
        std::string path = j["path"].get<std::string>();
        std::string raw = j["content"].get<std::string>();
        if (has_nul(raw)) {
            if (stats) ++stats->skipped_binary;
            if (audit) audit->diagnostic("binary_file", 0, path);
            continue;
        }
        std::string lang;
        if (j.contains("lang") && j["lang"].is_string()) {
            lang = lower(j["lang"].get<std::string>());
        } else {
            lang = ext_map.language_for(path);
        }
        docs.push_back(finish_document(std::move(path), std::move(lang), std::move(raw), stats));
    }
    std::stable_sort(docs.begin(), docs.end(),
                     [](const Document& a, const Document& b) { return a.path < b.path; });
    return docs;
}

void write_corpus_jsonl(std::ostream& out, std::span<const Document> docs) {
    for (const Document& d : docs) {
        nlohmann::ordered_json j;
        j["path"] = d.path;
        j["lang"] = d.language;
        j["content"] = d.content;
        j["id"] = d.id;
        j["byte_size"] = d.byte_size;
        j["line_count"] = d.line_count;
        if (d.decode_lossy) j["decode_lossy"] = true;
        out << j.dump() << '\n';
    }
}

void write_corpus_jsonl(const fs::path& file, std::span<const Document> docs) {
    std::ofstream out(file, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot open output file: " + file.string());
    write_corpus_jsonl(out, docs);
}

}  // namespace curator
