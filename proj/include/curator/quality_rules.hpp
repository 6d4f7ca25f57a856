#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "curator/document.hpp"

namespace curator {

// --- language syntax tables ---------------------------------------------

struct StringDelim {
    std::string open;
    std::string close;
    bool escapes = true;    // backslash escapes the next character
    bool multiline = false; // survives newlines (backticks, raw strings)
};

struct LanguageSyntax {
    std::vector<std::string> line_comments;
    std::vector<std::pair<std::string, std::string>> block_comments;
    std::vector<StringDelim> strings;
    std::vector<std::string> branch_keywords;   // word tokens: if, for, ...
    std::vector<std::string> branch_operators;  // literal tokens: &&, ||, ?
};

// Per-language comment/string/branch syntax. Unlisted languages use the
// "default" entry (C-style comments, generic branch keywords).
class SyntaxTable {
  public:
    static SyntaxTable defaults();

    // Plain text, tab separated, one entry per line on top of the defaults:
    //   lang<TAB>line<TAB>marker
    //   lang<TAB>block<TAB>open<TAB>close
    //   lang<TAB>string<TAB>open<TAB>close[<TAB>raw|multiline]
    //   lang<TAB>kw<TAB>keyword
    //   lang<TAB>op<TAB>operator
    // The first entry for a language clears its inherited definition.
    static SyntaxTable load(const std::filesystem::path& file);

    const LanguageSyntax& for_language(const std::string& language) const;
    bool has_language(const std::string& language) const;

  private:
    std::map<std::string, LanguageSyntax> table_;
};

// Well-known third-party library names per language; fully user-replaceable.
class ImportRegistry {
  public:
    static ImportRegistry defaults();

    // Plain text: lang<TAB>name per line, replacing the defaults entirely.
    static ImportRegistry load(const std::filesystem::path& file);

    bool contains(const std::string& language, const std::string& name) const;
    size_t size() const;

  private:
    std::map<std::string, std::set<std::string>> by_lang_;
};

// --- source scanning ------------------------------------------------------

// One pass over the source classifying comments and strings.
//
// keyword_view blanks comments and string bodies (branch keywords are scanned
// here, so `s = "if"` never counts). import_view blanks comments only, since
// module names live inside string literals in several languages. Both views
// preserve byte positions and newlines.
//
// A line counts as a comment line when it overlaps a block-comment span or
// its first non-whitespace content starts a line comment.
struct ScanResult {
    std::string keyword_view;
    std::string import_view;
    uint64_t loc = 0;            // non-blank lines
    uint64_t comment_lines = 0;
};

ScanResult scan_source(std::string_view content, const LanguageSyntax& syntax);

// --- metrics ---------------------------------------------------------------

struct QualityMetrics {
    uint64_t loc = 0;
    double comment_ratio = 0.0;       // comment lines / non-blank lines; 0 when loc == 0
    double mean_chars_per_line = 0.0; // characters over all lines
    uint64_t known_import_count = 0;
    uint64_t complexity = 1;          // decision points + 1
    uint64_t standards_violations = 0;
    bool comment_syntax_known = true; // language had a comment-syntax entry
};

// Cyclomatic-style proxy: 1 + branch keywords/operators in the keyword view.
uint64_t complexity(const Document& doc, const SyntaxTable& syntax);

struct ImportScan {
    uint64_t count = 0;                // statements whose root is registered
    std::vector<std::string> names;    // sorted distinct matched roots
};

ImportScan third_party_imports(const Document& doc, const ImportRegistry& registry,
                               const SyntaxTable& syntax);

// Violations: trailing-whitespace lines, over-long lines, plus one file-level
// violation when both tab- and space-indentation appear.
uint64_t standards_check(const Document& doc, uint64_t max_line_len = 1000);

QualityMetrics compute_metrics(const Document& doc, const SyntaxTable& syntax,
                               const ImportRegistry& registry, uint64_t max_line_len = 1000);

// --- scoring ----------------------------------------------------------------

// 0 outside [zero_lo, zero_hi], 1 inside [one_lo, one_hi], linear in between.
struct Trapezoid {
    double zero_lo = 0.0;
    double one_lo = 0.0;
    double one_hi = 1.0;
    double zero_hi = 1.0;

    double operator()(double x) const;
};

struct RuleConfig {
    Trapezoid comment_ratio{0.0, 0.03, 0.5, 0.8};
    Trapezoid complexity{1.0, 2.0, 30.0, 60.0};
    Trapezoid mean_line{0.0, 10.0, 100.0, 200.0};
    double import_cap = 3.0;       // subscore = min(count, cap) / cap
    double standards_slope = 4.0;  // subscore = 1 - slope * violations / loc

    double w_comments = 0.25;
    double w_complexity = 0.25;
    double w_line_shape = 0.20;
    double w_imports = 0.15;
    double w_standards = 0.15;

    double keep_threshold = 0.3;  // keep documents scoring >= this

    void validate() const;  // throws ConfigError when weights do not sum to 1
};

struct RuleScore {
    double value = 0.0;                       // weighted mean in [0,1]
    std::map<std::string, double> components; // metric name -> subscore
};

RuleScore rule_score(const QualityMetrics& m, const RuleConfig& config);

}  // namespace curator
