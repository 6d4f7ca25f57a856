#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "curator/basic_filters.hpp"
#include "curator/dedup.hpp"
#include "curator/document.hpp"
#include "curator/learned_filter.hpp"
#include "curator/ngram_lm.hpp"
#include "curator/quality_rules.hpp"

namespace curator {

// Stage toggles. Order is fixed (ingest, language_volume, basic, exact_dedup,
// near_dedup, perplexity, rules, learned, fim, pack); stages can only be
// switched off, never reordered.
struct StageToggles {
    bool language_volume = true;
    bool basic = true;
    bool exact_dedup = true;
    bool near_dedup = true;
    bool perplexity = true;
    bool rules = true;
    bool learned = false;  // needs a trained classifier file
    bool fim = false;      // needs a vocabulary file
    bool pack = false;
};

struct PerplexityStageParams {
    uint32_t order = 4;
    double smoothing_k = 0.01;
    PerplexityFilterMode mode;          // percentile q=0.2 by default
    double train_sample_fraction = 1.0; // reference corpus = post-dedup sample
};

struct CombinedWeights {
    double rule = 0.4;
    double learned = 0.4;
    double perplexity = 0.2;  // applied to (1 - ppl percentile)
};

struct PipelineConfig {
    std::filesystem::path input;       // directory or JSONL corpus
    std::filesystem::path output_dir;
    uint64_t seed = 42;
    uint32_t workers = 1;

    StageToggles stages;
    BasicThresholds basic;
    LshParams lsh;
    bool lsh_exact_confirm = false;
    PerplexityStageParams perplexity;
    RuleConfig rules;
    std::filesystem::path classifier_model;  // required when stages.learned
    double learned_cutoff = 0.5;
    std::filesystem::path vocab_file;        // required when stages.fim/pack
    double fim_rate = 0.5;
    uint32_t context_length = 2048;
    bool pack_drop_remainder = true;
    uint32_t sequences_per_shard = 4096;
    CombinedWeights combined;

    std::filesystem::path ext_map_file;   // optional overrides
    std::filesystem::path syntax_file;
    std::filesystem::path registry_file;
    std::filesystem::path audit_file;     // defaults to output_dir/audit.jsonl

    static PipelineConfig from_json_file(const std::filesystem::path& file);
    void validate() const;  // throws ConfigError
};

// All per-document scores plus whatever stage flags accumulated.
struct QualityRecord {
    uint64_t doc_id = 0;
    std::string language;
    std::optional<double> rule_score;
    std::optional<double> ppl;
    std::optional<double> ppl_percentile;  // within language, in [0,1]
    std::optional<double> learned_prob;
    double combined = 0.0;
    std::vector<std::string> flags;
};

// Weighted mean of (rule_score, learned prob, 1 - ppl percentile); absent
// components have their weight renormalized away and are flagged.
double combined_score(const QualityRecord& record, const CombinedWeights& weights,
                      std::vector<std::string>* flags = nullptr);

// Rank of each record's ppl within its language as an ECDF-style fraction.
void attach_ppl_percentiles(std::span<QualityRecord> records);

struct ReportRow {
    std::string language;
    uint64_t before_bytes = 0;
    uint64_t before_files = 0;
    double before_prop = 0.0;
    uint64_t after_tokens = 0;
    uint64_t after_files = 0;
    double after_prop = 0.0;
};

struct RunReport {
    std::vector<ReportRow> rows;  // descending before_bytes
    std::map<std::string, std::map<std::string, uint64_t>> drops;  // stage -> reason -> n
    uint64_t input_docs = 0;
    uint64_t output_docs = 0;
    uint64_t skipped_binary = 0;
    uint64_t skipped_unreadable = 0;

    uint64_t total_drops() const;
    std::string render() const;        // aligned-column text
    std::string to_json() const;       // machine-readable
    static RunReport from_json_file(const std::filesystem::path& file);
};

struct PipelineOutcome {
    RunReport report;
    std::vector<Document> output;
    std::vector<QualityRecord> records;  // for every post-dedup document
};

// Runs the enabled stages in fixed order, writes corpus.jsonl, quality.jsonl,
// report.{json,txt}, the audit log and any shards under config.output_dir.
// Partial outputs are removed when a stage fails mid-run.
PipelineOutcome run_pipeline(const PipelineConfig& config);

// --- ablation ---------------------------------------------------------------

struct AblationInput {
    uint64_t doc_id = 0;
    uint64_t tokens = 0;
    double score = 0.0;
};

struct AblationResult {
    std::vector<uint64_t> random_ids;
    std::vector<uint64_t> filtered_ids;
    uint64_t random_tokens = 0;
    uint64_t filtered_tokens = 0;
    double random_mean_score = 0.0;
    double filtered_mean_score = 0.0;
    bool budget_clamped = false;  // budget exceeded the corpus total
};

// random: seeded uniform order; filtered: descending score. Both accumulate
// documents while the running token total is below the budget, so each lands
// within one document of it.
AblationResult ablation_split(std::span<const AblationInput> docs, uint64_t token_budget,
                              uint64_t seed);

// Whitespace-delimited token count (the budget unit when no vocabulary is
// configured).
uint64_t whitespace_tokens(std::string_view content);

// Quality records JSONL round trip (quality.jsonl).
void write_quality_jsonl(const std::filesystem::path& file,
                         std::span<const QualityRecord> records);
std::vector<QualityRecord> read_quality_jsonl(const std::filesystem::path& file);

}  // namespace curator
