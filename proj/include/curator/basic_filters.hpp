#pragma once

#include <cstdint>
#include <set>
#include <span>
#include <string>

#include "curator/audit.hpp"
#include "curator/document.hpp"

namespace curator {

struct BasicThresholds {
    uint64_t max_line_len = 1000;           // characters
    double max_mean_line_len = 100.0;       // characters
    double min_alpha_frac = 0.25;           // letters / non-newline characters
    uint64_t min_language_bytes = 100'000'000;  // languages below this are cut

    void validate() const;  // throws ConfigError
};

struct LineMetrics {
    uint64_t max_line_len = 0;
    double mean_line_len = 0.0;
    double alpha_frac = 0.0;
};

// Metrics over newline-split lines. Lengths count Unicode scalar values;
// alpha_frac = letters / all non-newline characters. Empty document -> zeros.
LineMetrics line_metrics(const Document& doc);

// kept iff max_line_len <= t.max AND mean <= t.max_mean AND alpha >= t.min;
// reason names the first violated rule in that order. Pure in (doc, t).
FilterDecision apply_basic_filters(const Document& doc, const BasicThresholds& t);

// Languages whose total volume clears the gate (boundary inclusive).
std::set<std::string> language_volume_filter(std::span<const LanguageStats> stats,
                                             const BasicThresholds& t);

}  // namespace curator
