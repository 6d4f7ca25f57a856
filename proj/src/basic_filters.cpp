#include "curator/basic_filters.hpp"

#include "curator/util.hpp"

namespace curator {

void BasicThresholds::validate() const {
    if (max_line_len == 0) throw ConfigError("max_line_len must be positive");
    if (max_mean_line_len <= 0) throw ConfigError("max_mean_line_len must be positive");
    if (min_alpha_frac < 0.0 || min_alpha_frac > 1.0) {
        throw ConfigError("min_alpha_frac must be in [0,1]");
    }
}

LineMetrics line_metrics(const Document& doc) {
    LineMetrics m;
    if (doc.content.empty()) return m;

    const auto lines = split_lines(doc.content);
    uint64_t total_chars = 0;
    uint64_t alpha_chars = 0;
    for (std::string_view line : lines) {
        uint64_t len = 0;
        for (char32_t cp : decode_utf8(line)) {
            ++len;
            if (is_unicode_letter(cp)) ++alpha_chars;
        }
        total_chars += len;
        m.max_line_len = std::max(m.max_line_len, len);
    }
    m.mean_line_len = lines.empty() ? 0.0
                                    : static_cast<double>(total_chars) /
                                          static_cast<double>(lines.size());
    m.alpha_frac = total_chars > 0 ? static_cast<double>(alpha_chars) /
                                         static_cast<double>(total_chars)
                                   : 0.0;
    return m;
}

FilterDecision apply_basic_filters(const Document& doc, const BasicThresholds& t) {
    const LineMetrics m = line_metrics(doc);
    if (m.max_line_len > t.max_line_len) {
        return FilterDecision::drop(doc.id, "basic", "max_line_len");
    }
    if (m.mean_line_len > t.max_mean_line_len) {
        return FilterDecision::drop(doc.id, "basic", "mean_line_len");
    }
    if (m.alpha_frac < t.min_alpha_frac) {
        return FilterDecision::drop(doc.id, "basic", "alpha_frac");
    }
    return FilterDecision::keep(doc.id, "basic");
}

std::set<std::string> language_volume_filter(std::span<const LanguageStats> stats,
                                             const BasicThresholds& t) {
    std::set<std::string> kept;
    for (const LanguageStats& s : stats) {
        if (s.total_bytes >= t.min_language_bytes) kept.insert(s.language);
    }
    return kept;
}

}  // namespace curator
