#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

namespace curator {

// Per-stage keep/drop record. kept == true iff reason == "ok".
struct FilterDecision {
    uint64_t doc_id = 0;
    std::string stage;
    bool kept = true;
    std::string reason = "ok";

    static FilterDecision keep(uint64_t id, std::string stage_name) {
        return FilterDecision{id, std::move(stage_name), true, "ok"};
    }
    static FilterDecision drop(uint64_t id, std::string stage_name, std::string why) {
        return FilterDecision{id, std::move(stage_name), false, std::move(why)};
    }
};

// Append-only JSONL audit log. One object per line; no timestamps so that
// identical runs produce byte-identical logs.
class AuditLog {
  public:
    AuditLog() = default;  // disabled sink
    explicit AuditLog(const std::string& path);

    bool enabled() const { return out_.is_open(); }

    void decision(const FilterDecision& d);

    // Free-form diagnostic (skipped files, flagged documents, warnings).
    void diagnostic(const std::string& event, uint64_t doc_id, const std::string& detail);

    uint64_t drop_count() const { return drops_; }

  private:
    std::ofstream out_;
    uint64_t drops_ = 0;
};

}  // namespace curator
