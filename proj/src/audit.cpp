#include "curator/audit.hpp"

#include <json.hpp>

#include "curator/util.hpp"

namespace curator {

AuditLog::AuditLog(const std::string& path) : out_(path, std::ios::trunc) {
    if (!out_) throw DataError("cannot open audit log: " + path);
}

void AuditLog::decision(const FilterDecision& d) {
    if (!d.kept) ++drops_;
    if (!enabled()) return;
    nlohmann::ordered_json j;
    j["doc_id"] = d.doc_id;
    j["stage"] = d.stage;
    j["kept"] = d.kept;
    j["reason"] = d.reason;
    out_ << j.dump() << '\n';
}

void AuditLog::diagnostic(const std::string& event, uint64_t doc_id,
                          const std::string& detail) {
    if (!enabled()) return;
    nlohmann::ordered_json j;
    j["event"] = event;
    if (doc_id != 0) j["doc_id"] = doc_id;
    if (!detail.empty()) j["detail"] = detail;
    out_ << j.dump() << '\n';
}

}  // namespace curator
