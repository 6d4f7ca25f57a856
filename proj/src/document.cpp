#include "curator/document.hpp"

#include <algorithm>
#include <map>

#include "curator/md5.hpp"
#include "curator/util.hpp"

namespace curator {

Document make_document(std::string path, std::string language, std::string content,
                       bool decode_lossy) {
    Document d;
    // id mixes the content digest with the path so that equal content at two
    // paths still gets distinct identities.
    const Md5Digest digest = md5(content);
    const std::string_view digest_bytes(reinterpret_cast<const char*>(digest.bytes.data()),
                                        digest.bytes.size());
    d.id = fnv1a64(path, fnv1a64(digest_bytes));
    d.byte_size = content.size();
    d.line_count = count_lines(content);
    d.path = std::move(path);
    d.language = std::move(language);
    d.content = std::move(content);
    d.decode_lossy = decode_lossy;
    return d;
}

std::vector<LanguageStats> collect_language_stats(std::span<const Document> docs) {
    std::map<std::string, LanguageStats> by_lang;
    uint64_t total = 0;
    for (const Document& d : docs) {
        LanguageStats& s = by_lang[d.language];
        s.language = d.language;
        s.total_bytes += d.byte_size;
        s.file_count += 1;
        total += d.byte_size;
    }
    std::vector<LanguageStats> out;
    out.reserve(by_lang.size());
    for (auto& [_, s] : by_lang) {
        s.proportion = total > 0 ? static_cast<double>(s.total_bytes) / static_cast<double>(total)
                                 : 0.0;
        out.push_back(std::move(s));
    }
    std::sort(out.begin(), out.end(), [](const LanguageStats& a, const LanguageStats& b) {
        if (a.total_bytes != b.total_bytes) return a.total_bytes > b.total_bytes;
        return a.language < b.language;
    });
    return out;
}

}  // namespace curator
