#include "curator/util.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <sstream>

namespace curator {

namespace {

constexpr char32_t kReplacement = 0xFFFD;

// Inclusive ranges covering the principal letter blocks. Not a full Unicode
// category table; covers the scripts this corpus realistically holds.
struct Range {
    char32_t lo, hi;
};
constexpr std::array<Range, 29> kLetterRanges = {{
    {0x0041, 0x005A},  // A-Z
    {0x0061, 0x007A},  // a-z
    {0x00AA, 0x00AA},
    {0x00B5, 0x00B5},
    {0x00BA, 0x00BA},
    {0x00C0, 0x00D6},
    {0x00D8, 0x00F6},
    {0x00F8, 0x02FF},  // Latin extended + IPA
    {0x0370, 0x0373},
    {0x0376, 0x037D},
    {0x037F, 0x03FF},  // Greek
    {0x0400, 0x0481},
    {0x048A, 0x052F},  // Cyrillic
    {0x0531, 0x0556},  // Armenian
    {0x0561, 0x0587},
    {0x05D0, 0x05EA},  // Hebrew
    {0x0620, 0x064A},  // Arabic
    {0x0671, 0x06D3},
    {0x0904, 0x0939},  // Devanagari
    {0x0958, 0x0961},
    {0x1E00, 0x1FFF},  // Latin/Greek extended additional
    {0x2C60, 0x2C7F},  // Latin extended-C
    {0x3040, 0x30FF},  // Hiragana + Katakana
    {0x3105, 0x312F},  // Bopomofo
    {0x3400, 0x4DBF},  // CJK extension A
    {0x4E00, 0x9FFF},  // CJK unified ideographs
    {0xA000, 0xA48C},  // Yi
    {0xAC00, 0xD7A3},  // Hangul syllables
    {0xF900, 0xFAD9},  // CJK compatibility ideographs
}};

}  // namespace

bool is_unicode_letter(char32_t cp) {
    if (cp < 0x80) return (cp >= 'A' && cp <= 'Z') || (cp >= 'a' && cp <= 'z');
    for (const auto& r : kLetterRanges) {
        if (cp >= r.lo && cp <= r.hi) return true;
    }
    return false;
}

std::u32string decode_utf8(std::string_view bytes, bool* lossy) {
    std::u32string out;
    out.reserve(bytes.size());
    bool bad = false;
    size_t i = 0;
    const size_t n = bytes.size();
    while (i < n) {
        const unsigned char b0 = static_cast<unsigned char>(bytes[i]);
        if (b0 < 0x80) {
            out.push_back(b0);
            ++i;
            continue;
        }
        int len = 0;
        char32_t cp = 0;
        char32_t min_cp = 0;
        if ((b0 & 0xE0) == 0xC0) {
            len = 2;
            cp = b0 & 0x1F;
            min_cp = 0x80;
        } else if ((b0 & 0xF0) == 0xE0) {
            len = 3;
            cp = b0 & 0x0F;
            min_cp = 0x800;
        } else if ((b0 & 0xF8) == 0xF0) {
            len = 4;
            cp = b0 & 0x07;
            min_cp = 0x10000;
        } else {
            out.push_back(kReplacement);
            bad = true;
            ++i;
            continue;
        }
        if (i + len > n) {
            out.push_back(kReplacement);
            bad = true;
            ++i;
            continue;
        }
        bool ok = true;
        for (int j = 1; j < len; ++j) {
            const unsigned char bj = static_cast<unsigned char>(bytes[i + j]);
            if ((bj & 0xC0) != 0x80) {
                ok = false;
                break;
            }
            cp = (cp << 6) | (bj & 0x3F);
        }
        // Reject overlong forms, surrogates and out-of-range values.
        if (!ok || cp < min_cp || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
            out.push_back(kReplacement);
            bad = true;
            ++i;
            continue;
        }
        out.push_back(cp);
        i += len;
    }
    if (lossy) *lossy = bad;
    return out;
}

std::string encode_utf8(std::u32string_view points) {
    std::string out;
    out.reserve(points.size());
    for (char32_t cp : points) {
        if (cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) cp = kReplacement;
        if (cp < 0x80) {
            out.push_back(static_cast<char>(cp));
        } else if (cp < 0x800) {
            out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
            out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
        } else if (cp < 0x10000) {
            out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
            out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
        } else {
            out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
            out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
        }
    }
    return out;
}

size_t utf8_length(std::string_view bytes) {
    return decode_utf8(bytes).size();
}

std::vector<std::string_view> split_lines(std::string_view content) {
    std::vector<std::string_view> lines;
    size_t start = 0;
    while (start < content.size()) {
        size_t nl = content.find('\n', start);
        if (nl == std::string_view::npos) {
            lines.push_back(content.substr(start));
            break;
        }
        lines.push_back(content.substr(start, nl - start));
        start = nl + 1;
    }
    return lines;
}

std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw DataError("cannot open file: " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw DataError("read error: " + p.string());
    return std::move(ss).str();
}

void write_file(const std::filesystem::path& p, std::string_view bytes) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot open file for writing: " + p.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw DataError("write error: " + p.string());
}

}  // namespace curator
