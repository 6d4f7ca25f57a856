#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace curator {

// Configuration problems (bad parameters, malformed config files). CLI exit 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Data problems (unreadable inputs, malformed records, corrupt files). CLI exit 3.
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// --- hashing -----------------------------------------------------------

inline constexpr uint64_t kFnvOffset64 = 0xcbf29ce484222325ULL;
inline constexpr uint64_t kFnvPrime64 = 0x100000001b3ULL;

inline uint64_t fnv1a64(std::string_view bytes, uint64_t basis = kFnvOffset64) {
    uint64_t h = basis;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= kFnvPrime64;
    }
    return h;
}

// Fixed-increment finalizer; bijective on 64-bit values.
inline uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// --- UTF-8 -------------------------------------------------------------

// Decode UTF-8 into Unicode scalar values. Invalid sequences become U+FFFD
// and set *lossy. Never throws.
std::u32string decode_utf8(std::string_view bytes, bool* lossy = nullptr);

std::string encode_utf8(std::u32string_view points);

// Number of Unicode scalar values (invalid sequences count one replacement each).
size_t utf8_length(std::string_view bytes);

// Letter test over the principal Unicode letter blocks (Latin, Greek,
// Cyrillic, Hebrew, Arabic, Devanagari, CJK, Kana, Hangul, ...).
bool is_unicode_letter(char32_t cp);

// --- lines -------------------------------------------------------------

// Newline-delimited lines; a final partial line counts as one, the empty
// fragment after a trailing '\n' does not. "" -> {}.
std::vector<std::string_view> split_lines(std::string_view content);

inline uint64_t count_lines(std::string_view content) {
    return split_lines(content).size();
}

// --- files -------------------------------------------------------------

std::string read_file(const std::filesystem::path& p);          // throws DataError
void write_file(const std::filesystem::path& p, std::string_view bytes);

}  // namespace curator
