#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

namespace curator {

// 128-bit content digest (RFC 1321 MD5). Collision resistance is irrelevant
// here; the role is a fast, stable content fingerprint for exact dedup.
struct Md5Digest {
    std::array<uint8_t, 16> bytes{};

    bool operator==(const Md5Digest&) const = default;
    auto operator<=>(const Md5Digest&) const = default;

    std::string hex() const;

    // First 8 digest bytes as a little-endian integer, for hash-map keys.
    uint64_t low64() const;
};

Md5Digest md5(std::string_view data);

}  // namespace curator
