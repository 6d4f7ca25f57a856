#include <doctest.h>

#include "curator/md5.hpp"
#include "curator/util.hpp"

using namespace curator;

TEST_CASE("md5 matches the RFC 1321 reference vectors") {
    // Reference digests from the RFC 1321 appendix test suite.
    CHECK(md5("").hex() == "d41d8cd98f00b204e9800998ecf8427e");
    CHECK(md5("a").hex() == "0cc175b9c0f1b6a831c399e269772661");
    CHECK(md5("abc").hex() == "900150983cd24fb0d6963f7d28e17f72");
    CHECK(md5("message digest").hex() == "f96b697d7cb7938d525a2f31aaf161d0");
    CHECK(md5("abcdefghijklmnopqrstuvwxyz").hex() == "c3fcd3d76192e4007dfb496cca67e13b");
    CHECK(md5("ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789").hex() ==
          "d174ab98d277d9f5a5611c2c9f419d9f");
    CHECK(md5("12345678901234567890123456789012345678901234567890123456789012345678901234567890")
              .hex() == "57edf4a22be3c955ac49da2e2107b67a");
}

TEST_CASE("md5 block boundaries") {
    // 55/56/64 byte inputs straddle the padding layout switch.
    const std::string s55(55, 'x'), s56(56, 'x'), s64(64, 'x');
    CHECK(md5(s55).hex() != md5(s56).hex());
    CHECK(md5(s64).bytes.size() == 16);
    CHECK(md5(s64) == md5(std::string(64, 'x')));
}

TEST_CASE("utf8 decode round trip and lossy flag") {
    bool lossy = true;
    auto pts = decode_utf8("hello \xE4\xB8\xAD\xE6\x96\x87", &lossy);
    CHECK_FALSE(lossy);
    CHECK(pts.size() == 8);
    CHECK(pts[6] == U'中');
    CHECK(encode_utf8(pts) == "hello \xE4\xB8\xAD\xE6\x96\x87");

    pts = decode_utf8("ab\xFF cd", &lossy);
    CHECK(lossy);
    CHECK(pts[2] == char32_t(0xFFFD));

    // Truncated multi-byte sequence at end of input.
    decode_utf8("\xE4\xB8", &lossy);
    CHECK(lossy);

    // Overlong encoding of '/' must not decode silently.
    decode_utf8("\xC0\xAF", &lossy);
    CHECK(lossy);
}

TEST_CASE("unicode letter classification") {
    CHECK(is_unicode_letter(U'a'));
    CHECK(is_unicode_letter(U'Z'));
    CHECK(is_unicode_letter(U'中'));  // CJK
    CHECK(is_unicode_letter(U'é'));  // é
    CHECK(is_unicode_letter(U'ア'));  // katakana
    CHECK_FALSE(is_unicode_letter(U'0'));
    CHECK_FALSE(is_unicode_letter(U'_'));
    CHECK_FALSE(is_unicode_letter(U' '));
    CHECK_FALSE(is_unicode_letter(U'。'));
}

TEST_CASE("split_lines counts a final partial line") {
    CHECK(split_lines("").empty());
    CHECK(split_lines("ab").size() == 1);
    CHECK(split_lines("ab\n").size() == 1);
    CHECK(split_lines("ab\ncd").size() == 2);
    CHECK(split_lines("\n").size() == 1);
    CHECK(split_lines("a\n\nb").size() == 3);
}

TEST_CASE("fnv1a64 and splitmix64 are stable") {
    CHECK(fnv1a64("") == kFnvOffset64);
    CHECK(fnv1a64("a") != fnv1a64("b"));
    CHECK(splitmix64(0) == splitmix64(0));
    CHECK(splitmix64(1) != splitmix64(2));
}
