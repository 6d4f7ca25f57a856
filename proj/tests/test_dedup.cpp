#include <doctest.h>

#include <cmath>
#include <set>
#include <string>
#include <vector>

#include "curator/dedup.hpp"
#include "curator/util.hpp"
#include "support/temp_dir.hpp"

using namespace curator;

namespace {

// --- independent oracle --------------------------------------------------
// Exact shingle Jaccard computed from token vectors, with shingles as token
// tuples. Shares nothing with the library's hashing or separator scheme.

using TokenVec = std::vector<std::string>;

std::set<TokenVec> oracle_shingles(const TokenVec& tokens, size_t w) {
    std::set<TokenVec> out;
    if (tokens.size() < w) {
        if (!tokens.empty()) out.insert(tokens);
        return out;
    }
    for (size_t i = 0; i + w <= tokens.size(); ++i) {
        out.insert(TokenVec(tokens.begin() + i, tokens.begin() + i + w));
    }
    return out;
}

double oracle_jaccard(const TokenVec& a, const TokenVec& b, size_t w) {
    const auto sa = oracle_shingles(a, w);
    const auto sb = oracle_shingles(b, w);
    size_t inter = 0;
    for (const auto& s : sa) {
        if (sb.count(s)) ++inter;
    }
    const size_t uni = sa.size() + sb.size() - inter;
    return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

std::string join(const TokenVec& tokens) {
    std::string s;
    for (const auto& t : tokens) {
        s += t;
        s += ' ';
    }
    return s;
}

TokenVec unique_tokens(size_t count, size_t offset) {
    TokenVec v;
    v.reserve(count);
    for (size_t i = 0; i < count; ++i) v.push_back("tok" + std::to_string(offset + i));
    return v;
}

// Pair of token docs sharing a `shared`-token prefix, disjoint tails.
std::pair<TokenVec, TokenVec> token_pair(size_t total, size_t shared, size_t salt) {
    TokenVec common = unique_tokens(shared, salt * 100000);
    TokenVec a = common, b = common;
    TokenVec tail_a = unique_tokens(total - shared, salt * 100000 + 40000);
    TokenVec tail_b = unique_tokens(total - shared, salt * 100000 + 70000);
    a.insert(a.end(), tail_a.begin(), tail_a.end());
    b.insert(b.end(), tail_b.begin(), tail_b.end());
    return {a, b};
}

Document doc_of(std::string path, std::string content) {
    return make_document(std::move(path), "python", std::move(content));
}

}  // namespace

TEST_CASE("content digest ignores path and matches the empty-input reference") {
    Document a = doc_of("a.py", "same content");
    Document b = doc_of("b/other.py", "same content");
    CHECK(content_digest(a) == content_digest(b));

    Document c = doc_of("c.py", "same contentX");
    CHECK(content_digest(a) != content_digest(c));

    Document empty = doc_of("e.py", "");
    CHECK(content_digest(empty).hex() == "d41d8cd98f00b204e9800998ecf8427e");
}

TEST_CASE("shingle tokens: alnum runs plus single punctuation") {
    auto toks = shingle_tokens("foo = bar(1, x2);\n");
    REQUIRE(toks.size() == 9);
    CHECK(toks[0] == "foo");
    CHECK(toks[1] == "=");
    CHECK(toks[2] == "bar");
    CHECK(toks[3] == "(");
    CHECK(toks[4] == "1");
    CHECK(toks[5] == ",");
    CHECK(toks[6] == "x2");
    CHECK(toks[7] == ")");
    CHECK(toks[8] == ";");

    CHECK(shingle_tokens("").empty());
    CHECK(shingle_tokens("  \n\t ").empty());
}

TEST_CASE("exact dedup keeps first occurrence per digest") {
    std::vector<Document> docs;
    docs.push_back(doc_of("1.py", "AAAA"));
    docs.push_back(doc_of("2.py", "AAAA"));
    docs.push_back(doc_of("3.py", "BBBB"));

    auto r = exact_dedup(docs);
    REQUIRE(r.kept.size() == 2);
    CHECK(r.kept[0].path == "1.py");
    CHECK(r.kept[1].path == "3.py");
    REQUIRE(r.decisions.size() == 3);
    CHECK(r.decisions[1].kept == false);
    CHECK(r.decisions[1].reason == "exact_dup");

    SUBCASE("all-distinct stream is unchanged") {
        std::vector<Document> distinct;
        distinct.push_back(doc_of("1.py", "aa"));
        distinct.push_back(doc_of("2.py", "bb"));
        auto r2 = exact_dedup(distinct);
        CHECK(r2.kept.size() == 2);
    }

    SUBCASE("idempotence") {
        auto again = exact_dedup(r.kept);
        CHECK(again.kept.size() == r.kept.size());
        for (const auto& d : again.decisions) CHECK(d.kept);
    }
}

TEST_CASE("minhash signature determinism and self-similarity") {
    LshParams p;
    auto pair = token_pair(100, 50, 1);
    Document a = doc_of("a.py", join(pair.first));

    auto s1 = minhash_signature(a, p);
    auto s2 = minhash_signature(a, p);
    CHECK(s1.minima == s2.minima);
    CHECK(estimated_jaccard(s1, s2) == doctest::Approx(1.0));
    CHECK(s1.minima.size() == p.permutations);
    CHECK_FALSE(s1.short_doc);

    LshParams other_seed = p;
    other_seed.seed = p.seed + 1;
    auto s3 = minhash_signature(a, other_seed);
    CHECK(s1.minima != s3.minima);
}

TEST_CASE("disjoint shingle sets give near-zero estimate") {
    LshParams p;
    auto [ta, tb] = token_pair(100, 0, 2);
    auto sa = minhash_signature(doc_of("a.py", join(ta)), p);
    auto sb = minhash_signature(doc_of("b.py", join(tb)), p);
    const double est = estimated_jaccard(sa, sb);
    CHECK(est <= 3.0 / std::sqrt(static_cast<double>(p.permutations)));
}

TEST_CASE("short documents fall back to a whole-document shingle") {
    LshParams p;
    Document tiny = doc_of("t.py", "ab cd");
    auto s = minhash_signature(tiny, p);
    CHECK(s.short_doc);
    auto same = minhash_signature(doc_of("u.py", "ab cd"), p);
    CHECK(estimated_jaccard(s, same) == doctest::Approx(1.0));
}

TEST_CASE("minhash estimator tracks exact Jaccard within 3 sigma") {
    LshParams p;  // P = 128
    const size_t w = p.shingle_width;
    const size_t total = 200;

    // Shared prefix lengths spanning exact Jaccard ~0.1 .. ~0.95.
    const size_t shared_counts[] = {40, 60, 80, 100, 110, 120, 130, 140, 150, 155,
                                    160, 165, 170, 175, 180, 185, 190, 192, 195, 197};
    int pass = 0;
    int idx = 0;
    double lo = 1.0, hi = 0.0;
    for (size_t shared : shared_counts) {
        ++idx;
        auto [ta, tb] = token_pair(total, shared, 10 + idx);
        const double exact = oracle_jaccard(ta, tb, w);
        lo = std::min(lo, exact);
        hi = std::max(hi, exact);

        auto sa = minhash_signature(doc_of("a.py", join(ta)), p);
        auto sb = minhash_signature(doc_of("b.py", join(tb)), p);
        const double est = estimated_jaccard(sa, sb);
        const double tol = 3.0 * std::sqrt(exact * (1.0 - exact) / 128.0);
        if (std::abs(est - exact) <= tol) ++pass;
    }
    CHECK(pass >= 19);
    // The constructed pairs really span the intended similarity range.
    CHECK(lo < 0.15);
    CHECK(hi > 0.9);
}

TEST_CASE("lsh candidates: identical signatures always pair, disjoint never") {
    LshParams p;
    auto [ta, tb] = token_pair(200, 0, 3);
    Document a = doc_of("a.py", join(ta));
    Document a2 = doc_of("a2.py", join(ta));
    Document b = doc_of("b.py", join(tb));

    auto sa = minhash_signature(a, p);
    auto sa2 = minhash_signature(a2, p);
    auto sb = minhash_signature(b, p);

    std::vector<std::pair<uint64_t, const MinHashSignature*>> sigs = {
        {a.id, &sa}, {a2.id, &sa2}, {b.id, &sb}};
    auto pairs = lsh_candidate_pairs(sigs, p);
    REQUIRE(pairs.size() == 1);
    CHECK(pairs[0] == std::make_pair(std::min(a.id, a2.id), std::max(a.id, a2.id)));
}

TEST_CASE("lsh hit rate on planted 95%-similar pairs across 200 seeds") {
    // Band agreement probability 1-(1-J^r)^b is ~1 for J=0.95, b=16, r=8;
    // require >= 0.99 empirically.
    int hits = 0;
    auto [ta, tb] = token_pair(200, 195, 4);
    Document a = doc_of("a.py", join(ta));
    Document b = doc_of("b.py", join(tb));
    REQUIRE(oracle_jaccard(ta, tb, 5) >= 0.94);

    for (uint64_t seed = 0; seed < 200; ++seed) {
        LshParams p;
        p.seed = seed;
        auto sa = minhash_signature(a, p);
        auto sb = minhash_signature(b, p);
        std::vector<std::pair<uint64_t, const MinHashSignature*>> sigs = {{a.id, &sa},
                                                                          {b.id, &sb}};
        if (!lsh_candidate_pairs(sigs, p).empty()) ++hits;
    }
    CHECK(hits >= 198);
}

TEST_CASE("lsh rejects mismatched signature lengths") {
    LshParams p;
    MinHashSignature bad;
    bad.minima.assign(64, 0);
    MinHashSignature good;
    good.minima.assign(128, 0);
    std::vector<std::pair<uint64_t, const MinHashSignature*>> sigs = {{1, &good}, {2, &bad}};
    CHECK_THROWS_AS(lsh_candidate_pairs(sigs, p), ConfigError);
}

TEST_CASE("near dedup drops the later of a similar pair and keeps dissimilar pairs") {
    LshParams p;  // threshold 0.85
    auto [ta, tb] = token_pair(200, 195, 5);
    auto [tc, td] = token_pair(200, 60, 6);

    std::vector<Document> docs;
    docs.push_back(doc_of("a.py", join(ta)));
    docs.push_back(doc_of("b.py", join(tb)));   // ~0.95 similar to a
    docs.push_back(doc_of("c.py", join(tc)));
    docs.push_back(doc_of("d.py", join(td)));   // ~0.17 similar to c

    auto r = near_dedup(docs, p);
    REQUIRE(r.kept.size() == 3);
    CHECK(r.kept[0].path == "a.py");
    CHECK(r.kept[1].path == "c.py");
    CHECK(r.kept[2].path == "d.py");
    CHECK(r.decisions[1].reason == "near_dup");

    SUBCASE("idempotence on its own output") {
        auto again = near_dedup(r.kept, p);
        CHECK(again.kept.size() == r.kept.size());
    }

    SUBCASE("exact-confirm mode agrees here") {
        auto confirmed = near_dedup(docs, p, /*exact_confirm=*/true);
        CHECK(confirmed.kept.size() == 3);
    }
}

TEST_CASE("near dedup clusters transitively with the earliest member surviving") {
    // a ~ b and b ~ c by construction; a is earliest.
    TokenVec base = unique_tokens(200, 900000);
    TokenVec b = base;
    b[199] = "changedB";
    TokenVec c = b;
    c[0] = "changedC";

    LshParams p;
    std::vector<Document> docs;
    docs.push_back(doc_of("a.py", join(base)));
    docs.push_back(doc_of("b.py", join(b)));
    docs.push_back(doc_of("c.py", join(c)));

    REQUIRE(oracle_jaccard(base, b, 5) >= 0.85);
    REQUIRE(oracle_jaccard(b, c, 5) >= 0.85);

    auto r = near_dedup(docs, p);
    REQUIRE(r.kept.size() == 1);
    CHECK(r.kept[0].path == "a.py");
}

TEST_CASE("kept set is nonempty whenever input is nonempty") {
    LshParams p;
    std::vector<Document> docs;
    for (int i = 0; i < 5; ++i) docs.push_back(doc_of("p" + std::to_string(i), "same text here"));
    auto r = near_dedup(docs, p);
    CHECK(r.kept.size() >= 1);
}

TEST_CASE("signature sidecar file round trip") {
    TempDir dir;
    LshParams p;
    p.seed = 77;

    std::vector<std::pair<uint64_t, MinHashSignature>> sigs;
    auto [ta, tb] = token_pair(100, 50, 7);
    sigs.emplace_back(11, minhash_signature(doc_of("a.py", join(ta)), p));
    sigs.emplace_back(22, minhash_signature(doc_of("b.py", join(tb)), p));

    write_signatures(dir.file("sigs.bin"), sigs, p);
    LshParams loaded_params;
    auto loaded = read_signatures(dir.file("sigs.bin"), &loaded_params);
    REQUIRE(loaded.size() == 2);
    CHECK(loaded_params.seed == 77);
    CHECK(loaded_params.permutations == p.permutations);
    CHECK(loaded[0].first == 11);
    CHECK(loaded[0].second.minima == sigs[0].second.minima);
    CHECK(loaded[1].second.minima == sigs[1].second.minima);

    CHECK_THROWS_AS(read_signatures(dir.file("missing.bin")), DataError);
}

TEST_CASE("lsh params validate b*r == P") {
    LshParams p;
    p.bands = 10;  // 10*8 != 128
    CHECK_THROWS_AS(p.validate(), ConfigError);
}
