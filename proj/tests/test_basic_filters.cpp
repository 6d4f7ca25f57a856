#include <doctest.h>

#include "curator/basic_filters.hpp"
#include "curator/util.hpp"

using namespace curator;

namespace {
Document doc_of(std::string content) {
    return make_document("t.py", "python", std::move(content));
}
}  // namespace

TEST_CASE("line metrics basics") {
    auto m = line_metrics(doc_of("ab\ncd"));
    CHECK(m.max_line_len == 2);
    CHECK(m.mean_line_len == doctest::Approx(2.0));
    CHECK(m.alpha_frac == doctest::Approx(1.0));

    m = line_metrics(doc_of("1234"));
    CHECK(m.max_line_len == 4);
    CHECK(m.mean_line_len == doctest::Approx(4.0));
    CHECK(m.alpha_frac == doctest::Approx(0.0));

    // 5 alphabetic among 7 non-newline characters.
    m = line_metrics(doc_of("abc\nde12"));
    CHECK(m.max_line_len == 4);
    CHECK(m.mean_line_len == doctest::Approx(3.5));
    CHECK(m.alpha_frac == doctest::Approx(5.0 / 7.0));

    m = line_metrics(doc_of(""));
    CHECK(m.max_line_len == 0);
    CHECK(m.mean_line_len == doctest::Approx(0.0));
    CHECK(m.alpha_frac == doctest::Approx(0.0));
}

TEST_CASE("line metrics count characters, not bytes") {
    // Three CJK characters: 9 bytes, 3 characters, all letters.
    auto m = line_metrics(doc_of("\xE4\xB8\xAD\xE6\x96\x87\xE5\xAD\x97"));
    CHECK(m.max_line_len == 3);
    CHECK(m.alpha_frac == doctest::Approx(1.0));
}

TEST_CASE("basic filters drop in rule order") {
    BasicThresholds t;  // defaults: 1000 / 100 / 0.25

    Document long_line = doc_of("short\n" + std::string(2000, 'a'));
    auto d = apply_basic_filters(long_line, t);
    CHECK_FALSE(d.kept);
    CHECK(d.reason == "max_line_len");

    auto ok = apply_basic_filters(doc_of("ab\ncd"), t);
    CHECK(ok.kept);
    CHECK(ok.reason == "ok");

    BasicThresholds strict;
    strict.min_alpha_frac = 0.25;
    auto num = apply_basic_filters(doc_of("1111\n2222"), strict);
    CHECK_FALSE(num.kept);
    CHECK(num.reason == "alpha_frac");

    // Mean length trips before alpha when both are violated but max is fine.
    BasicThresholds mean_only;
    mean_only.max_line_len = 1000;
    mean_only.max_mean_line_len = 3.0;
    mean_only.min_alpha_frac = 0.9;
    auto mean_hit = apply_basic_filters(doc_of("1234\n5678"), mean_only);
    CHECK_FALSE(mean_hit.kept);
    CHECK(mean_hit.reason == "mean_line_len");
}

TEST_CASE("decision purity: same inputs, same decision") {
    BasicThresholds t;
    Document d = doc_of("hello\nworld\n");
    auto a = apply_basic_filters(d, t);
    auto b = apply_basic_filters(d, t);
    CHECK(a.kept == b.kept);
    CHECK(a.reason == b.reason);
    CHECK(a.doc_id == b.doc_id);
}

TEST_CASE("loosening thresholds never shrinks the kept set") {
    std::vector<Document> docs;
    docs.push_back(doc_of("ab\ncd"));
    docs.push_back(doc_of(std::string(50, 'x')));
    docs.push_back(doc_of("11 22 33 aa"));
    docs.push_back(doc_of(std::string(120, 'y') + "\nz"));
    docs.push_back(doc_of("0123456789"));

    BasicThresholds tight;
    tight.max_line_len = 40;
    tight.max_mean_line_len = 20;
    tight.min_alpha_frac = 0.5;

    BasicThresholds loose;
    loose.max_line_len = 200;
    loose.max_mean_line_len = 150;
    loose.min_alpha_frac = 0.1;

    for (const auto& d : docs) {
        const bool kept_tight = apply_basic_filters(d, tight).kept;
        const bool kept_loose = apply_basic_filters(d, loose).kept;
        if (kept_tight) CHECK(kept_loose);
    }
}

TEST_CASE("language volume gate is boundary inclusive") {
    BasicThresholds t;
    t.min_language_bytes = 100'000'000;

    std::vector<LanguageStats> stats;
    stats.push_back({"small", 99'000'000, 10, 0.0});
    stats.push_back({"exact", 100'000'000, 10, 0.0});
    stats.push_back({"big", 150'000'000, 10, 0.0});

    auto kept = language_volume_filter(stats, t);
    CHECK(kept.count("small") == 0);
    CHECK(kept.count("exact") == 1);
    CHECK(kept.count("big") == 1);

    CHECK(language_volume_filter({}, t).empty());
}

TEST_CASE("threshold validation") {
    BasicThresholds bad;
    bad.min_alpha_frac = 1.5;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    BasicThresholds zero;
    zero.max_line_len = 0;
    CHECK_THROWS_AS(zero.validate(), ConfigError);
    BasicThresholds ok;
    CHECK_NOTHROW(ok.validate());
}
