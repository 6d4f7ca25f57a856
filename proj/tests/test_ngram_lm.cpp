#include <doctest.h>

#include <cmath>
#include <random>

#include "curator/ngram_lm.hpp"
#include "curator/util.hpp"
#include "support/temp_dir.hpp"

using namespace curator;

namespace {
Document doc_of(std::string path, std::string content) {
    return make_document(std::move(path), "python", std::move(content));
}
}  // namespace

TEST_CASE("bigram counts on ababab match hand arithmetic") {
    std::vector<Document> corpus = {doc_of("t.py", "ababab")};
    auto model = train_ngram(corpus, 2, 0.01);

    // Context 'a' seen 3 times, always followed by 'b'; vocab {a,b} plus the
    // unknown bucket: P(b|a) = (3 + 0.01) / (3 + 0.01*2 + 0.01).
    CHECK(model.probability(U"a", U'b') == doctest::Approx(3.01 / 3.03).epsilon(1e-12));
    CHECK(model.probability(U"a", U'a') == doctest::Approx(0.01 / 3.03).epsilon(1e-12));
    CHECK(model.probability(U"b", U'a') == doctest::Approx(2.01 / 2.03).epsilon(1e-12));
    // Unknown symbol goes through the shared bucket.
    CHECK(model.probability(U"a", U'z') == doctest::Approx(0.01 / 3.03).epsilon(1e-12));
}

TEST_CASE("conditional distributions sum to 1 over vocab plus unknown bucket") {
    std::vector<Document> corpus = {
        doc_of("a.py", "def f(x):\n  return x + 1\n"),
        doc_of("b.py", "for i in range(10):\n  print(i)\n"),
    };
    auto model = train_ngram(corpus, 3, 0.01);

    int checked = 0;
    for (const auto& ctx : model.contexts()) {
        double sum = model.probability(ctx, char32_t(0x10FFFD));  // unknown bucket
        for (char32_t sym : model.vocab()) sum += model.probability(ctx, sym);
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
        if (++checked >= 100) break;
    }
    CHECK(checked > 0);
}

TEST_CASE("normalization: explicit sum over vocab plus unknown equals 1") {
    // Small corpus with a known 4-symbol vocabulary.
    std::vector<Document> corpus = {doc_of("t.py", "abcdabcdabcd")};
    auto model = train_ngram(corpus, 2, 0.05);
    REQUIRE(model.vocab_size() == 4);

    for (const char32_t* ctx : {U"a", U"b", U"c", U"d"}) {
        double sum = model.probability(ctx, U'a') + model.probability(ctx, U'b') +
                     model.probability(ctx, U'c') + model.probability(ctx, U'd') +
                     model.probability(ctx, U'z');  // unknown bucket
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("uniform order-1 model gives ppl close to V") {
    // 4 symbols, each appearing 10 times.
    std::string text;
    for (int i = 0; i < 10; ++i) text += "wxyz";
    std::vector<Document> corpus = {doc_of("u.py", text)};
    const double k = 0.01;
    auto model = train_ngram(corpus, 1, k);
    REQUIRE(model.vocab_size() == 4);

    auto score = perplexity(model, doc_of("q.py", "wwxxyyzz"));
    REQUIRE(score.has_value());
    // Exact closed form: every symbol has P = (10 + k) / (40 + 5k).
    const double p = (10 + k) / (40 + 5 * k);
    CHECK(score->ppl == doctest::Approx(1.0 / p).epsilon(1e-9));
    CHECK(score->ppl == doctest::Approx(4.0).epsilon(0.01));
}

TEST_CASE("perplexity of ababab under its own bigram model matches the hand oracle") {
    std::vector<Document> corpus = {doc_of("t.py", "ababab")};
    auto model = train_ngram(corpus, 2, 0.01);
    auto score = perplexity(model, corpus[0]);
    REQUIRE(score.has_value());
    CHECK(score->token_count == 5);

    // Five in-document bigram steps: a->b three times, b->a twice.
    const double p_ba = 3.01 / 3.03;
    const double p_ab = 2.01 / 2.03;
    const double oracle = std::exp(-(3.0 * std::log(p_ba) + 2.0 * std::log(p_ab)) / 5.0);
    CHECK(score->ppl == doctest::Approx(oracle).epsilon(1e-6));
}

TEST_CASE("unseen symbols stay finite through the unknown bucket") {
    std::vector<Document> corpus = {doc_of("t.py", "abcabcabc")};
    auto model = train_ngram(corpus, 2, 0.01);
    auto score = perplexity(model, doc_of("q.py", "zzzzzz"));
    REQUIRE(score.has_value());
    CHECK(std::isfinite(score->ppl));
    CHECK(score->ppl > 0.0);
}

TEST_CASE("documents shorter than the order are flagged, not scored") {
    std::vector<Document> corpus = {doc_of("t.py", "abcdefgh")};
    auto model = train_ngram(corpus, 4, 0.01);
    CHECK_FALSE(perplexity(model, doc_of("e.py", "")).has_value());
    CHECK_FALSE(perplexity(model, doc_of("s.py", "ab")).has_value());
    CHECK(perplexity(model, doc_of("ok.py", "abcd")).has_value());
}

TEST_CASE("retraining on the same corpus gives an identical model") {
    std::vector<Document> corpus = {doc_of("a.py", "def f():\n  pass\n"),
                                    doc_of("b.py", "x = [1, 2, 3]\n")};
    auto m1 = train_ngram(corpus, 3, 0.01);
    auto m2 = train_ngram(corpus, 3, 0.01);
    CHECK(m1 == m2);
}

TEST_CASE("empty corpus and bad params are config errors") {
    std::vector<Document> empty;
    CHECK_THROWS_AS(train_ngram(empty, 2, 0.01), ConfigError);
    std::vector<Document> corpus = {doc_of("a.py", "xx")};
    CHECK_THROWS_AS(train_ngram(corpus, 0, 0.01), ConfigError);
    CHECK_THROWS_AS(train_ngram(corpus, 2, 0.0), ConfigError);
}

TEST_CASE("training corpus scores better than random strings under its own model") {
    std::mt19937_64 rng(42);
    std::vector<Document> corpus;
    for (int i = 0; i < 20; ++i) {
        std::string text;
        for (int l = 0; l < 30; ++l) {
            text += "def func_" + std::to_string(l % 7) + "(x):\n    return x + " +
                    std::to_string(l % 5) + "\n";
        }
        corpus.push_back(doc_of("n" + std::to_string(i) + ".py", text));
    }
    auto model = train_ngram(corpus, 4, 0.01);

    double train_ppl = 0.0;
    for (const auto& d : corpus) train_ppl += perplexity(model, d)->ppl;
    train_ppl /= static_cast<double>(corpus.size());

    std::uniform_int_distribution<int> ch(33, 126);
    double rand_ppl = 0.0;
    for (int i = 0; i < 20; ++i) {
        std::string text;
        for (int j = 0; j < 900; ++j) text += static_cast<char>(ch(rng));
        rand_ppl += perplexity(model, doc_of("r.py", text))->ppl;
    }
    rand_ppl /= 20.0;

    CHECK(train_ppl < rand_ppl);
}

TEST_CASE("percentile filter drops the top q per language, ties kept") {
    std::vector<PerplexityScore> scores;
    std::map<uint64_t, std::string> langs;
    for (uint64_t i = 1; i <= 10; ++i) {
        scores.push_back({i, static_cast<double>(i), 100});
        langs[i] = "python";
    }

    SUBCASE("q=0 keeps everything") {
        PerplexityFilterMode m;
        m.kind = PerplexityFilterMode::kPercentile;
        m.percentile_q = 0.0;
        auto r = perplexity_filter(scores, langs, m);
        CHECK(r.kept_ids.size() == 10);
    }

    SUBCASE("q=1 drops everything") {
        PerplexityFilterMode m;
        m.percentile_q = 1.0;
        auto r = perplexity_filter(scores, langs, m);
        CHECK(r.kept_ids.empty());
    }

    SUBCASE("q=0.2 drops exactly the two highest (sort oracle)") {
        PerplexityFilterMode m;
        m.percentile_q = 0.2;
        auto r = perplexity_filter(scores, langs, m);
        CHECK(r.kept_ids.size() == 8);
        CHECK(r.kept_ids.count(9) == 0);
        CHECK(r.kept_ids.count(10) == 0);
        CHECK(r.kept_ids.count(8) == 1);
        for (const auto& d : r.decisions) {
            if (!d.kept) CHECK(d.reason == "high_ppl");
        }
    }

    SUBCASE("boundary ties survive") {
        // Two docs tied at the cut boundary value.
        std::vector<PerplexityScore> tied = scores;
        tied[8].ppl = 8.0;  // ids 8 and 9 both at 8.0; id 10 at 10.0
        PerplexityFilterMode m;
        m.percentile_q = 0.2;
        auto r = perplexity_filter(tied, langs, m);
        // Only the strictly-greater doc (10.0) is dropped.
        CHECK(r.kept_ids.count(10) == 0);
        CHECK(r.kept_ids.count(9) == 1);
        CHECK(r.kept_ids.count(8) == 1);
        CHECK(r.kept_ids.size() == 9);
    }

    SUBCASE("raising q only shrinks the kept set") {
        PerplexityFilterMode m1, m2;
        m1.percentile_q = 0.2;
        m2.percentile_q = 0.5;
        auto r1 = perplexity_filter(scores, langs, m1);
        auto r2 = perplexity_filter(scores, langs, m2);
        for (uint64_t id : r2.kept_ids) CHECK(r1.kept_ids.count(id) == 1);
    }
}

TEST_CASE("percentile filter is per-language") {
    std::vector<PerplexityScore> scores;
    std::map<uint64_t, std::string> langs;
    // Python docs score 1..5, java docs 100..104. A global cut would drop all
    // java docs; the per-language cut drops one of each.
    for (uint64_t i = 1; i <= 5; ++i) {
        scores.push_back({i, static_cast<double>(i), 10});
        langs[i] = "python";
    }
    for (uint64_t i = 6; i <= 10; ++i) {
        scores.push_back({i, static_cast<double>(94 + i), 10});
        langs[i] = "java";
    }
    PerplexityFilterMode m;
    m.percentile_q = 0.2;
    auto r = perplexity_filter(scores, langs, m);
    CHECK(r.kept_ids.count(5) == 0);   // worst python
    CHECK(r.kept_ids.count(10) == 0);  // worst java
    CHECK(r.kept_ids.size() == 8);
}

TEST_CASE("absolute filter drops strictly above the threshold") {
    std::vector<PerplexityScore> scores = {{1, 5.0, 10}, {2, 10.0, 10}, {3, 10.5, 10}};
    std::map<uint64_t, std::string> langs = {{1, "x"}, {2, "x"}, {3, "x"}};
    PerplexityFilterMode m;
    m.kind = PerplexityFilterMode::kAbsolute;
    m.absolute_threshold = 10.0;
    auto r = perplexity_filter(scores, langs, m);
    CHECK(r.kept_ids == std::set<uint64_t>{1, 2});
}

TEST_CASE("model save/load round trip") {
    TempDir dir;
    std::vector<Document> corpus = {doc_of("a.py", "hello world\n"),
                                    doc_of("b.py", "goodbye world\n")};
    auto model = train_ngram(corpus, 3, 0.02);
    model.save(dir.file("m.nglm"));
    auto loaded = NgramModel::load(dir.file("m.nglm"));
    CHECK(loaded == model);

    auto s1 = perplexity(model, corpus[0]);
    auto s2 = perplexity(loaded, corpus[0]);
    CHECK(s1->ppl == doctest::Approx(s2->ppl).epsilon(1e-15));

    CHECK_THROWS_AS(NgramModel::load(dir.file("missing.nglm")), DataError);
}
