#include <cstdio>
#include <string>
#include <vector>

#include "doctest.h"

#include "crashtopics/corpus.hpp"
#include "crashtopics/errors.hpp"
#include "test_support.hpp"

using namespace crashtopics;
using Docs = std::vector<std::vector<std::string>>;

TEST_CASE("build_vocabulary: distinct terms, lexicographic, frequencies") {
    const Vocabulary vocab = build_vocabulary({{"rear", "bumper"}, {"rear"}}, 1);
    REQUIRE(vocab.size() == 2);
    CHECK(vocab.terms == std::vector<std::string>{"bumper", "rear"});
    CHECK(vocab.corpus_frequency == std::vector<std::size_t>{1, 2});
    CHECK(vocab.id("rear") == 1);
    CHECK(vocab.contains("bumper"));
    CHECK(!vocab.contains("hood"));
    CHECK_THROWS_AS(vocab.id("hood"), DataError);
}

TEST_CASE("build_vocabulary: min_count prunes") {
    const Vocabulary vocab = build_vocabulary({{"rear", "bumper"}, {"rear"}}, 2);
    CHECK(vocab.terms == std::vector<std::string>{"rear"});
    CHECK(vocab.corpus_frequency == std::vector<std::size_t>{2});
}

TEST_CASE("build_vocabulary: empty result is a data error") {
    CHECK_THROWS_AS(build_vocabulary(Docs{{}, {}}, 1), DataError);
    CHECK_THROWS_AS(build_vocabulary({{"once"}}, 2), DataError);
}

TEST_CASE("build_tdm: counts, lengths, alignment") {
    const Vocabulary vocab = build_vocabulary({{"rear", "bumper"}, {"rear"}}, 1);
    const TdmBuildResult res = build_tdm({{"rear", "bumper"}, {"rear"}}, {"d0", "d1"}, vocab);
    const TermDocumentMatrix& tdm = res.tdm;
    CHECK(tdm.num_docs() == 2);
    CHECK(tdm.num_terms() == 2);
    // rows bumper, rear
    CHECK(tdm.count(0, 0) == 1);
    CHECK(tdm.count(0, 1) == 0);
    CHECK(tdm.count(1, 0) == 1);
    CHECK(tdm.count(1, 1) == 1);
    CHECK(tdm.doc_lengths == std::vector<std::size_t>{2, 1});
    CHECK(tdm.total_tokens() == 3);
    CHECK(res.dropped_doc_ids.empty());
    CHECK(res.warnings.empty());
    CHECK_NOTHROW(tdm.validate());
}

TEST_CASE("build_tdm: out-of-vocabulary-only documents dropped with warning") {
    const Vocabulary vocab = build_vocabulary({{"rear"}}, 1);
    const TdmBuildResult res =
        build_tdm({{"rear"}, {"hood", "dent"}, {"rear", "hood"}}, {"a", "b", "c"}, vocab);
    CHECK(res.tdm.doc_ids == std::vector<std::string>{"a", "c"});
    CHECK(res.dropped_doc_ids == std::vector<std::string>{"b"});
    REQUIRE(res.warnings.size() == 1);
    CHECK(res.warnings[0].find("b") != std::string::npos);
    // OOV tokens inside kept docs do not count toward length
    CHECK(res.tdm.doc_lengths == std::vector<std::size_t>{1, 1});
}

TEST_CASE("build_tdm: misaligned ids rejected, entry order is first appearance") {
    const Vocabulary vocab = build_vocabulary({{"a", "b", "c"}}, 1);
    CHECK_THROWS_AS(build_tdm({{"a"}}, {"x", "y"}, vocab), DataError);

    const TdmBuildResult res = build_tdm({{"c", "a", "c", "b"}}, {"d"}, vocab);
    REQUIRE(res.tdm.doc_entries.size() == 1);
    const auto& entries = res.tdm.doc_entries[0];
    REQUIRE(entries.size() == 3);
    CHECK(entries[0].term == vocab.id("c"));
    CHECK(entries[0].count == 2);
    CHECK(entries[1].term == vocab.id("a"));
    CHECK(entries[2].term == vocab.id("b"));
}

TEST_CASE("validate rejects structural corruption") {
    const Vocabulary vocab = build_vocabulary({{"a", "b"}}, 1);
    const TdmBuildResult base = build_tdm({{"a", "b", "b"}}, {"d"}, vocab);

    TermDocumentMatrix bad = base.tdm;
    bad.doc_lengths[0] = 99;
    CHECK_THROWS_AS(bad.validate(), DataError);

    bad = base.tdm;
    bad.doc_entries[0][0].term = 7;
    CHECK_THROWS_AS(bad.validate(), DataError);

    bad = base.tdm;
    bad.doc_entries[0][0].count = 0;
    CHECK_THROWS_AS(bad.validate(), DataError);

    bad = base.tdm;
    bad.doc_entries[0].push_back({bad.doc_entries[0][0].term, 1});
    CHECK_THROWS_AS(bad.validate(), DataError);

    bad = base.tdm;
    std::swap(bad.vocab.terms[0], bad.vocab.terms[1]);
    CHECK_THROWS_AS(bad.validate(), DataError);
}

TEST_CASE("vocab_hash: stable, order- and content-sensitive") {
    Vocabulary a = build_vocabulary({{"rear", "bumper"}}, 1);
    const std::string h1 = vocab_hash(a);
    const std::string h2 = vocab_hash(a);
    CHECK(h1 == h2);
    CHECK(h1.size() == 16);  // 64-bit hex

    const Vocabulary b = build_vocabulary({{"rear", "hood"}}, 1);
    CHECK(vocab_hash(b) != h1);

    // Concatenation boundaries matter: {"ab","c"} vs {"a","bc"}.
    const Vocabulary ab_c = build_vocabulary({{"ab", "c"}}, 1);
    const Vocabulary a_bc = build_vocabulary({{"a", "bc"}}, 1);
    CHECK(vocab_hash(ab_c) != vocab_hash(a_bc));
}

TEST_CASE("corpus JSON round trip preserves every count") {
    Rng rng(5150);
    for (int trial = 0; trial < 20; ++trial) {
        const TermDocumentMatrix tdm = test_support::random_tdm(rng);
        const std::string text = corpus_to_json(tdm);
        const TermDocumentMatrix back = corpus_from_json(text);
        CHECK(back.vocab.terms == tdm.vocab.terms);
        CHECK(back.vocab.corpus_frequency == tdm.vocab.corpus_frequency);
        CHECK(back.doc_ids == tdm.doc_ids);
        CHECK(back.doc_lengths == tdm.doc_lengths);
        for (std::size_t v = 0; v < tdm.num_terms(); ++v) {
            for (std::size_t d = 0; d < tdm.num_docs(); ++d) {
                CHECK(back.count(v, d) == tdm.count(v, d));
            }
        }
        // Serialization is canonical: a second pass is byte-identical.
        CHECK(corpus_to_json(back) == text);
    }
}

TEST_CASE("corpus JSON rejects malformed input") {
    CHECK_THROWS_AS(corpus_from_json("not json"), SchemaError);
    CHECK_THROWS_AS(corpus_from_json("{}"), SchemaError);
    CHECK_THROWS_AS(corpus_from_json(R"({"schema_version": 2})"), SchemaError);
    // counts triple pointing at a doc that does not exist
    CHECK_THROWS_AS(corpus_from_json(R"({
        "schema_version": 1,
        "vocab": ["a"],
        "corpus_frequency": [1],
        "doc_ids": ["d0"],
        "doc_lengths": [1],
        "counts": [[0, 5, 1]]
    })"),
                    SchemaError);
}

TEST_CASE("save and load corpus through a file") {
    const Vocabulary vocab = build_vocabulary({{"rear", "bumper"}, {"rear"}}, 1);
    const TdmBuildResult res = build_tdm({{"rear", "bumper"}, {"rear"}}, {"d0", "d1"}, vocab);
    const std::string path = "corpus_roundtrip_test.json";
    save_corpus(res.tdm, path);
    const TermDocumentMatrix back = load_corpus(path);
    CHECK(back.doc_ids == res.tdm.doc_ids);
    CHECK(back.count(1, 0) == 1);
    std::remove(path.c_str());
    CHECK_THROWS_AS(load_corpus(path), IoError);
}
