#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "latseg/corpus.hpp"
#include "support.hpp"

using namespace latseg;

namespace {

Analysis make_analysis(const std::vector<std::pair<std::string, int>>& words) {
    Analysis a;
    size_t pos = 0;
    for (const auto& [w, t] : words) {
        const std::u32string u = utf8_decode(w);
        a.edges.push_back(Edge{pos, u, t});
        pos += u.size();
    }
    return a;
}

std::string label_string(const CharLabeledSentence& cls) {
    std::string s;
    for (const CharLabel& l : cls.labels) {
        s.push_back(position_tag_char(l.pos));
        s += std::to_string(l.tag);
    }
    return s;
}

std::filesystem::path temp_file(const std::string& name, const std::string& content) {
    const auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream out(path, std::ios::binary);
    out << content;
    return path;
}

}  // namespace

TEST_SUITE("core") {

TEST_CASE("sentence rejects whitespace and empty input") {
    CHECK_THROWS_AS(Sentence::from_utf8(""), StructuralError);
    CHECK_THROWS_AS(Sentence::from_utf8("水 污"), StructuralError);
    CHECK_THROWS_AS(Sentence::from_utf8("a\tb"), StructuralError);
    CHECK(Sentence::from_utf8("水污染").size() == 3);
}

TEST_CASE("bmes expansion of a four character word") {
    const Sentence c = Sentence::from_utf8("拉脱维亚");
    const auto cls = analysis_to_char_labels(c, make_analysis({{"拉脱维亚", 0}}));
    CHECK(label_string(cls) == "B0M0M0E0");
}

TEST_CASE("bmes expansion of single and double character words") {
    const Sentence c = Sentence::from_utf8("水污染");
    const auto cls = analysis_to_char_labels(c, make_analysis({{"水", 0}, {"污染", 0}}));
    CHECK(label_string(cls) == "S0B0E0");
}

TEST_CASE("labels back to analysis") {
    const Sentence c = Sentence::from_utf8("水污");
    SUBCASE("two singles") {
        const Analysis a = char_labels_to_analysis(
            {c, {{PositionTag::S, 0}, {PositionTag::S, 0}}});
        REQUIRE(a.edges.size() == 2);
        CHECK(a.edges[0].pos == 0);
        CHECK(a.edges[1].pos == 1);
    }
    SUBCASE("one word") {
        const Analysis a = char_labels_to_analysis(
            {c, {{PositionTag::B, 1}, {PositionTag::E, 1}}});
        REQUIRE(a.edges.size() == 1);
        CHECK(a.edges[0].word == U"水污");
        CHECK(a.edges[0].tag == 1);
    }
    SUBCASE("M cannot start a sentence") {
        try {
            char_labels_to_analysis({c, {{PositionTag::M, 0}, {PositionTag::E, 0}}});
            FAIL("expected StructuralError");
        } catch (const StructuralError& e) {
            CHECK(std::string(e.what()).find("index 0") != std::string::npos);
        }
    }
    SUBCASE("tag change mid-word") {
        CHECK_THROWS_AS(
            char_labels_to_analysis({c, {{PositionTag::B, 0}, {PositionTag::E, 1}}}),
            StructuralError);
    }
    SUBCASE("unterminated word") {
        CHECK_THROWS_AS(
            char_labels_to_analysis({c, {{PositionTag::B, 0}, {PositionTag::M, 0}}}),
            StructuralError);
    }
}

TEST_CASE("label round trip on random analyses") {
    std::mt19937_64 rng(11);
    for (int it = 0; it < 100; ++it) {
        const Sentence c = test::random_sentence(rng, 1 + rng() % 12, U'一', 30);
        const Analysis a = test::random_analysis(rng, c, 3);
        const Analysis back = char_labels_to_analysis(analysis_to_char_labels(c, a));
        CHECK(back == a);
        size_t total = 0;
        for (const Edge& e : a.edges) total += e.len();
        CHECK(total == c.size());
    }
}

TEST_CASE("analysis invariants enforced") {
    const Sentence c = Sentence::from_utf8("水污染");
    Analysis gap = make_analysis({{"水", 0}, {"污染", 0}});
    gap.edges[1].pos = 2;  // hole at position 1
    CHECK_THROWS_AS(analysis_to_char_labels(c, gap), StructuralError);
    const Analysis wrong_text = make_analysis({{"水", 0}, {"污水", 0}});
    CHECK_THROWS_AS(analysis_to_char_labels(c, wrong_text), StructuralError);
}

TEST_CASE("corpus parsing") {
    const auto path = temp_file("latseg_corpus_ok.txt", "水_NN 污染_NN\n纯碱_NN\n");
    const Corpus corpus = read_corpus(path.string());
    REQUIRE(corpus.size() == 2);
    CHECK(corpus.entries[0].sentence.utf8() == "水污染");
    REQUIRE(corpus.entries[0].gold.edges.size() == 2);
    CHECK(corpus.entries[0].gold.edges[0].pos == 0);
    CHECK(corpus.entries[0].gold.edges[1].pos == 1);
    CHECK(corpus.tags.symbol(corpus.entries[0].gold.edges[0].tag) == "NN");
    CHECK(corpus.entries[1].sentence.utf8() == "纯碱");
    CHECK(corpus.entries[1].gold.edges.size() == 1);
    std::filesystem::remove(path);
}

TEST_CASE("corpus parse errors carry line numbers") {
    auto expect_error_at = [](const std::string& content, const std::string& line_tag) {
        const auto path = temp_file("latseg_corpus_bad.txt", content);
        try {
            read_corpus(path.string());
            FAIL("expected DataError for: ", content);
        } catch (const DataError& e) {
            CHECK(std::string(e.what()).find(line_tag) != std::string::npos);
        }
        std::filesystem::remove(path);
    };
    expect_error_at("水_NN\n污染NN\n", ":2:");     // missing separator
    expect_error_at("_NN\n", ":1:");               // empty word
    expect_error_at("水_NN\n\n水_NN\n", ":2:");    // empty line
    expect_error_at("水_\n", ":1:");               // empty tag
    expect_error_at("水_NN  污染_NN\n", ":1:");    // double space -> empty token
    expect_error_at("水_污_NN\n", ":1:");          // underscore inside word
}

TEST_CASE("empty corpus file parses to an empty corpus") {
    const auto path = temp_file("latseg_corpus_empty.txt", "");
    CHECK(read_corpus(path.string()).size() == 0);
    std::filesystem::remove(path);
}

TEST_CASE("corpus write then read is byte identical") {
    const std::string text = "水_NN 污染_NN 严重_VA\n拉脱维亚_NR 驻军_VV\n纯碱_NN\n";
    const auto path = temp_file("latseg_corpus_rt.txt", text);
    const Corpus corpus = read_corpus(path.string());
    std::ostringstream out;
    write_corpus(out, corpus);
    CHECK(out.str() == text);
    std::filesystem::remove(path);
}

TEST_CASE("utf8 round trip and strictness") {
    const std::string s = "a水\xF0\x9F\x99\x82";  // ascii, CJK, emoji
    CHECK(utf8_encode(utf8_decode(s)) == s);
    CHECK_THROWS_AS(utf8_decode("\xFF"), DataError);
    CHECK_THROWS_AS(utf8_decode("\xE6\xB0"), DataError);          // truncated
    CHECK_THROWS_AS(utf8_decode("\xC0\xAF"), DataError);          // overlong
    CHECK_THROWS_AS(utf8_decode("\xED\xA0\x80"), DataError);      // surrogate
}

TEST_CASE("ratio parsing and comparisons are exact") {
    const Ratio eps = Ratio::from_decimal("0.0001");
    CHECK(eps.num == 1);
    CHECK(eps.den == 10000);
    CHECK(ge_ratio(1, 10000, eps));       // exactly the threshold
    CHECK_FALSE(ge_ratio(1, 10001, eps));
    CHECK(le_ratio(15, 1, Ratio::from_double(15.0)));
    CHECK_FALSE(le_ratio(16, 1, Ratio::from_double(15.0)));
    CHECK(Ratio::from_double(15.0).num == 15);
    CHECK(Ratio::from_double(15.0).den == 1);
    CHECK_THROWS_AS(Ratio::from_decimal("abc"), DataError);
}

}  // TEST_SUITE
