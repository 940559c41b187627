#include <doctest.h>

#include "support.hpp"

using namespace latseg;

namespace {

// Deterministic but arbitrary weights derived from the key bytes, so any
// feature an extractor can produce has a weight without enumerating them.
struct HashWeights : WeightSource {
    long long lo = -5, hi = 5;
    long long weight(std::string_view key) const override {
        unsigned long long h = 1469598103934665603ull;
        for (const char ch : key) {
            h ^= static_cast<unsigned char>(ch);
            h *= 1099511628211ull;
        }
        return lo + static_cast<long long>(h % static_cast<unsigned long long>(hi - lo + 1));
    }
};

// A random lattice guaranteed to admit at least one covering path.
WordLattice random_lattice(std::mt19937_64& rng, const TagSet& tags, size_t max_edges) {
    const Sentence c = test::random_sentence(rng, 2 + rng() % 4);
    WordLattice lat;
    lat.sentence = c;
    lat.scale = 1 + rng() % 3;
    std::vector<WeightedEdge> edges;
    auto add = [&](Edge e, long long margin, bool weightless) {
        for (const WeightedEdge& we : edges)
            if (we.edge == e) return;
        edges.push_back({std::move(e), margin, weightless});
    };
    const int tilings = 1 + rng() % 2;
    for (int t = 0; t < tilings; ++t)
        for (const auto& [pos, k] : test::random_tiling(rng, c.size(), 3))
            add(Edge{pos, c.chars().substr(pos, k), static_cast<int>(rng() % tags.size())},
                static_cast<long long>(rng() % 8) * lat.scale, rng() % 4 == 0);
    while (edges.size() < max_edges && rng() % 2) {
        const size_t pos = rng() % c.size();
        const size_t k = 1 + rng() % std::min<size_t>(3, c.size() - pos);
        add(Edge{pos, c.chars().substr(pos, k), static_cast<int>(rng() % tags.size())},
            static_cast<long long>(rng() % 8) * lat.scale, false);
    }
    if (edges.size() > max_edges) edges.resize(max_edges);
    // keep at least one covering tiling
    for (const auto& [pos, k] : test::random_tiling(rng, c.size(), 3))
        add(Edge{pos, c.chars().substr(pos, k), 0}, 0, false);
    lat.edges = std::move(edges);
    sort_lattice_edges(lat);
    return lat;
}

}  // namespace

TEST_SUITE("word_decoder") {

TEST_CASE("margin buckets") {
    CHECK(margin_bucket(0, 1) == MarginBucket{true, 0});
    CHECK(margin_bucket(1, 1) == MarginBucket{false, 0});   // ceil(log2 1) = 0
    CHECK(margin_bucket(2, 1) == MarginBucket{false, 1});
    CHECK(margin_bucket(5, 1) == MarginBucket{false, 3});   // ceil(log2 5) = 3
    CHECK(margin_bucket(8, 1) == MarginBucket{false, 3});
    CHECK(margin_bucket(9, 1) == MarginBucket{false, 4});
    // fractional margins round up before the log
    CHECK(margin_bucket(1, 2) == MarginBucket{false, 0});   // 0.5 -> ceil 1
    CHECK(margin_bucket(9, 2) == MarginBucket{false, 3});   // 4.5 -> ceil 5
    CHECK_THROWS_AS(margin_bucket(-1, 1), StructuralError);
}

TEST_CASE("closed mode emits the nine template families") {
    const TagSet tags = test::make_tagset(2);
    const WeightedEdge e{Edge{0, U"水污染严", 1}, 0, false};
    std::vector<std::string> feats;
    extract_edge_features(e, 1, EdgeContext{}, tags, nullptr, false, feats);
    REQUIRE(feats.size() == 9);
    std::string templates;
    for (const std::string& f : feats) templates.push_back(f[0]);
    CHECK(templates == "123456789");
    // margin 0 and a multi-character word: the bucket+length template pairs
    // BEST with true
    CHECK(feats[4] == std::string("5B") + '\x1f' + '1');
}

TEST_CASE("weightless edges carry no bucket features") {
    const TagSet tags = test::make_tagset(1);
    const WeightedEdge e{Edge{0, U"水", 0}, 0, true};
    std::vector<std::string> feats;
    extract_edge_features(e, 1, EdgeContext{}, tags, nullptr, false, feats);
    REQUIRE(feats.size() == 7);
    for (const std::string& f : feats) {
        CHECK(f[0] != '4');
        CHECK(f[0] != '5');
    }
}

TEST_CASE("open mode adds lexicon, entry and rav features") {
    const TagSet tags = test::make_tagset(1);
    WordhoodStore store;
    Lexicon lex;
    lex.add("水污", "c1");
    lex.add("水污", "c2");
    store.lexicon = lex;
    const WeightedEdge e{Edge{0, U"水污", 0}, 2, false};
    std::vector<std::string> feats;
    extract_edge_features(e, 1, EdgeContext{0, true}, tags, &store, true, feats);
    // 9 closed + 2 lexicon categories + entry flag + rav bucket
    REQUIRE(feats.size() == 13);
    int lexicon_features = 0;
    for (const std::string& f : feats)
        if (f[0] == 'L') ++lexicon_features;
    CHECK(lexicon_features == 2);
    // unknown word: no lexicon features, still entry + rav
    const WeightedEdge unk{Edge{0, U"污水", 0}, 2, false};
    feats.clear();
    extract_edge_features(unk, 1, EdgeContext{}, tags, &store, true, feats);
    CHECK(feats.size() == 11);
}

TEST_CASE("a lattice with exactly one covering path returns it") {
    std::mt19937_64 rng(171);
    const TagSet tags = test::make_tagset(3);
    const Sentence c = Sentence::from_utf8("水污染");
    WordLattice lat;
    lat.sentence = c;
    lat.scale = 1;
    lat.edges.push_back({Edge{0, U"水", 1}, 0, false});
    lat.edges.push_back({Edge{1, U"污染", 2}, 3, false});
    lat.edges.push_back({Edge{1, U"污", 0}, 5, false});  // dead end: nothing covers 染
    sort_lattice_edges(lat);
    for (int it = 0; it < 10; ++it) {
        HashWeights m;
        m.lo = -5 - it;
        m.hi = 5 + it;
        const Analysis a = decode_lattice(m, tags, lat, nullptr, false);
        REQUIRE(a.edges.size() == 2);
        CHECK(a.edges[0] == lat.edges[0].edge);
        CHECK(a.edges[1].word == U"污染");
    }
}

TEST_CASE("decode score equals exhaustive path enumeration") {
    std::mt19937_64 rng(181);
    const TagSet tags = test::make_tagset(2);
    for (int it = 0; it < 200; ++it) {
        const WordLattice lat = random_lattice(rng, tags, 8);
        HashWeights m;
        const Analysis a = decode_lattice(m, tags, lat, nullptr, false);
        // recompute the decoded path's score by direct feature summation
        long long decoded = 0;
        {
            EdgeContext prev;
            std::vector<std::string> feats;
            for (const Edge& e : a.edges) {
                const WeightedEdge* we = nullptr;
                for (const WeightedEdge& cand : lat.edges)
                    if (cand.edge == e) we = &cand;
                REQUIRE(we != nullptr);
                feats.clear();
                extract_edge_features(*we, lat.scale, prev, tags, nullptr, false, feats);
                for (const std::string& f : feats) decoded += m.weight(f);
                prev = EdgeContext{e.tag, e.len() > 1};
            }
        }
        const long long best = test::enumerate_paths_best(m, tags, lat, nullptr, false);
        CHECK(decoded == best);
        check_analysis(a, lat.sentence);
    }
}

TEST_CASE("zero model decode is deterministic and tie-broken") {
    const TagSet tags = test::make_tagset(2);
    const Sentence c = Sentence::from_utf8("水污");
    WordLattice lat;
    lat.sentence = c;
    lat.scale = 1;
    lat.edges.push_back({Edge{0, U"水", 0}, 0, false});
    lat.edges.push_back({Edge{0, U"水", 1}, 0, false});
    lat.edges.push_back({Edge{0, U"水污", 0}, 0, false});
    lat.edges.push_back({Edge{0, U"水污", 1}, 0, false});
    lat.edges.push_back({Edge{1, U"污", 0}, 0, false});
    sort_lattice_edges(lat);
    LinearModel zero;
    zero.tags = tags;
    const Analysis a = decode_lattice(zero, tags, lat, nullptr, false);
    const Analysis b = decode_lattice(zero, tags, lat, nullptr, false);
    CHECK(a == b);
    // earlier tag first, then the longer word
    REQUIRE(a.edges.size() == 1);
    CHECK(a.edges[0].tag == 0);
    CHECK(a.edges[0].word == U"水污");
}

TEST_CASE("missing coverage names the first uncovered position") {
    const TagSet tags = test::make_tagset(1);
    const Sentence c = Sentence::from_utf8("水污染");
    WordLattice lat;
    lat.sentence = c;
    lat.edges.push_back({Edge{0, U"水", 0}, 0, false});
    lat.edges.push_back({Edge{2, U"染", 0}, 0, false});  // position 1 uncovered
    LinearModel zero;
    zero.tags = tags;
    try {
        decode_lattice(zero, tags, lat, nullptr, false);
        FAIL("expected StructuralError");
    } catch (const StructuralError& e) {
        CHECK(std::string(e.what()).find("position 1") != std::string::npos);
    }
}

TEST_CASE("training on gold-only lattices makes no updates") {
    const TagSet tags = test::make_tagset(2);
    const Sentence c = Sentence::from_utf8("水污染");
    WordLattice lat;
    lat.sentence = c;
    lat.scale = 1;
    Analysis gold;
    gold.edges = {Edge{0, U"水", 0}, Edge{1, U"污染", 1}};
    for (const Edge& e : gold.edges) lat.edges.push_back({e, 0, false});
    sort_lattice_edges(lat);
    const LinearModel m = train_word_model({lat}, {gold}, tags, 3, nullptr, false, std::nullopt);
    CHECK(m.weights.empty());
    CHECK(m.kind == ModelKind::WordClosed);
}

TEST_CASE("a single separating word feature is learned in one epoch") {
    // The zero-weight tie-break picks the one-word path, so the split gold
    // forces exactly one update.
    const TagSet tags = test::make_tagset(1);
    const Sentence c = Sentence::from_utf8("水污");
    WordLattice lat;
    lat.sentence = c;
    lat.scale = 1;
    Analysis gold;
    gold.edges = {Edge{0, U"水", 0}, Edge{1, U"污", 0}};
    lat.edges.push_back({Edge{0, U"水污", 0}, 0, false});
    for (const Edge& e : gold.edges) lat.edges.push_back({e, 0, false});
    sort_lattice_edges(lat);
    const LinearModel m = train_word_model({lat}, {gold}, tags, 1, nullptr, false, std::nullopt);
    const Analysis pred = decode_lattice(m, tags, lat, nullptr, false);
    CHECK(pred == gold);
    // word-identity features moved toward gold and away from the merge
    CHECK(m.weight(std::string("1") + "水") > 0);
    CHECK(m.weight(std::string("1") + "水污") < 0);
}

TEST_CASE("training is deterministic given seed and epochs") {
    std::mt19937_64 rng(191);
    const TagSet tags = test::make_tagset(2);
    std::vector<WordLattice> lattices;
    std::vector<Analysis> gold;
    for (int i = 0; i < 6; ++i) {
        WordLattice lat = random_lattice(rng, tags, 8);
        Analysis g;
        size_t pos = 0;
        while (pos < lat.sentence.size()) {
            // first lattice edge starting at pos (they are sorted)
            const WeightedEdge* pick = nullptr;
            for (const WeightedEdge& we : lat.edges)
                if (we.edge.pos == pos) {
                    pick = &we;
                    break;
                }
            REQUIRE(pick != nullptr);
            g.edges.push_back(pick->edge);
            pos = pick->edge.end();
        }
        lattices.push_back(std::move(lat));
        gold.push_back(std::move(g));
    }
    const LinearModel a = train_word_model(lattices, gold, tags, 4, nullptr, false, 3);
    const LinearModel b = train_word_model(lattices, gold, tags, 4, nullptr, false, 3);
    CHECK(a.weights == b.weights);
    CHECK(a.scale == b.scale);

    Analysis broken = gold[0];
    broken.edges[0].tag = gold[0].edges[0].tag == 0 ? 1 : 0;
    bool in_lattice = false;
    for (const WeightedEdge& we : lattices[0].edges)
        if (we.edge == broken.edges[0]) in_lattice = true;
    if (!in_lattice) {
        std::vector<Analysis> bad_gold = gold;
        bad_gold[0] = broken;
        CHECK_THROWS_AS(
            train_word_model(lattices, bad_gold, tags, 1, nullptr, false, std::nullopt),
            StructuralError);
    }
}

TEST_CASE("closed decoding never reads the wordhood store") {
    std::mt19937_64 rng(201);
    const TagSet tags = test::make_tagset(2);
    for (int it = 0; it < 20; ++it) {
        const WordLattice lat = random_lattice(rng, tags, 8);
        HashWeights m;
        const Analysis without = decode_lattice(m, tags, lat, nullptr, false);
        WordhoodStore store;
        Lexicon lex;
        lex.add(utf8_encode(lat.sentence.chars()), "x");
        store.lexicon = lex;
        const Analysis with_store = decode_lattice(m, tags, lat, &store, false);
        CHECK(without == with_store);
    }
}

}  // TEST_SUITE
