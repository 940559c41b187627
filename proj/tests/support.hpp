#pragma once

// Test-only helpers: independent brute-force oracles and data generators.
// The oracles enumerate search spaces directly and must stay free of the
// dynamic programs they check.

#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "latseg/char_tagger.hpp"
#include "latseg/corpus.hpp"
#include "latseg/lattice.hpp"
#include "latseg/word_decoder.hpp"

namespace latseg::test {

inline TagSet make_tagset(int n) {
    TagSet tags;
    for (int i = 0; i < n; ++i) tags.intern("T" + std::to_string(i));
    return tags;
}

inline Sentence random_sentence(std::mt19937_64& rng, size_t len, char32_t base = U'一',
                                size_t pool = 6) {
    std::u32string s;
    for (size_t i = 0; i < len; ++i) s.push_back(base + static_cast<char32_t>(rng() % pool));
    return Sentence(std::move(s));
}

// Random integer weights over every feature a (sentence, label set) pair can
// produce, including all transition pairs and the BOS transition.
inline LinearModel random_char_model(std::mt19937_64& rng, const Sentence& c,
                                     const TagSet& tags, const LabelSet& labels, int lo,
                                     int hi) {
    LinearModel m;
    m.kind = ModelKind::Char;
    m.tags = tags;
    m.labels = labels;
    m.scale = 1;
    std::vector<std::string> feats;
    auto roll = [&rng, lo, hi]() {
        return lo + static_cast<long long>(rng() % static_cast<unsigned long long>(hi - lo + 1));
    };
    for (size_t i = 0; i < c.size(); ++i) {
        for (int a = 0; a < labels.size(); ++a) {
            for (int p = kBosLabel; p < labels.size(); ++p) {
                feats.clear();
                extract_char_features(c, i, p, a, feats);
                for (const std::string& f : feats) m.weights.emplace(f, roll());
            }
        }
    }
    return m;
}

// Well-formedness restated from the definition: words are S or B M* E with a
// constant tag.
inline bool wf_start(CharLabel l) {
    return l.pos == PositionTag::B || l.pos == PositionTag::S;
}
inline bool wf_final(CharLabel l) {
    return l.pos == PositionTag::E || l.pos == PositionTag::S;
}
inline bool wf_step(CharLabel a, CharLabel b) {
    if (a.pos == PositionTag::B || a.pos == PositionTag::M)
        return (b.pos == PositionTag::M || b.pos == PositionTag::E) && b.tag == a.tag;
    return b.pos == PositionTag::B || b.pos == PositionTag::S;
}

inline void enumerate_labelings(const LabelSet& labels, size_t n,
                                const std::function<void(const std::vector<CharLabel>&)>& fn) {
    std::vector<CharLabel> seq;
    std::function<void()> rec = [&]() {
        const size_t i = seq.size();
        if (i == n) {
            if (wf_final(seq.back())) fn(seq);
            return;
        }
        for (int a = 0; a < labels.size(); ++a) {
            const CharLabel l = labels.label(a);
            if (i == 0 ? !wf_start(l) : !wf_step(seq.back(), l)) continue;
            seq.push_back(l);
            rec();
            seq.pop_back();
        }
    };
    rec();
}

// Direct-summation score: extract the eight features per position, add their
// weights.
inline long long oracle_score(const WeightSource& m, const LabelSet& labels, const Sentence& c,
                              const std::vector<CharLabel>& seq) {
    long long score = 0;
    std::vector<std::string> feats;
    for (size_t i = 0; i < seq.size(); ++i) {
        feats.clear();
        extract_char_features(c, i, i == 0 ? kBosLabel : labels.id(seq[i - 1]),
                              labels.id(seq[i]), feats);
        for (const std::string& f : feats) score += m.weight(f);
    }
    return score;
}

struct BruteEdgeKey {
    size_t pos;
    size_t len;
    int tag;
    bool operator<(const BruteEdgeKey& o) const {
        if (pos != o.pos) return pos < o.pos;
        if (len != o.len) return len < o.len;
        return tag < o.tag;
    }
    bool operator==(const BruteEdgeKey& o) const {
        return pos == o.pos && len == o.len && tag == o.tag;
    }
};

struct BruteLattice {
    long long best = 0;
    std::map<BruteEdgeKey, long long> margin;  // exact per-edge margins
};

// Definitional lattice: enumerate every well-formed labeling, track the best
// score any labeling containing each edge reaches.
inline BruteLattice brute_lattice(const WeightSource& m, const LabelSet& labels,
                                  const Sentence& c, size_t max_word_len) {
    BruteLattice out;
    std::map<BruteEdgeKey, long long> through;
    bool any = false;
    enumerate_labelings(labels, c.size(), [&](const std::vector<CharLabel>& seq) {
        const long long s = oracle_score(m, labels, c, seq);
        if (!any || s > out.best) out.best = s;
        any = true;
        const Analysis a = char_labels_to_analysis({c, seq});
        for (const Edge& e : a.edges) {
            const BruteEdgeKey key{e.pos, e.len(), e.tag};
            auto it = through.find(key);
            if (it == through.end())
                through.emplace(key, s);
            else if (s > it->second)
                it->second = s;
        }
    });
    for (const auto& [key, s] : through)
        if (key.len <= max_word_len) out.margin.emplace(key, out.best - s);
    return out;
}

// Best full path score through a word lattice by explicit recursion.
inline long long enumerate_paths_best(const WeightSource& m, const TagSet& tags,
                                      const WordLattice& lat, const WordhoodStore* store,
                                      bool open_mode) {
    const size_t n = lat.sentence.size();
    long long best = 0;
    bool any = false;
    std::vector<std::string> feats;
    std::function<void(size_t, EdgeContext, long long)> rec = [&](size_t boundary,
                                                                  EdgeContext prev,
                                                                  long long acc) {
        if (boundary == n) {
            if (!any || acc > best) best = acc;
            any = true;
            return;
        }
        for (const WeightedEdge& e : lat.edges) {
            if (e.edge.pos != boundary) continue;
            feats.clear();
            extract_edge_features(e, lat.scale, prev, tags, store, open_mode, feats);
            long long s = 0;
            for (const std::string& f : feats) s += m.weight(f);
            rec(e.edge.end(), EdgeContext{e.edge.tag, e.edge.len() > 1}, acc + s);
        }
    };
    rec(0, EdgeContext{}, 0);
    if (!any) throw StructuralError("oracle: no covering path");
    return best;
}

// Quadratic substring counter (splits on the same boundary predicate).
struct NaiveCounts {
    std::map<std::string, unsigned long long> freq;
    std::map<std::string, unsigned long long> ctx;  // "l|w|r" with | = 0x1f
};

inline NaiveCounts naive_substring_counts(const std::u32string& text, size_t max_len) {
    NaiveCounts out;
    std::vector<std::u32string> segments;
    std::u32string cur;
    for (char32_t ch : text) {
        if (is_boundary_char(ch)) {
            if (!cur.empty()) segments.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    if (!cur.empty()) segments.push_back(cur);
    for (const std::u32string& seg : segments) {
        for (size_t i = 0; i < seg.size(); ++i) {
            for (size_t k = 1; k <= max_len && i + k <= seg.size(); ++k) {
                const std::string w = utf8_encode(seg.substr(i, k));
                ++out.freq[w];
                std::string key;
                utf8_append(key, i > 0 ? seg[i - 1] : kBoundaryChar);
                key.push_back('\x1f');
                key += w;
                key.push_back('\x1f');
                utf8_append(key, i + k < seg.size() ? seg[i + k] : kBoundaryChar);
                ++out.ctx[key];
            }
        }
    }
    return out;
}

inline bool store_matches_naive(const NgramStore& store, const NaiveCounts& naive) {
    if (store.frequencies().size() != naive.freq.size()) return false;
    for (const auto& [w, n] : naive.freq)
        if (store.frequency(w) != n) return false;
    size_t ctx_entries = 0;
    for (const auto& [w, counts] : store.contexts()) ctx_entries += counts.size();
    if (ctx_entries != naive.ctx.size()) return false;
    for (const auto& [key, n] : naive.ctx) {
        const size_t a = key.find('\x1f');
        const size_t b = key.rfind('\x1f');
        const char32_t l = utf8_decode(key.substr(0, a))[0];
        const char32_t r = utf8_decode(key.substr(b + 1))[0];
        if (store.context_frequency(l, key.substr(a + 1, b - a - 1), r) != n) return false;
    }
    return true;
}

// Random full segmentation of [0, n) with word length <= max_len.
inline std::vector<std::pair<size_t, size_t>> random_tiling(std::mt19937_64& rng, size_t n,
                                                            size_t max_len) {
    std::vector<std::pair<size_t, size_t>> spans;
    size_t pos = 0;
    while (pos < n) {
        const size_t k = 1 + rng() % std::min(max_len, n - pos);
        spans.emplace_back(pos, k);
        pos += k;
    }
    return spans;
}

inline Analysis random_analysis(std::mt19937_64& rng, const Sentence& c, int n_tags,
                                size_t max_len = 4) {
    Analysis a;
    for (const auto& [pos, k] : random_tiling(rng, c.size(), max_len))
        a.edges.push_back(Edge{pos, c.chars().substr(pos, k), static_cast<int>(rng() % n_tags)});
    return a;
}

}  // namespace latseg::test
