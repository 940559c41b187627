#include "latseg/word_decoder.hpp"

#include <algorithm>
#include <bit>
#include <climits>

#include "latseg/char_tagger.hpp"

namespace latseg {

namespace {

constexpr long long kNegInf = LLONG_MIN / 4;
constexpr char kSep = '\x1f';

void append_int(std::string& s, long long v) {
    char buf[24];
    int n = std::snprintf(buf, sizeof buf, "%lld", v);
    s.append(buf, n);
}

void append_bucket(std::string& s, MarginBucket b) {
    if (b.best)
        s.push_back('B');
    else
        append_int(s, b.value);
}

void append_tag(std::string& s, const TagSet& tags, int tag) {
    if (tag == kBosTag)
        s.push_back('\x02');
    else
        s += tags.symbol(tag);
}

}  // namespace

MarginBucket margin_bucket(long long margin, long long scale) {
    if (margin < 0 || scale <= 0) throw StructuralError("negative margin");
    if (margin == 0) return {true, 0};
    const unsigned long long ceil_m =
        (static_cast<unsigned long long>(margin) + scale - 1) / scale;
    return {false, static_cast<int>(std::bit_width(ceil_m - 1))};
}

void extract_edge_features(const WeightedEdge& e, long long scale, const EdgeContext& prev,
                           const TagSet& tags, const WordhoodStore* store, bool open_mode,
                           std::vector<std::string>& out) {
    const std::string w = utf8_encode(e.edge.word);
    const char multi = e.edge.len() > 1 ? '1' : '0';
    const char prev_multi = prev.multi ? '1' : '0';
    std::string key;

    key = '1' + w;
    out.push_back(key);

    key = '2' + w;
    key.push_back(kSep);
    append_tag(key, tags, e.edge.tag);
    out.push_back(key);

    key = '3';
    key.push_back(multi);
    out.push_back(key);

    if (!e.weightless) {
        const MarginBucket b = margin_bucket(e.margin, scale);
        key = '4';
        append_bucket(key, b);
        out.push_back(key);
        key = '5';
        append_bucket(key, b);
        key.push_back(kSep);
        key.push_back(multi);
        out.push_back(key);
    }

    key = '6';
    append_tag(key, tags, e.edge.tag);
    out.push_back(key);

    key = '7';
    append_tag(key, tags, e.edge.tag);
    key.push_back(kSep);
    key.push_back(multi);
    out.push_back(key);

    key = '8';
    append_tag(key, tags, prev.tag);
    key.push_back(kSep);
    append_tag(key, tags, e.edge.tag);
    out.push_back(key);

    key = '9';
    append_tag(key, tags, prev.tag);
    key.push_back(kSep);
    key.push_back(prev_multi);
    key.push_back(kSep);
    append_tag(key, tags, e.edge.tag);
    key.push_back(kSep);
    key.push_back(multi);
    out.push_back(key);

    if (open_mode) {
        if (!store) throw StructuralError("open mode requires a wordhood store");
        const WordhoodResult wh = wordhood_lookup(*store, w);
        if (wh.categories) {
            for (const std::string& cat : *wh.categories) {
                key = 'L';
                append_tag(key, tags, e.edge.tag);
                key.push_back(kSep);
                key += cat;
                out.push_back(key);
            }
        }
        key = 'W';
        append_tag(key, tags, e.edge.tag);
        key.push_back(kSep);
        key.push_back(wh.entry_flag ? '1' : '0');
        out.push_back(key);

        key = 'R';
        append_tag(key, tags, e.edge.tag);
        key.push_back(kSep);
        if (wh.rav_bucket == kRavUnknown)
            key.push_back('U');
        else
            append_int(key, wh.rav_bucket);
        out.push_back(key);
    }
}

namespace {

// Transition part of the features: tag bigram and the bigram with length
// flags. Indexed by (prev tag + BOS, prev flag, tag, flag).
struct TransTable {
    int n_tags = 0;
    std::vector<long long> w;  // [((pt+1)*2 + pf) * (T*2) + t*2 + f]

    long long at(int prev_tag, bool prev_multi, int tag, bool multi) const {
        const size_t row = (static_cast<size_t>(prev_tag + 1) * 2 + (prev_multi ? 1 : 0));
        return w[row * (n_tags * 2) + tag * 2 + (multi ? 1 : 0)];
    }
};

TransTable build_trans_table(const WeightSource& m, const TagSet& tags) {
    const int T = tags.size();
    TransTable t;
    t.n_tags = T;
    t.w.assign(static_cast<size_t>(T + 1) * 2 * T * 2, 0);
    std::string key;
    for (int pt = kBosTag; pt < T; ++pt) {
        for (int pf = 0; pf < 2; ++pf) {
            for (int tag = 0; tag < T; ++tag) {
                for (int f = 0; f < 2; ++f) {
                    long long sum = 0;
                    key = '8';
                    append_tag(key, tags, pt);
                    key.push_back(kSep);
                    append_tag(key, tags, tag);
                    sum += m.weight(key);
                    key = '9';
                    append_tag(key, tags, pt);
                    key.push_back(kSep);
                    key.push_back(pf ? '1' : '0');
                    key.push_back(kSep);
                    append_tag(key, tags, tag);
                    key.push_back(kSep);
                    key.push_back(f ? '1' : '0');
                    sum += m.weight(key);
                    const size_t row = static_cast<size_t>(pt + 1) * 2 + pf;
                    t.w[row * (T * 2) + tag * 2 + f] = sum;
                }
            }
        }
    }
    return t;
}

// Static part: everything except templates 8 and 9.
long long static_edge_score(const WeightSource& m, const WeightedEdge& e, long long scale,
                            const TagSet& tags, const WordhoodStore* store, bool open_mode) {
    std::vector<std::string> feats;
    feats.reserve(12);
    extract_edge_features(e, scale, EdgeContext{}, tags, store, open_mode, feats);
    long long sum = 0;
    for (const std::string& f : feats)
        if (f[0] != '8' && f[0] != '9') sum += m.weight(f);
    return sum;
}

struct DecodeResult {
    std::vector<size_t> edge_indices;
    long long score = 0;
};

DecodeResult decode_lattice_impl(const WeightSource& m, const TagSet& tags,
                                 const WordLattice& lattice, const WordhoodStore* store,
                                 bool open_mode) {
    const size_t n = lattice.sentence.size();
    const int T = tags.size();
    const int S = T * 2;  // states per boundary: (tag, length flag)
    if (lattice.edges.empty()) throw StructuralError("lattice has no edges");

    // Decode order within a start position: tag ascending, longer word first.
    std::vector<size_t> order(lattice.edges.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&lattice](size_t a, size_t b) {
        const Edge& ea = lattice.edges[a].edge;
        const Edge& eb = lattice.edges[b].edge;
        if (ea.pos != eb.pos) return ea.pos < eb.pos;
        if (ea.tag != eb.tag) return ea.tag < eb.tag;
        return ea.len() > eb.len();
    });
    std::vector<size_t> group_start(n + 1, order.size());
    for (size_t k = order.size(); k-- > 0;) group_start[lattice.edges[order[k]].edge.pos] = k;

    std::vector<long long> stat(lattice.edges.size());
    for (size_t i = 0; i < lattice.edges.size(); ++i) {
        const WeightedEdge& e = lattice.edges[i];
        if (e.edge.word.empty() || e.edge.end() > n ||
            lattice.sentence.chars().compare(e.edge.pos, e.edge.len(), e.edge.word) != 0)
            throw StructuralError("lattice edge inconsistent with sentence");
        stat[i] = static_edge_score(m, e, lattice.scale, tags, store, open_mode);
    }
    const TransTable trans = build_trans_table(m, tags);

    const size_t cells = (n + 1) * S;
    std::vector<long long> dp(cells, kNegInf);
    std::vector<long long> bp_edge(cells, -1);
    std::vector<int> bp_state(cells, -2);  // -1 = BOS

    auto relax = [&](size_t boundary, long long base, int prev_tag, bool prev_multi,
                     int from_state) {
        for (size_t k = group_start[boundary];
             k < order.size() && lattice.edges[order[k]].edge.pos == boundary; ++k) {
            const size_t ei = order[k];
            const WeightedEdge& e = lattice.edges[ei];
            const bool multi = e.edge.len() > 1;
            const long long v =
                base + stat[ei] + trans.at(prev_tag, prev_multi, e.edge.tag, multi);
            const size_t cell = e.edge.end() * S + e.edge.tag * 2 + (multi ? 1 : 0);
            if (v > dp[cell]) {
                dp[cell] = v;
                bp_edge[cell] = static_cast<long long>(ei);
                bp_state[cell] = from_state;
            }
        }
    };

    relax(0, 0, kBosTag, false, -1);
    for (size_t q = 1; q < n; ++q) {
        for (int s = 0; s < S; ++s) {
            const long long base = dp[q * S + s];
            if (base == kNegInf) continue;
            relax(q, base, s / 2, (s & 1) != 0, s);
        }
    }

    long long best = kNegInf;
    int arg = -2;
    for (int tag = 0; tag < T; ++tag)
        for (int f = 1; f >= 0; --f) {  // longer final word preferred on ties
            const int s = tag * 2 + f;
            if (dp[n * S + s] > best) {
                best = dp[n * S + s];
                arg = s;
            }
        }
    if (arg == -2) {
        // Report the first sentence position no reachable edge covers.
        std::vector<char> covered(n, 0);
        std::vector<char> reach(n + 1, 0);
        reach[0] = 1;
        for (size_t k = 0; k < order.size(); ++k) {
            const Edge& e = lattice.edges[order[k]].edge;
            if (!reach[e.pos]) continue;
            reach[e.end()] = 1;
            for (size_t i = e.pos; i < e.end(); ++i) covered[i] = 1;
        }
        size_t first = n;
        for (size_t i = 0; i < n; ++i)
            if (!covered[i]) {
                first = i;
                break;
            }
        throw StructuralError("no covering path through lattice; first uncovered position " +
                              std::to_string(first));
    }

    DecodeResult r;
    r.score = best;
    size_t boundary = n;
    int state = arg;
    while (state != -1) {
        const size_t cell = boundary * S + state;
        const long long ei = bp_edge[cell];
        r.edge_indices.push_back(static_cast<size_t>(ei));
        boundary = lattice.edges[ei].edge.pos;
        state = bp_state[cell];
    }
    std::reverse(r.edge_indices.begin(), r.edge_indices.end());
    return r;
}

}  // namespace

Analysis decode_lattice(const WeightSource& m, const TagSet& tags, const WordLattice& lattice,
                        const WordhoodStore* store, bool open_mode) {
    const DecodeResult r = decode_lattice_impl(m, tags, lattice, store, open_mode);
    Analysis out;
    out.edges.reserve(r.edge_indices.size());
    for (size_t i : r.edge_indices) out.edges.push_back(lattice.edges[i].edge);
    return out;
}

Analysis decode_lattice(const LinearModel& m, const WordLattice& lattice,
                        const WordhoodStore* store) {
    return decode_lattice(m, m.tags, lattice, store, m.kind == ModelKind::WordOpen);
}

LinearModel train_word_model(const std::vector<WordLattice>& lattices,
                             const std::vector<Analysis>& gold, const TagSet& tags, int epochs,
                             const WordhoodStore* store, bool open_mode,
                             std::optional<unsigned long long> shuffle_seed) {
    if (lattices.size() != gold.size())
        throw StructuralError("lattice/gold list length mismatch");
    if (lattices.empty()) throw StructuralError("empty training set");

    // Locate every gold edge in its lattice up front; margins and weightless
    // flags come from the lattice entries.
    std::vector<std::vector<size_t>> gold_idx(lattices.size());
    for (size_t i = 0; i < lattices.size(); ++i) {
        gold_idx[i].reserve(gold[i].edges.size());
        for (const Edge& e : gold[i].edges) {
            size_t found = lattices[i].edges.size();
            for (size_t k = 0; k < lattices[i].edges.size(); ++k)
                if (lattices[i].edges[k].edge == e) {
                    found = k;
                    break;
                }
            if (found == lattices[i].edges.size())
                throw StructuralError("gold edge missing from training lattice " +
                                      std::to_string(i));
            gold_idx[i].push_back(found);
        }
    }

    PerceptronTrainer trainer;
    const PerceptronTrainer::RawView raw = trainer.raw();
    std::vector<size_t> order(lattices.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::vector<std::string> feats;

    auto apply_sequence = [&](const WordLattice& lat, const std::vector<size_t>& indices,
                              long long delta) {
        EdgeContext prev;
        for (size_t ei : indices) {
            const WeightedEdge& e = lat.edges[ei];
            feats.clear();
            extract_edge_features(e, lat.scale, prev, tags, store, open_mode, feats);
            for (const std::string& f : feats) trainer.update(f, delta);
            prev = EdgeContext{e.edge.tag, e.edge.len() > 1};
        }
    };

    for (int epoch = 0; epoch < epochs; ++epoch) {
        if (shuffle_seed) shuffle_indices(order, *shuffle_seed + 0x51EDu * epoch);
        for (size_t idx : order) {
            trainer.begin_instance();
            const DecodeResult pred =
                decode_lattice_impl(raw, tags, lattices[idx], store, open_mode);
            if (pred.edge_indices == gold_idx[idx]) continue;
            apply_sequence(lattices[idx], gold_idx[idx], +1);
            apply_sequence(lattices[idx], pred.edge_indices, -1);
        }
    }

    LinearModel model;
    model.kind = open_mode ? ModelKind::WordOpen : ModelKind::WordClosed;
    model.tags = tags;
    model.weights = trainer.averaged();
    model.scale = std::max(1LL, trainer.steps());
    return model;
}

}  // namespace latseg
