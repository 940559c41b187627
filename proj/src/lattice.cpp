#include "latseg/lattice.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <ostream>
#include <unordered_set>

namespace latseg {

namespace {

constexpr long long kNegInf = LLONG_MIN / 4;

long long add_scores(long long a, long long b) {
    return a == kNegInf || b == kNegInf ? kNegInf : a + b;
}

}  // namespace

ForwardBackward forward_backward_max(const WeightSource& m, const LabelSet& labels,
                                     const LabelTopology& topo, const Sentence& c) {
    const int L = labels.size();
    const size_t n = c.size();
    const CharScoreTables t = build_char_tables(m, labels, topo, c);

    ForwardBackward fb;
    fb.n_labels = L;
    fb.alpha.assign(n * L, kNegInf);
    fb.alpha_in.assign(n * L, kNegInf);
    fb.beta.assign(n * L, kNegInf);

    for (int a = 0; a < L; ++a) {
        if (!topo.valid_start[a]) continue;
        fb.alpha_in[a] = t.trans_at(kBosLabel, a);
        fb.alpha[a] = fb.alpha_in[a] + t.stat_at(0, a);
    }
    for (size_t i = 1; i < n; ++i) {
        for (int a = 0; a < L; ++a) {
            long long best = kNegInf;
            for (int p : topo.preds[a]) {
                const long long prev = fb.alpha[(i - 1) * L + p];
                if (prev == kNegInf) continue;
                best = std::max(best, prev + t.trans_at(p, a));
            }
            fb.alpha_in[i * L + a] = best;
            if (best != kNegInf) fb.alpha[i * L + a] = best + t.stat_at(i, a);
        }
    }

    // succs mirror preds
    std::vector<std::vector<int>> succs(L);
    for (int a = 0; a < L; ++a)
        for (int p : topo.preds[a]) succs[p].push_back(a);

    for (int a = 0; a < L; ++a)
        if (topo.valid_final[a]) fb.beta[(n - 1) * L + a] = 0;
    for (size_t i = n - 1; i-- > 0;) {
        for (int a = 0; a < L; ++a) {
            long long best = kNegInf;
            for (int s : succs[a]) {
                const long long next = fb.beta[(i + 1) * L + s];
                if (next == kNegInf) continue;
                best = std::max(best, t.trans_at(a, s) + t.stat_at(i + 1, s) + next);
            }
            fb.beta[i * L + a] = best;
        }
    }

    fb.best = kNegInf;
    for (int a = 0; a < L; ++a)
        if (topo.valid_final[a]) fb.best = std::max(fb.best, fb.alpha[(n - 1) * L + a]);
    if (fb.best == kNegInf) throw StructuralError("no well-formed labeling exists");
    return fb;
}

WordLattice generate_lattice(const WeightSource& m, long long scale, const LabelSet& labels,
                             const LabelTopology& topo, const Sentence& c, double delta,
                             size_t max_word_len) {
    if (std::isnan(delta) || delta < 0) throw StructuralError("delta must be >= 0");
    if (max_word_len < 1) throw StructuralError("max_word_len must be >= 1");
    const bool unbounded = std::isinf(delta);
    const Ratio bound = unbounded ? Ratio{0, 1} : Ratio::from_double(delta);

    const int L = labels.size();
    const size_t n = c.size();
    const CharScoreTables t = build_char_tables(m, labels, topo, c);
    const ForwardBackward fb = forward_backward_max(m, labels, topo, c);

    WordLattice lat;
    lat.sentence = c;
    lat.delta = delta;
    lat.scale = scale;
    lat.best_score = fb.best;

    const int T = labels.tag_count();
    for (int tag = 0; tag < T; ++tag) {
        const int aS = labels.id({PositionTag::S, tag});
        const int aB = labels.id({PositionTag::B, tag});
        const int aM = labels.id({PositionTag::M, tag});
        const int aE = labels.id({PositionTag::E, tag});
        const long long tBM = t.trans_at(aB, aM);
        const long long tMM = t.trans_at(aM, aM);
        const long long tME = t.trans_at(aM, aE);
        const long long tBE = t.trans_at(aB, aE);

        for (size_t p = 0; p < n; ++p) {
            const size_t max_k = std::min(max_word_len, n - p);
            // k = 1: a single-character word labeled S.
            {
                const long long through = add_scores(
                    add_scores(fb.alpha_in[p * L + aS], t.stat_at(p, aS)), fb.beta_at(p, aS));
                if (through != kNegInf) {
                    const long long margin = fb.best - through;
                    if (unbounded || le_ratio(margin, scale, bound))
                        lat.edges.push_back(
                            {Edge{p, c.chars().substr(p, 1), tag}, margin, false});
                }
            }
            // k >= 2: forced B M^{k-2} E chain; middles accumulate incrementally.
            long long mid = 0;  // sum of (trans into M + static of M) for middles so far
            for (size_t k = 2; k <= max_k; ++k) {
                if (k > 2)
                    mid = add_scores(mid, (k == 3 ? tBM : tMM) + t.stat_at(p + k - 2, aM));
                const long long last_in = k == 2 ? tBE : tME;
                const long long internal =
                    add_scores(t.stat_at(p, aB),
                               add_scores(mid, last_in + t.stat_at(p + k - 1, aE)));
                const long long through =
                    add_scores(add_scores(fb.alpha_in[p * L + aB], internal),
                               fb.beta_at(p + k - 1, aE));
                if (through == kNegInf) continue;
                const long long margin = fb.best - through;
                if (unbounded || le_ratio(margin, scale, bound))
                    lat.edges.push_back({Edge{p, c.chars().substr(p, k), tag}, margin, false});
            }
        }
    }
    sort_lattice_edges(lat);
    return lat;
}

WordLattice generate_lattice(const LinearModel& m, const Sentence& c, double delta,
                             size_t max_word_len) {
    LabelTopology topo(m.labels);
    return generate_lattice(m, m.scale, m.labels, topo, c, delta, max_word_len);
}

void sort_lattice_edges(WordLattice& lattice) {
    std::sort(lattice.edges.begin(), lattice.edges.end(),
              [](const WeightedEdge& a, const WeightedEdge& b) {
                  if (a.edge.pos != b.edge.pos) return a.edge.pos < b.edge.pos;
                  if (a.edge.len() != b.edge.len()) return a.edge.len() < b.edge.len();
                  return a.edge.tag < b.edge.tag;
              });
}

namespace {

void check_parallel(size_t a, size_t b) {
    if (a != b) throw StructuralError("lattice/gold list length mismatch");
}

}  // namespace

double oracle_recall(const std::vector<WordLattice>& lattices,
                     const std::vector<Analysis>& gold) {
    check_parallel(lattices.size(), gold.size());
    size_t hit = 0, total = 0;
    for (size_t i = 0; i < gold.size(); ++i) {
        std::unordered_set<Edge, EdgeHash> in_lattice;
        for (const WeightedEdge& we : lattices[i].edges) in_lattice.insert(we.edge);
        for (const Edge& e : gold[i].edges) {
            ++total;
            if (in_lattice.count(e)) ++hit;
        }
    }
    return total == 0 ? 0.0 : static_cast<double>(hit) / static_cast<double>(total);
}

double lattice_scale(const std::vector<WordLattice>& lattices,
                     const std::vector<Analysis>& gold) {
    check_parallel(lattices.size(), gold.size());
    size_t edges = 0, total = 0;
    for (size_t i = 0; i < gold.size(); ++i) {
        edges += lattices[i].edges.size();
        total += gold[i].edges.size();
    }
    return total == 0 ? 0.0 : static_cast<double>(edges) / static_cast<double>(total);
}

void dump_lattices(std::ostream& out, const std::vector<WordLattice>& lattices,
                   const TagSet& tags) {
    bool first = true;
    for (const WordLattice& lat : lattices) {
        if (!first) out << '\n';
        first = false;
        for (const WeightedEdge& we : lat.edges) {
            out << we.edge.pos << '\t' << utf8_encode(we.edge.word) << '\t'
                << tags.symbol(we.edge.tag) << '\t';
            if (we.weightless)
                out << '*';
            else
                out << Ratio{we.margin, lat.scale}.to_string();
            out << '\n';
        }
    }
}

}  // namespace latseg
