#include "latseg/eval.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <unordered_set>

namespace latseg {

namespace {

struct SentenceCounts {
    size_t correct_st = 0;
    size_t correct_seg = 0;
    size_t predicted = 0;
    size_t gold = 0;
};

std::u32string joined_text(const Analysis& a) {
    std::u32string s;
    for (const Edge& e : a.edges) s += e.word;
    return s;
}

SentenceCounts count_sentence(const Analysis& pred, const Analysis& gold) {
    if (joined_text(pred) != joined_text(gold))
        throw DataError("prediction and gold disagree on sentence text");
    SentenceCounts c;
    c.predicted = pred.edges.size();
    c.gold = gold.edges.size();
    std::unordered_set<Edge, EdgeHash> gold_st(gold.edges.begin(), gold.edges.end());
    std::unordered_set<Edge, EdgeHash> gold_seg;
    for (Edge e : gold.edges) {
        e.tag = 0;
        gold_seg.insert(e);
    }
    for (const Edge& e : pred.edges) {
        if (gold_st.count(e)) ++c.correct_st;
        Edge seg = e;
        seg.tag = 0;
        if (gold_seg.count(seg)) ++c.correct_seg;
    }
    return c;
}

std::vector<SentenceCounts> per_sentence_counts(const std::vector<Analysis>& pred,
                                                const std::vector<Analysis>& gold) {
    if (pred.size() != gold.size()) throw DataError("prediction/gold sentence count mismatch");
    std::vector<SentenceCounts> out;
    out.reserve(pred.size());
    for (size_t i = 0; i < pred.size(); ++i) out.push_back(count_sentence(pred[i], gold[i]));
    return out;
}

double f1_of(size_t correct, size_t predicted, size_t gold) {
    const size_t denom = predicted + gold;
    return denom == 0 ? 0.0 : 2.0 * static_cast<double>(correct) / static_cast<double>(denom);
}

uint64_t splitmix64(uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

}  // namespace

double EvalCounts::seg_f1() const { return f1_of(correct_seg, predicted, gold); }
double EvalCounts::st_f1() const { return f1_of(correct_st, predicted, gold); }

EvalCounts eval_counts(const std::vector<Analysis>& pred, const std::vector<Analysis>& gold) {
    EvalCounts total;
    for (const SentenceCounts& c : per_sentence_counts(pred, gold)) {
        total.correct_st += c.correct_st;
        total.correct_seg += c.correct_seg;
        total.predicted += c.predicted;
        total.gold += c.gold;
    }
    return total;
}

double f1(const std::vector<Analysis>& pred, const std::vector<Analysis>& gold,
          bool ignore_tags) {
    const EvalCounts c = eval_counts(pred, gold);
    return ignore_tags ? c.seg_f1() : c.st_f1();
}

BootstrapResult bootstrap_ci(const std::vector<Analysis>& pred,
                             const std::vector<Analysis>& gold, bool ignore_tags,
                             int resamples, double confidence, unsigned long long seed) {
    if (resamples < 1) throw StructuralError("resamples must be >= 1");
    if (!(confidence > 0.0 && confidence < 1.0))
        throw StructuralError("confidence must be in (0, 1)");
    const std::vector<SentenceCounts> counts = per_sentence_counts(pred, gold);
    const size_t n = counts.size();
    if (n == 0) throw StructuralError("empty evaluation set");

    BootstrapResult out;
    {
        EvalCounts total;
        for (const SentenceCounts& c : counts) {
            total.correct_st += c.correct_st;
            total.correct_seg += c.correct_seg;
            total.predicted += c.predicted;
            total.gold += c.gold;
        }
        out.f1 = ignore_tags ? total.seg_f1() : total.st_f1();
    }

    std::vector<double> samples(resamples);
    for (int b = 0; b < resamples; ++b) {
        std::mt19937_64 rng(splitmix64(seed ^ (0xB00757A9ull + static_cast<uint64_t>(b))));
        size_t correct = 0, predicted = 0, gold_edges = 0;
        for (size_t i = 0; i < n; ++i) {
            const SentenceCounts& c = counts[rng() % n];
            correct += ignore_tags ? c.correct_seg : c.correct_st;
            predicted += c.predicted;
            gold_edges += c.gold;
        }
        samples[b] = f1_of(correct, predicted, gold_edges);
    }
    std::sort(samples.begin(), samples.end());
    auto rank = [&](double q) {
        const double pos = q * static_cast<double>(resamples - 1);
        const long idx = std::lround(pos);
        return samples[std::clamp<long>(idx, 0, resamples - 1)];
    };
    const double lo = rank((1.0 - confidence) / 2.0);
    const double hi = rank((1.0 + confidence) / 2.0);
    out.half_width = (hi - lo) / 2.0;
    return out;
}

namespace {

bool known_word(const std::u32string& w, const Lexicon* lexicon, const NgramStore* store) {
    const std::string u8 = utf8_encode(w);
    if (lexicon && lexicon->categories(u8)) return true;
    if (store && store->frequency(u8) >= store->floor && store->frequency(u8) > 0) return true;
    return false;
}

}  // namespace

ErrorTable error_report(const std::vector<Analysis>& pred, const std::vector<Analysis>& gold,
                        const Lexicon* lexicon, const NgramStore* store) {
    if (pred.size() != gold.size()) throw DataError("prediction/gold sentence count mismatch");
    ErrorTable table;
    for (size_t s = 0; s < pred.size(); ++s) {
        const std::vector<Edge>& g = gold[s].edges;
        std::unordered_set<size_t> gold_starts, gold_ends;
        std::unordered_set<Edge, EdgeHash> gold_seg;
        for (Edge e : g) {
            gold_starts.insert(e.pos);
            gold_ends.insert(e.end());
            e.tag = 0;
            gold_seg.insert(e);
        }
        for (const Edge& e : pred[s].edges) {
            Edge seg = e;
            seg.tag = 0;
            if (gold_seg.count(seg)) continue;  // segmentation-correct

            const bool merge = gold_starts.count(e.pos) && gold_ends.count(e.end());
            if (merge) {
                ++table.granularity;
                continue;
            }
            const bool known = known_word(e.word, lexicon, store);
            if (known) {
                // Inside exactly one gold word, and that word is tiled by
                // predicted words: a pure split at plausible boundaries.
                const Edge* enclosing = nullptr;
                for (const Edge& ge : g)
                    if (ge.pos <= e.pos && e.end() <= ge.end()) {
                        enclosing = &ge;
                        break;
                    }
                bool pure_split = false;
                if (enclosing) {
                    bool aligned = true;
                    for (const Edge& pe : pred[s].edges) {
                        const bool overlaps =
                            pe.pos < enclosing->end() && pe.end() > enclosing->pos;
                        if (overlaps &&
                            (pe.pos < enclosing->pos || pe.end() > enclosing->end())) {
                            aligned = false;
                            break;
                        }
                    }
                    pure_split = aligned;
                }
                if (pure_split)
                    ++table.granularity;
                else
                    ++table.known_word;
            } else {
                ++table.suspect_meaningless;
            }
        }
    }
    return table;
}

}  // namespace latseg
