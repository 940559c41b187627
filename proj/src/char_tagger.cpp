#include "latseg/char_tagger.hpp"

#include <algorithm>
#include <climits>
#include <random>

namespace latseg {

namespace {

constexpr long long kNegInf = LLONG_MIN / 4;
constexpr char kSep = '\x1f';

void append_int(std::string& s, long long v) {
    char buf[24];
    int n = std::snprintf(buf, sizeof buf, "%lld", v);
    s.append(buf, n);
}

// Static templates: tag byte, then the context characters relative to i.
struct StaticTemplate {
    char tag;
    int from;
    int to;  // inclusive
};
constexpr StaticTemplate kStaticTemplates[7] = {
    {'a', -1, -1}, {'b', 0, 0}, {'c', 1, 1},                  // unigrams
    {'d', -2, -1}, {'e', -1, 0}, {'f', 0, 1}, {'g', 1, 2},    // bigrams
};

void build_static_prefix(std::string& key, const Sentence& c, size_t i, const StaticTemplate& t) {
    key.clear();
    key.push_back(t.tag);
    for (int d = t.from; d <= t.to; ++d)
        utf8_append(key, c.at_padded(static_cast<ptrdiff_t>(i) + d));
    key.push_back(kSep);
}

void build_trans_key(std::string& key, int prev, int cur) {
    key.clear();
    key.push_back('h');
    if (prev == kBosLabel)
        key.push_back('B');
    else
        append_int(key, prev);
    key.push_back(kSep);
    append_int(key, cur);
}

}  // namespace

void extract_char_features(const Sentence& c, size_t i, int prev_label_id, int label_id,
                           std::vector<std::string>& out) {
    std::string key;
    for (const StaticTemplate& t : kStaticTemplates) {
        build_static_prefix(key, c, i, t);
        append_int(key, label_id);
        out.push_back(key);
    }
    build_trans_key(key, prev_label_id, label_id);
    out.push_back(key);
}

LabelTopology::LabelTopology(const LabelSet& labels) {
    size = labels.size();
    preds.resize(size);
    valid_start.assign(size, 0);
    valid_final.assign(size, 0);
    for (int a = 0; a < size; ++a) {
        const CharLabel la = labels.label(a);
        valid_start[a] = la.pos == PositionTag::B || la.pos == PositionTag::S;
        valid_final[a] = la.pos == PositionTag::E || la.pos == PositionTag::S;
        for (int p = 0; p < size; ++p) {
            const CharLabel lp = labels.label(p);
            const bool word_open = lp.pos == PositionTag::B || lp.pos == PositionTag::M;
            bool ok;
            if (word_open)
                ok = (la.pos == PositionTag::M || la.pos == PositionTag::E) && la.tag == lp.tag;
            else
                ok = la.pos == PositionTag::B || la.pos == PositionTag::S;
            if (ok) preds[a].push_back(p);
        }
    }
}

CharScoreTables build_char_tables(const WeightSource& m, const LabelSet& labels,
                                  const LabelTopology& topo, const Sentence& c) {
    const int L = labels.size();
    const size_t n = c.size();
    CharScoreTables t;
    t.n_labels = L;
    t.stat.assign(n * L, 0);
    t.trans.assign((L + 1) * static_cast<size_t>(L), 0);

    std::string key;
    for (size_t i = 0; i < n; ++i) {
        long long* row = &t.stat[i * L];
        for (const StaticTemplate& st : kStaticTemplates) {
            build_static_prefix(key, c, i, st);
            const size_t prefix_len = key.size();
            for (int a = 0; a < L; ++a) {
                key.resize(prefix_len);
                append_int(key, a);
                row[a] += m.weight(key);
            }
        }
    }
    for (int a = 0; a < L; ++a) {
        for (int p : topo.preds[a]) {
            build_trans_key(key, p, a);
            t.trans[p * static_cast<size_t>(L) + a] = m.weight(key);
        }
        if (topo.valid_start[a]) {
            build_trans_key(key, kBosLabel, a);
            t.trans[L * static_cast<size_t>(L) + a] = m.weight(key);
        }
    }
    return t;
}

long long score_sequence(const WeightSource& m, const LabelSet& labels, const Sentence& c,
                         const std::vector<CharLabel>& seq) {
    if (seq.size() != c.size()) throw StructuralError("label/sentence length mismatch");
    long long score = 0;
    std::vector<std::string> feats;
    feats.reserve(8);
    for (size_t i = 0; i < seq.size(); ++i) {
        feats.clear();
        const int prev = i == 0 ? kBosLabel : labels.id(seq[i - 1]);
        extract_char_features(c, i, prev, labels.id(seq[i]), feats);
        for (const std::string& f : feats) score += m.weight(f);
    }
    return score;
}

ViterbiResult viterbi_decode(const WeightSource& m, const LabelSet& labels,
                             const LabelTopology& topo, const Sentence& c) {
    const int L = labels.size();
    if (L == 0) throw StructuralError("empty label alphabet");
    const size_t n = c.size();
    const CharScoreTables t = build_char_tables(m, labels, topo, c);

    std::vector<long long> dp(n * L, kNegInf);
    std::vector<int> bp(n * L, -1);
    for (int a = 0; a < L; ++a)
        if (topo.valid_start[a]) dp[a] = t.stat_at(0, a) + t.trans_at(kBosLabel, a);
    for (size_t i = 1; i < n; ++i) {
        for (int a = 0; a < L; ++a) {
            long long best = kNegInf;
            int arg = -1;
            for (int p : topo.preds[a]) {
                const long long prev = dp[(i - 1) * L + p];
                if (prev == kNegInf) continue;
                const long long v = prev + t.trans_at(p, a);
                if (v > best) {
                    best = v;
                    arg = p;
                }
            }
            if (arg >= 0) {
                dp[i * L + a] = best + t.stat_at(i, a);
                bp[i * L + a] = arg;
            }
        }
    }

    long long best = kNegInf;
    int arg = -1;
    for (int a = 0; a < L; ++a) {
        if (!topo.valid_final[a] || dp[(n - 1) * L + a] == kNegInf) continue;
        if (dp[(n - 1) * L + a] > best) {
            best = dp[(n - 1) * L + a];
            arg = a;
        }
    }
    if (arg < 0) throw StructuralError("no well-formed labeling exists");

    ViterbiResult r;
    r.score = best;
    r.labels.resize(n);
    for (size_t i = n; i-- > 0;) {
        r.labels[i] = labels.label(arg);
        arg = bp[i * L + arg];
    }
    return r;
}

CharLabeledSentence viterbi_decode(const LinearModel& m, const Sentence& c) {
    LabelTopology topo(m.labels);
    ViterbiResult r = viterbi_decode(m, m.labels, topo, c);
    return CharLabeledSentence{c, std::move(r.labels)};
}

void shuffle_indices(std::vector<size_t>& idx, unsigned long long seed) {
    std::mt19937_64 rng(seed);
    for (size_t i = idx.size(); i > 1; --i) std::swap(idx[i - 1], idx[rng() % i]);
}

LinearModel train_char_model(const Corpus& corpus, int epochs,
                             std::optional<unsigned long long> shuffle_seed) {
    if (corpus.entries.empty()) throw StructuralError("empty training corpus");
    std::vector<std::vector<CharLabel>> gold;
    gold.reserve(corpus.size());
    for (const CorpusEntry& e : corpus.entries)
        gold.push_back(analysis_to_char_labels(e.sentence, e.gold).labels);

    const LabelSet labels = LabelSet::from_gold(corpus.tags, gold);
    const LabelTopology topo(labels);

    PerceptronTrainer trainer;
    const PerceptronTrainer::RawView raw = trainer.raw();
    std::vector<size_t> order(corpus.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::vector<std::string> feats;

    for (int epoch = 0; epoch < epochs; ++epoch) {
        if (shuffle_seed) shuffle_indices(order, *shuffle_seed + 0x9E37u * epoch);
        for (size_t idx : order) {
            trainer.begin_instance();
            const Sentence& c = corpus.entries[idx].sentence;
            ViterbiResult pred = viterbi_decode(raw, labels, topo, c);
            if (pred.labels == gold[idx]) continue;
            for (size_t i = 0; i < c.size(); ++i) {
                feats.clear();
                extract_char_features(c, i, i ? labels.id(gold[idx][i - 1]) : kBosLabel,
                                      labels.id(gold[idx][i]), feats);
                for (const std::string& f : feats) trainer.update(f, +1);
                feats.clear();
                extract_char_features(c, i, i ? labels.id(pred.labels[i - 1]) : kBosLabel,
                                      labels.id(pred.labels[i]), feats);
                for (const std::string& f : feats) trainer.update(f, -1);
            }
        }
    }

    LinearModel model;
    model.kind = ModelKind::Char;
    model.tags = corpus.tags;
    model.labels = labels;
    model.weights = trainer.averaged();
    model.scale = std::max(1LL, trainer.steps());
    return model;
}

}  // namespace latseg
