#pragma once

#include <optional>
#include <vector>

#include "latseg/corpus.hpp"
#include "latseg/model.hpp"

namespace latseg {

inline constexpr int kBosLabel = -1;

// The eight feature keys of position i: three character unigrams, four
// character bigrams, one label transition. Out-of-range context characters
// read as the boundary sentinel; prev == kBosLabel marks sentence start.
void extract_char_features(const Sentence& c, size_t i, int prev_label_id, int label_id,
                           std::vector<std::string>& out);

// Valid label moves: a word is S or B M* E, and every character of a word
// carries the word's tag.
struct LabelTopology {
    explicit LabelTopology(const LabelSet& labels);
    std::vector<std::vector<int>> preds;  // per label id, ascending
    std::vector<char> valid_start;
    std::vector<char> valid_final;
    int size;
};

// Per-sentence score tables: static part (unigram+bigram templates) for each
// (position, label) and the transition matrix with a begin-of-sentence row.
struct CharScoreTables {
    int n_labels = 0;
    std::vector<long long> stat;   // [i * L + a]
    std::vector<long long> trans;  // [(p + 1) * L + a], row L is BOS

    long long stat_at(size_t i, int a) const { return stat[i * n_labels + a]; }
    long long trans_at(int prev, int cur) const {
        return trans[(prev == kBosLabel ? n_labels : prev) * static_cast<size_t>(n_labels) + cur];
    }
};

CharScoreTables build_char_tables(const WeightSource& m, const LabelSet& labels,
                                  const LabelTopology& topo, const Sentence& c);

long long score_sequence(const WeightSource& m, const LabelSet& labels, const Sentence& c,
                         const std::vector<CharLabel>& seq);

struct ViterbiResult {
    std::vector<CharLabel> labels;
    long long score = 0;
};

ViterbiResult viterbi_decode(const WeightSource& m, const LabelSet& labels,
                             const LabelTopology& topo, const Sentence& c);
CharLabeledSentence viterbi_decode(const LinearModel& m, const Sentence& c);

// Averaged-perceptron training over character labels. One step per sentence
// visit; deterministic for a given seed (no seed: corpus order every epoch).
LinearModel train_char_model(const Corpus& corpus, int epochs,
                             std::optional<unsigned long long> shuffle_seed);

// Deterministic Fisher-Yates used wherever instance order is shuffled.
void shuffle_indices(std::vector<size_t>& idx, unsigned long long seed);

}  // namespace latseg
