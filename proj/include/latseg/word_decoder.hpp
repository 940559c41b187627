#pragma once

#include <optional>
#include <string>
#include <vector>

#include "latseg/lattice.hpp"
#include "latseg/model.hpp"
#include "latseg/wordhood.hpp"

namespace latseg {

// Generalized step function over margins: BEST for a zero margin, otherwise
// ceil(log2(ceil(m))) of the margin in model score units.
struct MarginBucket {
    bool best = false;
    int value = 0;
    bool operator==(const MarginBucket& o) const {
        return best == o.best && (best || value == o.value);
    }
};

MarginBucket margin_bucket(long long margin, long long scale);

inline constexpr int kBosTag = -1;

struct EdgeContext {
    int tag = kBosTag;
    bool multi = false;  // previous word longer than one character
};

// Feature keys for one lattice edge given its left context. Closed templates:
// word, word+tag, length flag, margin bucket, bucket+length, tag, tag+length,
// tag bigram, tag bigram with length flags. Open mode adds lexicon category,
// entry flag and RAV bucket features. Weightless edges emit no bucket
// features at all.
void extract_edge_features(const WeightedEdge& e, long long scale, const EdgeContext& prev,
                           const TagSet& tags, const WordhoodStore* store, bool open_mode,
                           std::vector<std::string>& out);

// Best full edge sequence through the lattice. DP state is (boundary,
// previous tag, previous length flag); ties prefer the earlier tag id and
// then the longer current word.
Analysis decode_lattice(const WeightSource& m, const TagSet& tags, const WordLattice& lattice,
                        const WordhoodStore* store, bool open_mode);
Analysis decode_lattice(const LinearModel& m, const WordLattice& lattice,
                        const WordhoodStore* store);

// Averaged-perceptron training over edge sequences. Every gold edge must
// already be present in its lattice.
LinearModel train_word_model(const std::vector<WordLattice>& lattices,
                             const std::vector<Analysis>& gold, const TagSet& tags, int epochs,
                             const WordhoodStore* store, bool open_mode,
                             std::optional<unsigned long long> shuffle_seed);

}  // namespace latseg
