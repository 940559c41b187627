#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "latseg/types.hpp"
#include "latseg/wordhood.hpp"

namespace latseg {

struct EvalCounts {
    size_t correct_st = 0;
    size_t correct_seg = 0;
    size_t predicted = 0;
    size_t gold = 0;

    double seg_f1() const;
    double st_f1() const;
};

// Micro-averaged edge F1 over parallel analyses of the same sentences.
// Matching is on (position, word) for segmentation and additionally the tag
// for joint S&T.
EvalCounts eval_counts(const std::vector<Analysis>& pred, const std::vector<Analysis>& gold);
double f1(const std::vector<Analysis>& pred, const std::vector<Analysis>& gold,
          bool ignore_tags);

struct BootstrapResult {
    double f1 = 0;          // point estimate on the full corpus
    double half_width = 0;  // central confidence interval half-width
};

// Sentence-level bootstrap: resample sentences with replacement, recompute F1
// per resample, take the central percentile interval. Deterministic per seed;
// each resample derives its own generator from the master seed.
BootstrapResult bootstrap_ci(const std::vector<Analysis>& pred,
                             const std::vector<Analysis>& gold, bool ignore_tags,
                             int resamples, double confidence, unsigned long long seed);

// Classification of wrong predicted words. Merges of complete gold words are
// granularity disagreements; a fragment carved out of one gold word at clean
// boundaries counts as granularity only when the fragment is itself a known
// word (lexicon entry or raw-corpus string above the frequency floor); other
// known words are KNOWN-WORD; the rest are flagged as suspect meaningless
// strings. The last class is a lexical proxy, not human judgment.
struct ErrorTable {
    size_t granularity = 0;
    size_t known_word = 0;
    size_t suspect_meaningless = 0;
    size_t total() const { return granularity + known_word + suspect_meaningless; }
};

ErrorTable error_report(const std::vector<Analysis>& pred, const std::vector<Analysis>& gold,
                        const Lexicon* lexicon, const NgramStore* store);

}  // namespace latseg
