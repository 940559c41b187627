#pragma once

#include <optional>
#include <string>
#include <vector>

#include "latseg/corpus.hpp"
#include "latseg/eval.hpp"
#include "latseg/lattice.hpp"
#include "latseg/word_decoder.hpp"

namespace latseg {

struct PipelineConfig {
    double delta = 15.0;
    int folds = 10;
    size_t max_word_len = 20;
    int char_epochs = 10;
    int word_epochs = 10;
    bool open_mode = false;
    std::optional<unsigned long long> seed;  // no seed: corpus order everywhere
};

struct TrainedSystem {
    LinearModel char_model;
    LinearModel word_model;
};

// Bookkeeping for fold-leakage audits in tests.
struct StackedTrainAudit {
    std::vector<int> fold_of_sentence;                 // corpus index -> fold
    std::vector<std::vector<size_t>> fold_train_sets;  // per fold: indices its model saw
    size_t inserted_gold_edges = 0;
};

// Adds every gold edge missing from the lattice as a weightless edge.
// Returns the number inserted; never removes or reweights existing edges.
size_t insert_gold_edges(WordLattice& lattice, const Analysis& gold);

// Stacked training: per-fold character models produce training lattices the
// word model learns from, so the word model never consumes a lattice built by
// a model that saw the sentence. The final character model uses the whole
// corpus.
TrainedSystem stacked_train(const Corpus& corpus, const PipelineConfig& cfg,
                            const WordhoodStore* store, StackedTrainAudit* audit = nullptr);

Analysis decode_sentence(const LinearModel& char_model, const LinearModel& word_model,
                         const PipelineConfig& cfg, const Sentence& c,
                         const WordhoodStore* store);

Analysis decode_char_only(const LinearModel& char_model, const Sentence& c);

struct ThroughputReport {
    size_t sentences = 0;
    double total_seconds = 0;
    double lattice_seconds = 0;
    double word_seconds = 0;
    double sentences_per_second = 0;
};

ThroughputReport benchmark_throughput(const LinearModel& char_model,
                                      const LinearModel& word_model, const PipelineConfig& cfg,
                                      const std::vector<Sentence>& sentences,
                                      const WordhoodStore* store);
std::string format_throughput(const ThroughputReport& r);

// Model directory: char.model, word.model, config.tsv, plus copies of the
// wordhood resources when trained in open mode, so decoding needs only the
// directory.
void save_system(const std::string& dir, const TrainedSystem& sys, const PipelineConfig& cfg,
                 const WordhoodStore* store);

struct LoadedSystem {
    TrainedSystem system;
    PipelineConfig config;
    WordhoodStore store;
};

LoadedSystem load_system(const std::string& dir);

WordhoodStore load_wordhood_resources(const std::string& lexicon_path,
                                      const std::string& entries_path,
                                      const std::string& ngrams_dir,
                                      const std::string& pairs_path);

}  // namespace latseg
