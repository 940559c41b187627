#pragma once

#include <iosfwd>
#include <vector>

#include "latseg/char_tagger.hpp"

namespace latseg {

// Lattice edge with its minimal margin to the best labeling. Margins share
// the lattice's denominator. Edges inserted by the training pipeline carry no
// margin evidence at all and are flagged weightless.
struct WeightedEdge {
    Edge edge;
    long long margin = 0;
    bool weightless = false;
};

struct WordLattice {
    Sentence sentence;
    double delta = 0;
    long long scale = 1;
    long long best_score = 0;
    std::vector<WeightedEdge> edges;  // sorted by (pos, len, tag)
};

struct ForwardBackward {
    int n_labels = 0;
    long long best = 0;
    // alpha: best prefix ending at i with label a, static+transition included.
    // alpha_in: alpha without position i's static part (entry score into a).
    // beta: best continuation after position i given label a at i.
    std::vector<long long> alpha, alpha_in, beta;

    long long alpha_at(size_t i, int a) const { return alpha[i * n_labels + a]; }
    long long beta_at(size_t i, int a) const { return beta[i * n_labels + a]; }
};

ForwardBackward forward_backward_max(const WeightSource& m, const LabelSet& labels,
                                     const LabelTopology& topo, const Sentence& c);

// All span/tag edges whose best containing labeling scores within delta of
// the optimum, with exact margins. delta may be +infinity.
WordLattice generate_lattice(const WeightSource& m, long long scale, const LabelSet& labels,
                             const LabelTopology& topo, const Sentence& c, double delta,
                             size_t max_word_len);
WordLattice generate_lattice(const LinearModel& m, const Sentence& c, double delta,
                             size_t max_word_len);

void sort_lattice_edges(WordLattice& lattice);

double oracle_recall(const std::vector<WordLattice>& lattices,
                     const std::vector<Analysis>& gold);
double lattice_scale(const std::vector<WordLattice>& lattices,
                     const std::vector<Analysis>& gold);

// Debug dump: "pos TAB word TAB tag TAB margin", blank line between sentences.
void dump_lattices(std::ostream& out, const std::vector<WordLattice>& lattices,
                   const TagSet& tags);

}  // namespace latseg
