#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "latseg/types.hpp"

namespace latseg {

struct CorpusEntry {
    Sentence sentence;
    Analysis gold;
};

struct Corpus {
    std::vector<CorpusEntry> entries;
    TagSet tags;  // accumulated over all files read into this corpus

    size_t size() const { return entries.size(); }
};

// One sentence per line, space-separated "word_TAG" tokens, UTF-8, LF endings.
// Tags accumulate into corpus.tags so several files can share one tag space.
void read_corpus_into(const std::string& path, Corpus& corpus);
Corpus read_corpus(const std::string& path);

void write_corpus(std::ostream& out, const Corpus& corpus);
void write_corpus(const std::string& path, const Corpus& corpus);
std::string format_analysis(const Sentence& c, const Analysis& a, const TagSet& tags);

// Raw input for decoding: one sentence per line, no annotation.
std::vector<Sentence> read_raw_sentences(const std::string& path);

}  // namespace latseg
