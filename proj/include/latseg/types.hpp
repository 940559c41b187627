#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "latseg/text.hpp"

namespace latseg {

// A sentence is a sequence of Unicode scalar values. Whitespace is the token
// delimiter in corpus files, so it can never occur inside a sentence.
class Sentence {
  public:
    Sentence() = default;
    explicit Sentence(std::u32string chars);
    static Sentence from_utf8(std::string_view utf8);

    const std::u32string& chars() const { return chars_; }
    size_t size() const { return chars_.size(); }
    char32_t at(size_t i) const { return chars_[i]; }
    // Positions outside [0, size) read as the boundary sentinel.
    char32_t at_padded(ptrdiff_t i) const {
        return i >= 0 && i < static_cast<ptrdiff_t>(chars_.size()) ? chars_[i] : kBoundaryChar;
    }
    std::string utf8() const { return utf8_encode(chars_); }
    std::string utf8_slice(size_t pos, size_t len) const {
        return utf8_encode(std::u32string_view(chars_).substr(pos, len));
    }
    bool operator==(const Sentence& o) const { return chars_ == o.chars_; }

  private:
    std::u32string chars_;
};

enum class PositionTag : uint8_t { S = 0, B = 1, M = 2, E = 3 };

char position_tag_char(PositionTag p);

// POS tags interned into dense ids. Insertion order is first occurrence in
// the data, which later drives label search order and tie-breaking.
class TagSet {
  public:
    int intern(std::string_view symbol);
    int find(std::string_view symbol) const;  // -1 when absent
    const std::string& symbol(int id) const { return symbols_[id]; }
    int size() const { return static_cast<int>(symbols_.size()); }
    const std::vector<std::string>& symbols() const { return symbols_; }

  private:
    std::vector<std::string> symbols_;
    std::unordered_map<std::string, int> index_;
};

struct CharLabel {
    PositionTag pos = PositionTag::S;
    int tag = 0;
    bool operator==(const CharLabel& o) const { return pos == o.pos && tag == o.tag; }
};

// Dense ids over the label alphabet S x T. Ids follow first occurrence in the
// training gold when built from a corpus; a label that never occurs in gold is
// appended afterwards, scanning tags in id order and positions as S,B,M,E.
// A fresh alphabet built straight from a tagset uses that same scan, which
// puts <S, first tag> at id 0.
class LabelSet {
  public:
    static LabelSet from_tagset(const TagSet& tags);
    // gold: concatenated label sequences in corpus order.
    static LabelSet from_gold(const TagSet& tags, const std::vector<std::vector<CharLabel>>& gold);
    static LabelSet from_order(const std::vector<CharLabel>& order, int tag_count);

    int id(CharLabel l) const { return index_[static_cast<int>(l.pos) + 4 * l.tag]; }
    CharLabel label(int id) const { return labels_[id]; }
    int size() const { return static_cast<int>(labels_.size()); }
    int tag_count() const { return tag_count_; }
    const std::vector<CharLabel>& labels() const { return labels_; }

  private:
    std::vector<CharLabel> labels_;  // id -> label
    std::vector<int> index_;         // (pos, tag) -> id
    int tag_count_ = 0;
};

// A positioned word hypothesis: `pos` counts the characters before the word.
struct Edge {
    size_t pos = 0;
    std::u32string word;
    int tag = 0;

    size_t len() const { return word.size(); }
    size_t end() const { return pos + word.size(); }
    bool operator==(const Edge& o) const { return pos == o.pos && word == o.word && tag == o.tag; }
};

struct EdgeHash {
    size_t operator()(const Edge& e) const;
};

// A full analysis: edges tile the sentence from position 0.
struct Analysis {
    std::vector<Edge> edges;
    bool operator==(const Analysis& o) const { return edges == o.edges; }
};

void check_analysis(const Analysis& a, const Sentence& c);

struct CharLabeledSentence {
    Sentence sentence;
    std::vector<CharLabel> labels;
};

CharLabeledSentence analysis_to_char_labels(const Sentence& c, const Analysis& a);
Analysis char_labels_to_analysis(const CharLabeledSentence& cls);

// Checks S / B M* E runs with a stable tag per run; throws StructuralError
// naming the first offending index.
void check_label_sequence(const std::vector<CharLabel>& labels);

}  // namespace latseg
