#include "latseg/types.hpp"

namespace latseg {

Sentence::Sentence(std::u32string chars) : chars_(std::move(chars)) {
    if (chars_.empty()) throw StructuralError("empty sentence");
    for (size_t i = 0; i < chars_.size(); ++i)
        if (is_space_char(chars_[i]))
            throw StructuralError("whitespace character in sentence at index " + std::to_string(i));
}

Sentence Sentence::from_utf8(std::string_view utf8) { return Sentence(utf8_decode(utf8)); }

char position_tag_char(PositionTag p) {
    switch (p) {
        case PositionTag::S: return 'S';
        case PositionTag::B: return 'B';
        case PositionTag::M: return 'M';
        case PositionTag::E: return 'E';
    }
    return '?';
}

int TagSet::intern(std::string_view symbol) {
    if (symbol.empty()) throw StructuralError("empty POS tag");
    auto it = index_.find(std::string(symbol));
    if (it != index_.end()) return it->second;
    const int id = static_cast<int>(symbols_.size());
    symbols_.emplace_back(symbol);
    index_.emplace(symbols_.back(), id);
    return id;
}

int TagSet::find(std::string_view symbol) const {
    auto it = index_.find(std::string(symbol));
    return it == index_.end() ? -1 : it->second;
}

static constexpr PositionTag kScanOrder[4] = {PositionTag::S, PositionTag::B, PositionTag::M,
                                              PositionTag::E};

LabelSet LabelSet::from_tagset(const TagSet& tags) {
    return from_order({}, tags.size());
}

LabelSet LabelSet::from_gold(const TagSet& tags, const std::vector<std::vector<CharLabel>>& gold) {
    std::vector<CharLabel> order;
    for (const auto& seq : gold)
        for (const CharLabel& l : seq) order.push_back(l);
    return from_order(order, tags.size());
}

LabelSet LabelSet::from_order(const std::vector<CharLabel>& order, int tag_count) {
    if (tag_count <= 0) throw StructuralError("empty tagset");
    LabelSet ls;
    ls.tag_count_ = tag_count;
    ls.index_.assign(4 * static_cast<size_t>(tag_count), -1);
    auto add = [&ls](CharLabel l) {
        int& slot = ls.index_[static_cast<int>(l.pos) + 4 * l.tag];
        if (slot >= 0) return;
        slot = static_cast<int>(ls.labels_.size());
        ls.labels_.push_back(l);
    };
    for (const CharLabel& l : order) {
        if (l.tag < 0 || l.tag >= tag_count) throw StructuralError("label tag out of range");
        add(l);
    }
    for (int t = 0; t < tag_count; ++t)
        for (PositionTag p : kScanOrder) add(CharLabel{p, t});
    return ls;
}

size_t EdgeHash::operator()(const Edge& e) const {
    size_t h = std::hash<std::u32string>()(e.word);
    h ^= e.pos * 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2);
    h ^= static_cast<size_t>(e.tag) * 0xC2B2AE3D27D4EB4Full + (h << 6) + (h >> 2);
    return h;
}

void check_analysis(const Analysis& a, const Sentence& c) {
    if (a.edges.empty()) throw StructuralError("analysis has no edges");
    size_t pos = 0;
    for (size_t i = 0; i < a.edges.size(); ++i) {
        const Edge& e = a.edges[i];
        if (e.word.empty()) throw StructuralError("empty word at edge " + std::to_string(i));
        if (e.pos != pos)
            throw StructuralError("non-contiguous analysis at edge " + std::to_string(i));
        if (c.chars().compare(pos, e.word.size(), e.word) != 0)
            throw StructuralError("edge word mismatches sentence at edge " + std::to_string(i));
        pos += e.word.size();
    }
    if (pos != c.size()) throw StructuralError("analysis does not cover the sentence");
}

CharLabeledSentence analysis_to_char_labels(const Sentence& c, const Analysis& a) {
    check_analysis(a, c);
    CharLabeledSentence out;
    out.sentence = c;
    out.labels.reserve(c.size());
    for (const Edge& e : a.edges) {
        const size_t k = e.word.size();
        if (k == 1) {
            out.labels.push_back({PositionTag::S, e.tag});
        } else {
            out.labels.push_back({PositionTag::B, e.tag});
            for (size_t j = 1; j + 1 < k; ++j) out.labels.push_back({PositionTag::M, e.tag});
            out.labels.push_back({PositionTag::E, e.tag});
        }
    }
    return out;
}

void check_label_sequence(const std::vector<CharLabel>& labels) {
    if (labels.empty()) throw StructuralError("empty label sequence");
    bool in_word = false;  // a B..E run is open
    int word_tag = -1;
    for (size_t i = 0; i < labels.size(); ++i) {
        const CharLabel& l = labels[i];
        switch (l.pos) {
            case PositionTag::S:
                if (in_word)
                    throw StructuralError("S inside a word at index " + std::to_string(i));
                break;
            case PositionTag::B:
                if (in_word)
                    throw StructuralError("B inside a word at index " + std::to_string(i));
                in_word = true;
                word_tag = l.tag;
                break;
            case PositionTag::M:
            case PositionTag::E:
                if (!in_word)
                    throw StructuralError(std::string(1, position_tag_char(l.pos)) +
                                          " without preceding B at index " + std::to_string(i));
                if (l.tag != word_tag)
                    throw StructuralError("tag change mid-word at index " + std::to_string(i));
                if (l.pos == PositionTag::E) in_word = false;
                break;
        }
    }
    if (in_word)
        throw StructuralError("unterminated word at index " + std::to_string(labels.size() - 1));
}

Analysis char_labels_to_analysis(const CharLabeledSentence& cls) {
    if (cls.labels.size() != cls.sentence.size())
        throw StructuralError("label/sentence length mismatch");
    check_label_sequence(cls.labels);
    Analysis out;
    size_t start = 0;
    for (size_t i = 0; i < cls.labels.size(); ++i) {
        const PositionTag p = cls.labels[i].pos;
        if (p == PositionTag::S || p == PositionTag::B) start = i;
        if (p == PositionTag::S || p == PositionTag::E)
            out.edges.push_back(Edge{start, cls.sentence.chars().substr(start, i - start + 1),
                                     cls.labels[i].tag});
    }
    return out;
}

}  // namespace latseg
