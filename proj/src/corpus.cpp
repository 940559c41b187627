#include "latseg/corpus.hpp"

#include <fstream>
#include <sstream>

namespace latseg {

namespace {

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path);
    return in;
}

[[noreturn]] void parse_fail(const std::string& path, size_t line_no, const std::string& what) {
    throw DataError(path + ":" + std::to_string(line_no) + ": " + what);
}

}  // namespace

void read_corpus_into(const std::string& path, Corpus& corpus) {
    std::ifstream in = open_input(path);
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) parse_fail(path, line_no, "empty line");
        std::u32string chars;
        Analysis gold;
        size_t start = 0;
        while (start <= line.size()) {
            size_t end = line.find(' ', start);
            if (end == std::string::npos) end = line.size();
            const std::string_view token(line.data() + start, end - start);
            if (token.empty()) parse_fail(path, line_no, "empty token");
            const size_t sep = token.rfind('_');
            if (sep == std::string::npos)
                parse_fail(path, line_no, "token missing the _ separator: " + std::string(token));
            const std::string_view word_u8 = token.substr(0, sep);
            const std::string_view tag = token.substr(sep + 1);
            if (word_u8.empty()) parse_fail(path, line_no, "empty word");
            if (tag.empty()) parse_fail(path, line_no, "empty tag");
            if (word_u8.find('_') != std::string_view::npos)
                parse_fail(path, line_no, "word contains _: " + std::string(token));
            std::u32string word;
            try {
                word = utf8_decode(word_u8);
            } catch (const DataError& e) {
                parse_fail(path, line_no, e.what());
            }
            for (char32_t c : word)
                if (is_space_char(c)) parse_fail(path, line_no, "whitespace inside token");
            for (char32_t c : utf8_decode(tag))
                if (is_space_char(c)) parse_fail(path, line_no, "whitespace inside tag");
            gold.edges.push_back(Edge{chars.size(), word, corpus.tags.intern(tag)});
            chars += word;
            if (end == line.size()) break;
            start = end + 1;
        }
        corpus.entries.push_back(CorpusEntry{Sentence(std::move(chars)), std::move(gold)});
    }
}

Corpus read_corpus(const std::string& path) {
    Corpus corpus;
    read_corpus_into(path, corpus);
    return corpus;
}

std::string format_analysis(const Sentence& c, const Analysis& a, const TagSet& tags) {
    check_analysis(a, c);
    std::string out;
    for (size_t i = 0; i < a.edges.size(); ++i) {
        if (i) out.push_back(' ');
        out += utf8_encode(a.edges[i].word);
        out.push_back('_');
        out += tags.symbol(a.edges[i].tag);
    }
    return out;
}

void write_corpus(std::ostream& out, const Corpus& corpus) {
    for (const CorpusEntry& e : corpus.entries)
        out << format_analysis(e.sentence, e.gold, corpus.tags) << '\n';
}

void write_corpus(const std::string& path, const Corpus& corpus) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path);
    write_corpus(out, corpus);
}

std::vector<Sentence> read_raw_sentences(const std::string& path) {
    std::ifstream in = open_input(path);
    std::vector<Sentence> out;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) parse_fail(path, line_no, "empty line");
        try {
            out.push_back(Sentence::from_utf8(line));
        } catch (const std::runtime_error& e) {
            parse_fail(path, line_no, e.what());
        }
    }
    return out;
}

}  // namespace latseg
