#include "latseg/wordhood.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>

namespace latseg {

namespace {

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path);
    return in;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path);
    return out;
}

char32_t decode_single(const std::string& field, const std::string& where) {
    const std::u32string u = utf8_decode(field);
    if (u.size() != 1) throw DataError(where + ": expected a single character, got '" + field + "'");
    return u[0];
}

unsigned long long parse_count(const std::string& s, const std::string& where) {
    try {
        size_t used = 0;
        const unsigned long long v = std::stoull(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw DataError(where + ": bad count '" + s + "'");
    }
}

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> out;
    size_t start = 0;
    while (true) {
        const size_t end = line.find('\t', start);
        if (end == std::string::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, end - start));
        start = end + 1;
    }
}

}  // namespace

Lexicon Lexicon::load(const std::string& path) {
    std::ifstream in = open_input(path);
    Lexicon lex;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const std::vector<std::string> fields = split_tabs(line);
        if (fields.size() != 2 || fields[0].empty() || fields[1].empty())
            throw DataError(path + ":" + std::to_string(line_no) +
                            ": expected 'word TAB category'");
        lex.add(fields[0], fields[1]);
    }
    return lex;
}

void Lexicon::add(const std::string& word_utf8, const std::string& category) {
    std::vector<std::string>& cats = map_[word_utf8];
    const auto it = std::lower_bound(cats.begin(), cats.end(), category);
    if (it == cats.end() || *it != category) cats.insert(it, category);
}

const std::vector<std::string>* Lexicon::categories(const std::string& word_utf8) const {
    const auto it = map_.find(word_utf8);
    return it == map_.end() ? nullptr : &it->second;
}

void Lexicon::save(const std::string& path) const {
    std::vector<std::string> lines;
    for (const auto& [word, cats] : map_)
        for (const std::string& c : cats) lines.push_back(word + '\t' + c);
    std::sort(lines.begin(), lines.end());
    std::ofstream out = open_output(path);
    for (const std::string& l : lines) out << l << '\n';
}

EntrySet EntrySet::load(const std::string& path) {
    std::ifstream in = open_input(path);
    EntrySet set;
    std::string line;
    while (std::getline(in, line))
        if (!line.empty()) set.add(line);
    return set;
}

void EntrySet::save(const std::string& path) const {
    std::vector<std::string> lines(set_.begin(), set_.end());
    std::sort(lines.begin(), lines.end());
    std::ofstream out = open_output(path);
    for (const std::string& l : lines) out << l << '\n';
}

bool is_boundary_char(char32_t c) {
    if (is_space_char(c)) return true;
    switch (c) {
        case U'，': case U'。': case U'！': case U'？': case U'；': case U'：': case U'、':
        case U'.': case U',': case U'!': case U'?': case U';': case U':':
            return true;
        default:
            return false;
    }
}

unsigned long long NgramStore::frequency(const std::string& w_utf8) const {
    const auto it = freq_.find(w_utf8);
    return it == freq_.end() ? 0 : it->second;
}

unsigned long long NgramStore::context_frequency(char32_t l, const std::string& w_utf8,
                                                 char32_t r) const {
    const auto it = ctx_.find(w_utf8);
    if (it == ctx_.end()) return 0;
    const auto jt = it->second.find(pair_key(l, r));
    return jt == it->second.end() ? 0 : jt->second;
}

void NgramStore::count_text(std::u32string_view text) {
    size_t seg_start = 0;
    std::string w;
    for (size_t i = 0; i <= text.size(); ++i) {
        const bool boundary = i == text.size() || is_boundary_char(text[i]);
        if (!boundary) continue;
        // segment [seg_start, i)
        for (size_t s = seg_start; s < i; ++s) {
            const char32_t l = s > seg_start ? text[s - 1] : kBoundaryChar;
            w.clear();
            for (size_t e = s + 1; e <= i && e - s <= max_word_len; ++e) {
                utf8_append(w, text[e - 1]);
                const char32_t r = e < i ? text[e] : kBoundaryChar;
                ++freq_[w];
                ++ctx_[w][pair_key(l, r)];
            }
        }
        seg_start = i + 1;
    }
}

void NgramStore::prune() {
    for (auto it = freq_.begin(); it != freq_.end();) {
        if (it->second < floor) {
            ctx_.erase(it->first);
            it = freq_.erase(it);
        } else {
            ++it;
        }
    }
}

void NgramStore::save(const std::string& dir) const {
    std::filesystem::create_directories(dir);
    {
        std::vector<std::string> lines;
        lines.reserve(freq_.size());
        for (const auto& [w, n] : freq_) lines.push_back(w + '\t' + std::to_string(n));
        std::sort(lines.begin(), lines.end());
        std::ofstream out = open_output(dir + "/freq.tsv");
        for (const std::string& l : lines) out << l << '\n';
    }
    {
        std::vector<std::string> lines;
        std::string l8, r8;
        for (const auto& [w, counts] : ctx_) {
            for (const auto& [key, n] : counts) {
                l8.clear();
                r8.clear();
                utf8_append(l8, static_cast<char32_t>(key >> 32));
                utf8_append(r8, static_cast<char32_t>(key & 0xFFFFFFFFu));
                lines.push_back(l8 + '\t' + w + '\t' + r8 + '\t' + std::to_string(n));
            }
        }
        std::sort(lines.begin(), lines.end());
        std::ofstream out = open_output(dir + "/ctx.tsv");
        for (const std::string& l : lines) out << l << '\n';
    }
    {
        std::ofstream out = open_output(dir + "/meta.tsv");
        out << "max_word_len\t" << max_word_len << '\n';
        out << "floor\t" << floor << '\n';
    }
}

NgramStore NgramStore::load(const std::string& dir) {
    NgramStore store;
    {
        std::ifstream in = open_input(dir + "/meta.tsv");
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            const std::vector<std::string> f = split_tabs(line);
            if (f.size() != 2) throw DataError(dir + "/meta.tsv: expected 'key TAB value'");
            if (f[0] == "max_word_len")
                store.max_word_len = parse_count(f[1], dir + "/meta.tsv");
            else if (f[0] == "floor")
                store.floor = parse_count(f[1], dir + "/meta.tsv");
        }
    }
    {
        std::ifstream in = open_input(dir + "/freq.tsv");
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            const std::vector<std::string> f = split_tabs(line);
            if (f.size() != 2) throw DataError(dir + "/freq.tsv: expected 'string TAB count'");
            store.freq_[f[0]] = parse_count(f[1], dir + "/freq.tsv");
        }
    }
    {
        std::ifstream in = open_input(dir + "/ctx.tsv");
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            const std::vector<std::string> f = split_tabs(line);
            if (f.size() != 4)
                throw DataError(dir + "/ctx.tsv: expected 'l TAB string TAB r TAB count'");
            const char32_t l = decode_single(f[0], dir + "/ctx.tsv");
            const char32_t r = decode_single(f[2], dir + "/ctx.tsv");
            store.ctx_[f[1]][pair_key(l, r)] = parse_count(f[3], dir + "/ctx.tsv");
        }
    }
    return store;
}

NgramStore build_ngram_store(const std::string& raw_path, size_t max_word_len,
                             unsigned long long floor) {
    if (max_word_len < 1) throw StructuralError("max_word_len must be >= 1");
    std::ifstream in = open_input(raw_path);
    NgramStore store;
    store.max_word_len = max_word_len;
    store.floor = floor;
    std::string line;
    while (std::getline(in, line)) store.count_text(utf8_decode(line));
    store.prune();
    return store;
}

int match(const NgramStore& store, const std::string& w_utf8, RestrictedPair pair,
          const Ratio& epsilon) {
    const unsigned long long f = store.frequency(w_utf8);
    if (f == 0) return 0;
    const unsigned long long c = store.context_frequency(pair.l, w_utf8, pair.r);
    return ge_ratio(c, f, epsilon) ? 1 : 0;
}

int rav(const NgramStore& store, const RestrictedPairSet& pairs, const std::string& w_utf8) {
    int total = 0;
    for (const ScoredPair& sp : pairs.pairs) total += match(store, w_utf8, sp.pair, pairs.epsilon);
    return total;
}

RestrictedPairSet select_restricted_pairs(const NgramStore& store,
                                          const std::vector<std::string>& seed_words,
                                          size_t pair_count, const Ratio& epsilon) {
    if (seed_words.empty()) throw StructuralError("empty seed word list");
    std::vector<std::string> seeds = seed_words;
    std::sort(seeds.begin(), seeds.end());
    seeds.erase(std::unique(seeds.begin(), seeds.end()), seeds.end());

    std::unordered_map<uint64_t, unsigned long long> scores;
    for (const auto& [w, counts] : store.contexts())
        for (const auto& [key, n] : counts) scores.emplace(key, 0);
    for (const std::string& w : seeds) {
        const unsigned long long f = store.frequency(w);
        if (f == 0) continue;
        const auto it = store.contexts().find(w);
        if (it == store.contexts().end()) continue;
        for (const auto& [key, n] : it->second)
            if (ge_ratio(n, f, epsilon)) ++scores[key];
    }

    std::vector<ScoredPair> ranked;
    ranked.reserve(scores.size());
    for (const auto& [key, score] : scores)
        ranked.push_back({RestrictedPair{static_cast<char32_t>(key >> 32),
                                         static_cast<char32_t>(key & 0xFFFFFFFFu)},
                          score});
    std::sort(ranked.begin(), ranked.end(), [](const ScoredPair& a, const ScoredPair& b) {
        if (a.score != b.score) return a.score > b.score;
        if (a.pair.l != b.pair.l) return a.pair.l < b.pair.l;
        return a.pair.r < b.pair.r;
    });

    RestrictedPairSet out;
    out.epsilon = epsilon;
    out.truncated = ranked.size() < pair_count;
    if (ranked.size() > pair_count) ranked.resize(pair_count);
    out.pairs = std::move(ranked);
    return out;
}

void RestrictedPairSet::save(const std::string& path) const {
    std::ofstream out = open_output(path);
    out << "ε=" << epsilon.to_string() << " count=" << pairs.size() << '\n';
    std::string l8, r8;
    for (const ScoredPair& sp : pairs) {
        l8.clear();
        r8.clear();
        utf8_append(l8, sp.pair.l);
        utf8_append(r8, sp.pair.r);
        out << l8 << '\t' << r8 << '\t' << sp.score << '\n';
    }
}

RestrictedPairSet RestrictedPairSet::load(const std::string& path) {
    std::ifstream in = open_input(path);
    RestrictedPairSet set;
    std::string line;
    if (!std::getline(in, line)) throw DataError(path + ": empty pair file");
    {
        const std::string eps_tag = "ε=";
        const size_t eps_pos = line.find(eps_tag);
        const size_t sp = line.find(' ');
        if (eps_pos != 0 || sp == std::string::npos)
            throw DataError(path + ": bad header '" + line + "'");
        set.epsilon = Ratio::from_decimal(line.substr(eps_tag.size(), sp - eps_tag.size()));
    }
    size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const std::vector<std::string> f = split_tabs(line);
        if (f.size() != 3)
            throw DataError(path + ":" + std::to_string(line_no) + ": expected 3 fields");
        set.pairs.push_back({RestrictedPair{decode_single(f[0], path), decode_single(f[1], path)},
                             parse_count(f[2], path)});
    }
    return set;
}

WordhoodResult wordhood_lookup(const WordhoodStore& store, const std::string& word_utf8) {
    WordhoodResult out;
    if (store.lexicon) out.categories = store.lexicon->categories(word_utf8);
    if (store.entries) out.entry_flag = store.entries->contains(word_utf8) ? 1 : 0;
    if (store.ngrams && store.pairs && store.ngrams->frequency(word_utf8) > 0) {
        const int v = rav(*store.ngrams, *store.pairs, word_utf8);
        out.rav_bucket = (v + 1) / 2;  // ceil(RAV/2)
    }
    return out;
}

}  // namespace latseg
