#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "latseg/text.hpp"

namespace latseg {

// word -> categories, categories sorted and deduplicated per word.
class Lexicon {
  public:
    static Lexicon load(const std::string& path);
    void add(const std::string& word_utf8, const std::string& category);
    const std::vector<std::string>* categories(const std::string& word_utf8) const;
    size_t size() const { return map_.size(); }
    void save(const std::string& path) const;

  private:
    std::unordered_map<std::string, std::vector<std::string>> map_;
};

class EntrySet {
  public:
    static EntrySet load(const std::string& path);
    void add(const std::string& entry_utf8) { set_.insert(entry_utf8); }
    bool contains(const std::string& word_utf8) const { return set_.count(word_utf8) != 0; }
    size_t size() const { return set_.size(); }
    void save(const std::string& path) const;

  private:
    std::unordered_set<std::string> set_;
};

// The boundary set for raw-corpus counting: CJK and ASCII sentence
// punctuation plus any whitespace. Boundaries count as the sentinel on both
// sides of the strings they delimit.
bool is_boundary_char(char32_t c);

// Substring and left/right-context frequencies over a raw corpus. Strings
// whose total frequency falls below `floor` are pruned together with their
// contexts; contexts of surviving strings are kept untouched.
class NgramStore {
  public:
    size_t max_word_len = 20;
    unsigned long long floor = 1;

    unsigned long long frequency(const std::string& w_utf8) const;
    unsigned long long context_frequency(char32_t l, const std::string& w_utf8,
                                         char32_t r) const;

    void count_text(std::u32string_view text);  // one document / line
    void prune();

    void save(const std::string& dir) const;  // freq.tsv, ctx.tsv, meta.tsv
    static NgramStore load(const std::string& dir);

    static uint64_t pair_key(char32_t l, char32_t r) {
        return (static_cast<uint64_t>(l) << 32) | static_cast<uint64_t>(r);
    }

    using ContextCounts = std::unordered_map<uint64_t, unsigned long long>;
    const std::unordered_map<std::string, unsigned long long>& frequencies() const {
        return freq_;
    }
    const std::unordered_map<std::string, ContextCounts>& contexts() const { return ctx_; }

  private:
    std::unordered_map<std::string, unsigned long long> freq_;
    std::unordered_map<std::string, ContextCounts> ctx_;
};

NgramStore build_ngram_store(const std::string& raw_path, size_t max_word_len,
                             unsigned long long floor);

struct RestrictedPair {
    char32_t l = 0;
    char32_t r = 0;
    bool operator==(const RestrictedPair& o) const { return l == o.l && r == o.r; }
};

struct ScoredPair {
    RestrictedPair pair;
    unsigned long long score = 0;  // seed words matched during selection
};

struct RestrictedPairSet {
    std::vector<ScoredPair> pairs;  // selection order
    Ratio epsilon{1, 10000};
    bool truncated = false;  // fewer candidates than requested

    void save(const std::string& path) const;
    static RestrictedPairSet load(const std::string& path);
};

// 1 iff freq(w) > 0 and freq(l,w,r)/freq(w) >= epsilon.
int match(const NgramStore& store, const std::string& w_utf8, RestrictedPair pair,
          const Ratio& epsilon);

int rav(const NgramStore& store, const RestrictedPairSet& pairs, const std::string& w_utf8);

// Greedy selection: every (l,r) context pair in the store is scored by how
// many distinct seed words it matches; top pair_count by score, ties broken
// by (l, r) code points.
RestrictedPairSet select_restricted_pairs(const NgramStore& store,
                                          const std::vector<std::string>& seed_words,
                                          size_t pair_count, const Ratio& epsilon);

// Aggregate view used by the word-level features. All members optional.
struct WordhoodStore {
    std::optional<Lexicon> lexicon;
    std::optional<EntrySet> entries;
    std::optional<NgramStore> ngrams;
    std::optional<RestrictedPairSet> pairs;
};

inline constexpr int kRavUnknown = -1;

struct WordhoodResult {
    const std::vector<std::string>* categories = nullptr;  // may be null
    int entry_flag = 0;
    int rav_bucket = kRavUnknown;  // ceil(RAV/2), or kRavUnknown below floor/absent
};

WordhoodResult wordhood_lookup(const WordhoodStore& store, const std::string& word_utf8);

}  // namespace latseg
