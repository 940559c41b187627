#include "latseg/pipeline.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <unordered_set>

namespace latseg {

namespace fs = std::filesystem;

size_t insert_gold_edges(WordLattice& lattice, const Analysis& gold) {
    std::unordered_set<Edge, EdgeHash> present;
    for (const WeightedEdge& we : lattice.edges) present.insert(we.edge);
    size_t inserted = 0;
    for (const Edge& e : gold.edges) {
        if (present.count(e)) continue;
        lattice.edges.push_back(WeightedEdge{e, 0, true});
        present.insert(e);
        ++inserted;
    }
    if (inserted) sort_lattice_edges(lattice);
    return inserted;
}

TrainedSystem stacked_train(const Corpus& corpus, const PipelineConfig& cfg,
                            const WordhoodStore* store, StackedTrainAudit* audit) {
    if (corpus.entries.empty()) throw DataError("empty training corpus");
    if (cfg.folds < 2) throw DataError("folds must be >= 2");
    if (cfg.delta < 0) throw DataError("delta must be >= 0");
    const size_t n = corpus.size();
    const size_t k = static_cast<size_t>(cfg.folds);
    if (k > n) throw DataError("more folds than training sentences");
    if (cfg.open_mode && !store) throw DataError("open mode requires wordhood resources");

    std::vector<size_t> order(n);
    for (size_t i = 0; i < n; ++i) order[i] = i;
    if (cfg.seed) shuffle_indices(order, *cfg.seed);

    // Contiguous blocks over the (possibly shuffled) order.
    std::vector<int> fold_of(n, 0);
    std::vector<std::vector<size_t>> fold_members(k);
    {
        size_t next = 0;
        for (size_t f = 0; f < k; ++f) {
            const size_t size = n / k + (f < n % k ? 1 : 0);
            for (size_t j = 0; j < size; ++j, ++next) {
                fold_of[order[next]] = static_cast<int>(f);
                fold_members[f].push_back(order[next]);
            }
        }
    }

    if (audit) {
        audit->fold_of_sentence = fold_of;
        audit->fold_train_sets.assign(k, {});
        audit->inserted_gold_edges = 0;
    }

    std::vector<WordLattice> lattices(n);
    for (size_t f = 0; f < k; ++f) {
        Corpus rest;
        rest.tags = corpus.tags;
        for (size_t i = 0; i < n; ++i)
            if (fold_of[i] != static_cast<int>(f)) {
                rest.entries.push_back(corpus.entries[i]);
                if (audit) audit->fold_train_sets[f].push_back(i);
            }
        const LinearModel fold_model = train_char_model(
            rest, cfg.char_epochs,
            cfg.seed ? std::optional<unsigned long long>(*cfg.seed + 0xF01Du * (f + 1))
                     : std::nullopt);
        const LabelTopology topo(fold_model.labels);
        for (size_t i : fold_members[f])
            lattices[i] = generate_lattice(fold_model, fold_model.scale, fold_model.labels, topo,
                                           corpus.entries[i].sentence, cfg.delta,
                                           cfg.max_word_len);
    }

    size_t inserted = 0;
    std::vector<Analysis> gold;
    gold.reserve(n);
    for (size_t i = 0; i < n; ++i) {
        inserted += insert_gold_edges(lattices[i], corpus.entries[i].gold);
        gold.push_back(corpus.entries[i].gold);
    }
    if (audit) audit->inserted_gold_edges = inserted;

    TrainedSystem sys;
    sys.word_model = train_word_model(
        lattices, gold, corpus.tags, cfg.word_epochs, store, cfg.open_mode,
        cfg.seed ? std::optional<unsigned long long>(*cfg.seed + 0x30B1u) : std::nullopt);
    sys.char_model = train_char_model(corpus, cfg.char_epochs, cfg.seed);
    return sys;
}

Analysis decode_sentence(const LinearModel& char_model, const LinearModel& word_model,
                         const PipelineConfig& cfg, const Sentence& c,
                         const WordhoodStore* store) {
    const WordLattice lattice = generate_lattice(char_model, c, cfg.delta, cfg.max_word_len);
    return decode_lattice(word_model, word_model.tags, lattice, store,
                          word_model.kind == ModelKind::WordOpen);
}

Analysis decode_char_only(const LinearModel& char_model, const Sentence& c) {
    return char_labels_to_analysis(viterbi_decode(char_model, c));
}

ThroughputReport benchmark_throughput(const LinearModel& char_model,
                                      const LinearModel& word_model, const PipelineConfig& cfg,
                                      const std::vector<Sentence>& sentences,
                                      const WordhoodStore* store) {
    if (sentences.empty()) throw DataError("no sentences to benchmark");
    using clock = std::chrono::steady_clock;
    ThroughputReport r;
    r.sentences = sentences.size();
    const LabelTopology topo(char_model.labels);
    const bool open = word_model.kind == ModelKind::WordOpen;
    const auto start = clock::now();
    for (const Sentence& c : sentences) {
        const auto t0 = clock::now();
        const WordLattice lattice = generate_lattice(char_model, char_model.scale,
                                                     char_model.labels, topo, c, cfg.delta,
                                                     cfg.max_word_len);
        const auto t1 = clock::now();
        decode_lattice(word_model, word_model.tags, lattice, store, open);
        const auto t2 = clock::now();
        r.lattice_seconds += std::chrono::duration<double>(t1 - t0).count();
        r.word_seconds += std::chrono::duration<double>(t2 - t1).count();
    }
    r.total_seconds = std::chrono::duration<double>(clock::now() - start).count();
    r.sentences_per_second = static_cast<double>(r.sentences) / r.total_seconds;
    return r;
}

std::string format_throughput(const ThroughputReport& r) {
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "Total time\t%.3f sec.\n"
                  "  Lattice generation\t%.3f sec.\n"
                  "  Word decoding\t%.3f sec.\n"
                  "Speed\t%.2f sent./sec.\n",
                  r.total_seconds, r.lattice_seconds, r.word_seconds, r.sentences_per_second);
    return buf;
}

namespace {

constexpr char kConfigFile[] = "config.tsv";

void write_config(const std::string& dir, const PipelineConfig& cfg) {
    std::ofstream out(dir + "/" + kConfigFile, std::ios::binary);
    if (!out) throw DataError("cannot write " + dir + "/" + kConfigFile);
    out << "delta\t" << Ratio::from_double(cfg.delta).to_string() << '\n';
    out << "max_word_len\t" << cfg.max_word_len << '\n';
    out << "open_mode\t" << (cfg.open_mode ? 1 : 0) << '\n';
}

PipelineConfig read_config(const std::string& dir) {
    std::ifstream in(dir + "/" + kConfigFile, std::ios::binary);
    if (!in) throw DataError("cannot open " + dir + "/" + kConfigFile);
    PipelineConfig cfg;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const size_t tab = line.find('\t');
        if (tab == std::string::npos) throw DataError(dir + "/config.tsv: expected key TAB value");
        const std::string key = line.substr(0, tab);
        const std::string value = line.substr(tab + 1);
        if (key == "delta")
            cfg.delta = Ratio::from_decimal(value).to_double();
        else if (key == "max_word_len")
            cfg.max_word_len = std::stoull(value);
        else if (key == "open_mode")
            cfg.open_mode = value == "1";
    }
    return cfg;
}

}  // namespace

void save_system(const std::string& dir, const TrainedSystem& sys, const PipelineConfig& cfg,
                 const WordhoodStore* store) {
    fs::create_directories(dir);
    sys.char_model.save(dir + "/char.model");
    sys.word_model.save(dir + "/word.model");
    write_config(dir, cfg);
    if (cfg.open_mode && store) {
        if (store->lexicon) store->lexicon->save(dir + "/lexicon.tsv");
        if (store->entries) store->entries->save(dir + "/entries.txt");
        if (store->ngrams) store->ngrams->save(dir + "/ngrams");
        if (store->pairs) store->pairs->save(dir + "/pairs.tsv");
    }
}

LoadedSystem load_system(const std::string& dir) {
    LoadedSystem out;
    out.system.char_model = LinearModel::load(dir + "/char.model");
    out.system.word_model = LinearModel::load(dir + "/word.model");
    if (out.system.char_model.kind != ModelKind::Char)
        throw DataError(dir + "/char.model: wrong model kind");
    if (out.system.word_model.kind == ModelKind::Char)
        throw DataError(dir + "/word.model: wrong model kind");
    out.config = read_config(dir);
    if (out.system.word_model.kind == ModelKind::WordOpen) {
        if (fs::exists(dir + "/lexicon.tsv")) out.store.lexicon = Lexicon::load(dir + "/lexicon.tsv");
        if (fs::exists(dir + "/entries.txt")) out.store.entries = EntrySet::load(dir + "/entries.txt");
        if (fs::exists(dir + "/ngrams/freq.tsv")) out.store.ngrams = NgramStore::load(dir + "/ngrams");
        if (fs::exists(dir + "/pairs.tsv")) out.store.pairs = RestrictedPairSet::load(dir + "/pairs.tsv");
    }
    return out;
}

WordhoodStore load_wordhood_resources(const std::string& lexicon_path,
                                      const std::string& entries_path,
                                      const std::string& ngrams_dir,
                                      const std::string& pairs_path) {
    WordhoodStore store;
    if (!lexicon_path.empty()) store.lexicon = Lexicon::load(lexicon_path);
    if (!entries_path.empty()) store.entries = EntrySet::load(entries_path);
    if (!ngrams_dir.empty()) store.ngrams = NgramStore::load(ngrams_dir);
    if (!pairs_path.empty()) store.pairs = RestrictedPairSet::load(pairs_path);
    return store;
}

}  // namespace latseg
