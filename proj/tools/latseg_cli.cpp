#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "latseg/pipeline.hpp"

namespace {

using namespace latseg;

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path);
    return out;
}

int cmd_train(const std::string& corpus_path, const std::string& out_dir, PipelineConfig cfg,
              const std::string& lexicon, const std::string& entries, const std::string& ngrams,
              const std::string& pairs) {
    const Corpus corpus = read_corpus(corpus_path);
    WordhoodStore store;
    if (cfg.open_mode)
        store = load_wordhood_resources(lexicon, entries, ngrams, pairs);
    const TrainedSystem sys = stacked_train(corpus, cfg, cfg.open_mode ? &store : nullptr);
    save_system(out_dir, sys, cfg, cfg.open_mode ? &store : nullptr);
    std::cout << "trained on " << corpus.size() << " sentences, " << corpus.tags.size()
              << " tags\n"
              << "char model: " << sys.char_model.weights.size() << " features\n"
              << "word model: " << sys.word_model.weights.size() << " features\n"
              << "model dir: " << out_dir << '\n';
    return 0;
}

int cmd_decode(const std::string& model_dir, const std::string& input,
               const std::string& output, bool char_only) {
    const LoadedSystem sys = load_system(model_dir);
    const std::vector<Sentence> sentences = read_raw_sentences(input);
    std::ofstream out = open_output(output);
    const WordhoodStore* store =
        sys.system.word_model.kind == ModelKind::WordOpen ? &sys.store : nullptr;
    for (const Sentence& c : sentences) {
        const Analysis a =
            char_only ? decode_char_only(sys.system.char_model, c)
                      : decode_sentence(sys.system.char_model, sys.system.word_model,
                                        sys.config, c, store);
        out << format_analysis(c, a, sys.system.char_model.tags) << '\n';
    }
    return 0;
}

int cmd_lattice(const std::string& model_dir, const std::string& input, double delta,
                const std::string& dump_path) {
    const LoadedSystem sys = load_system(model_dir);
    const std::vector<Sentence> sentences = read_raw_sentences(input);
    std::vector<WordLattice> lattices;
    lattices.reserve(sentences.size());
    for (const Sentence& c : sentences)
        lattices.push_back(
            generate_lattice(sys.system.char_model, c, delta, sys.config.max_word_len));
    std::ofstream out = open_output(dump_path);
    dump_lattices(out, lattices, sys.system.char_model.tags);
    return 0;
}

int cmd_eval(const std::string& gold_path, const std::string& pred_path, int bootstrap,
             unsigned long long seed, const std::string& lexicon_path,
             const std::string& ngrams_dir, const std::string& per_sentence_path) {
    Corpus corpus;  // shared tag space for gold and predictions
    read_corpus_into(gold_path, corpus);
    const size_t gold_count = corpus.size();
    read_corpus_into(pred_path, corpus);
    if (corpus.size() != 2 * gold_count)
        throw DataError("gold and prediction files have different sentence counts");
    std::vector<Analysis> gold, pred;
    for (size_t i = 0; i < gold_count; ++i) {
        gold.push_back(corpus.entries[i].gold);
        pred.push_back(corpus.entries[gold_count + i].gold);
    }

    const EvalCounts c = eval_counts(pred, gold);
    std::cout << "sentences: " << gold_count << '\n'
              << "gold_edges: " << c.gold << '\n'
              << "predicted_edges: " << c.predicted << '\n'
              << "correct_seg: " << c.correct_seg << '\n'
              << "correct_st: " << c.correct_st << '\n';
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", c.seg_f1());
    std::cout << "seg_f1: " << buf << '\n';
    std::snprintf(buf, sizeof buf, "%.6f", c.st_f1());
    std::cout << "st_f1: " << buf << '\n';
    if (bootstrap > 0) {
        const BootstrapResult seg = bootstrap_ci(pred, gold, true, bootstrap, 0.95, seed);
        const BootstrapResult st = bootstrap_ci(pred, gold, false, bootstrap, 0.95, seed);
        std::snprintf(buf, sizeof buf, "%.6f", seg.half_width);
        std::cout << "seg_ci95_half_width: " << buf << '\n';
        std::snprintf(buf, sizeof buf, "%.6f", st.half_width);
        std::cout << "st_ci95_half_width: " << buf << '\n';
    }

    std::optional<Lexicon> lexicon;
    std::optional<NgramStore> store;
    if (!lexicon_path.empty()) lexicon = Lexicon::load(lexicon_path);
    if (!ngrams_dir.empty()) store = NgramStore::load(ngrams_dir);
    const ErrorTable t = error_report(pred, gold, lexicon ? &*lexicon : nullptr,
                                      store ? &*store : nullptr);
    std::cout << "errors_granularity: " << t.granularity << '\n'
              << "errors_known_word: " << t.known_word << '\n'
              << "errors_suspect_meaningless: " << t.suspect_meaningless << '\n'
              << "# suspect-meaningless counts come from a lexicon-based check, "
                 "not manual annotation\n";

    if (!per_sentence_path.empty()) {
        std::ofstream out = open_output(per_sentence_path);
        for (size_t i = 0; i < gold_count; ++i) {
            const EvalCounts sc = eval_counts({pred[i]}, {gold[i]});
            out << i << '\t' << sc.seg_f1() << '\t' << sc.st_f1() << '\n';
        }
    }
    return 0;
}

int cmd_build_stats(const std::string& raw, const std::string& out_dir, size_t max_len,
                    unsigned long long floor) {
    const NgramStore store = build_ngram_store(raw, max_len, floor);
    store.save(out_dir);
    std::cout << "strings: " << store.frequencies().size() << '\n'
              << "stats dir: " << out_dir << '\n';
    return 0;
}

int cmd_select_pairs(const std::string& ngrams_dir, const std::string& seed_words_path,
                     size_t count, const std::string& epsilon, const std::string& out_path) {
    const NgramStore store = NgramStore::load(ngrams_dir);
    std::vector<std::string> seeds;
    {
        std::ifstream in(seed_words_path, std::ios::binary);
        if (!in) throw DataError("cannot open " + seed_words_path);
        std::string line;
        while (std::getline(in, line))
            if (!line.empty()) seeds.push_back(line);
    }
    if (seeds.empty()) throw DataError("no seed words in " + seed_words_path);
    const RestrictedPairSet pairs =
        select_restricted_pairs(store, seeds, count, Ratio::from_decimal(epsilon));
    pairs.save(out_path);
    if (pairs.truncated)
        std::cerr << "warning: only " << pairs.pairs.size() << " candidate pairs available\n";
    std::cout << "pairs: " << pairs.pairs.size() << '\n' << "pair file: " << out_path << '\n';
    return 0;
}

int cmd_bench(const std::string& model_dir, const std::string& input) {
    const LoadedSystem sys = load_system(model_dir);
    const std::vector<Sentence> sentences = read_raw_sentences(input);
    const WordhoodStore* store =
        sys.system.word_model.kind == ModelKind::WordOpen ? &sys.store : nullptr;
    const ThroughputReport r = benchmark_throughput(sys.system.char_model,
                                                    sys.system.word_model, sys.config,
                                                    sentences, store);
    std::cout << format_throughput(r);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"word-lattice Chinese segmentation and POS tagging"};
    app.require_subcommand(1);

    // train
    auto* train = app.add_subcommand("train", "train character and word models");
    std::string corpus_path, out_dir, lexicon, entries, ngrams, pairs;
    PipelineConfig cfg;
    unsigned long long seed_value = 0;
    train->add_option("--corpus", corpus_path, "training corpus (word_TAG tokens)")->required();
    train->add_option("--out-dir", out_dir, "output model directory")->required();
    train->add_option("--delta", cfg.delta, "lattice margin threshold");
    train->add_option("--folds", cfg.folds, "cross-validation folds");
    train->add_option("--max-word-len", cfg.max_word_len, "longest proposed word");
    train->add_option("--char-epochs", cfg.char_epochs, "character model epochs");
    train->add_option("--word-epochs", cfg.word_epochs, "word model epochs");
    auto* open_flag = train->add_flag("--open", cfg.open_mode, "use wordhood resources");
    train->add_option("--lexicon", lexicon, "lexicon TSV (word TAB category)")->needs(open_flag);
    train->add_option("--entries", entries, "entry list, one per line")->needs(open_flag);
    train->add_option("--ngrams", ngrams, "n-gram stats directory")->needs(open_flag);
    train->add_option("--pairs", pairs, "restricted pair file")->needs(open_flag);
    auto* seed_opt = train->add_option("--seed", seed_value, "shuffle seed");

    // decode
    auto* decode = app.add_subcommand("decode", "segment and tag raw sentences");
    std::string model_dir, input, output;
    bool char_only = false;
    decode->add_option("--model-dir", model_dir, "trained model directory")->required();
    decode->add_option("--input", input, "raw sentences, one per line")->required();
    decode->add_option("--output", output, "output corpus file")->required();
    decode->add_flag("--char-only", char_only, "skip the word model");

    // lattice
    auto* lattice = app.add_subcommand("lattice", "dump word lattices");
    std::string lat_model_dir, lat_input, lat_dump;
    double lat_delta = 15.0;
    lattice->add_option("--model-dir", lat_model_dir, "trained model directory")->required();
    lattice->add_option("--input", lat_input, "raw sentences, one per line")->required();
    lattice->add_option("--delta", lat_delta, "lattice margin threshold")->required();
    lattice->add_option("--dump", lat_dump, "output dump file")->required();

    // eval
    auto* eval = app.add_subcommand("eval", "score predictions against gold");
    std::string gold_path, pred_path, eval_lexicon, eval_ngrams, per_sentence;
    int bootstrap = 0;
    unsigned long long eval_seed = 1;
    eval->add_option("--gold", gold_path, "gold corpus")->required();
    eval->add_option("--pred", pred_path, "predicted corpus")->required();
    eval->add_option("--bootstrap", bootstrap, "bootstrap resamples (0 = off)");
    eval->add_option("--seed", eval_seed, "bootstrap seed");
    eval->add_option("--lexicon", eval_lexicon, "lexicon for the error report");
    eval->add_option("--ngrams", eval_ngrams, "n-gram stats for the error report");
    eval->add_option("--per-sentence", per_sentence, "per-sentence F1 TSV output");

    // build-stats
    auto* build = app.add_subcommand("build-stats", "count n-gram statistics from raw text");
    std::string raw, stats_out;
    size_t max_len = 20;
    unsigned long long floor = 1;
    build->add_option("--raw", raw, "raw UTF-8 text")->required();
    build->add_option("--out", stats_out, "output directory")->required();
    build->add_option("--max-len", max_len, "longest counted string");
    build->add_option("--floor", floor, "minimum stored frequency");

    // select-pairs
    auto* select = app.add_subcommand("select-pairs", "choose restricted context pairs");
    std::string sp_ngrams, seed_words, sp_out, epsilon = "0.0001";
    size_t pair_count = 30;
    select->add_option("--ngrams", sp_ngrams, "n-gram stats directory")->required();
    select->add_option("--seed-words", seed_words, "seed words, one per line")->required();
    select->add_option("--count", pair_count, "number of pairs");
    select->add_option("--epsilon", epsilon, "match threshold");
    select->add_option("--out", sp_out, "output pair file")->required();

    // bench
    auto* bench = app.add_subcommand("bench", "measure decoding throughput");
    std::string bench_model_dir, bench_input;
    bench->add_option("--model-dir", bench_model_dir, "trained model directory")->required();
    bench->add_option("--input", bench_input, "raw sentences, one per line")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (*train) {
            if (*seed_opt) cfg.seed = seed_value;
            return cmd_train(corpus_path, out_dir, cfg, lexicon, entries, ngrams, pairs);
        }
        if (*decode) return cmd_decode(model_dir, input, output, char_only);
        if (*lattice) return cmd_lattice(lat_model_dir, lat_input, lat_delta, lat_dump);
        if (*eval)
            return cmd_eval(gold_path, pred_path, bootstrap, eval_seed, eval_lexicon,
                            eval_ngrams, per_sentence);
        if (*build) return cmd_build_stats(raw, stats_out, max_len, floor);
        if (*select) return cmd_select_pairs(sp_ngrams, seed_words, pair_count, epsilon, sp_out);
        if (*bench) return cmd_bench(bench_model_dir, bench_input);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 1;
}
