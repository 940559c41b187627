#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "latseg/pipeline.hpp"

namespace py = pybind11;
using namespace latseg;

namespace {

PipelineConfig make_config(double delta, int folds, size_t max_word_len, int char_epochs,
                           int word_epochs, bool open_mode, std::optional<unsigned long long> seed) {
    PipelineConfig cfg;
    cfg.delta = delta;
    cfg.folds = folds;
    cfg.max_word_len = max_word_len;
    cfg.char_epochs = char_epochs;
    cfg.word_epochs = word_epochs;
    cfg.open_mode = open_mode;
    cfg.seed = seed;
    return cfg;
}

std::vector<std::tuple<size_t, std::string, std::string>> analysis_tuples(const Analysis& a,
                                                                          const TagSet& tags) {
    std::vector<std::tuple<size_t, std::string, std::string>> out;
    out.reserve(a.edges.size());
    for (const Edge& e : a.edges)
        out.emplace_back(e.pos, utf8_encode(e.word), tags.symbol(e.tag));
    return out;
}

struct PySegmenter {
    LoadedSystem sys;

    explicit PySegmenter(const std::string& model_dir) : sys(load_system(model_dir)) {}

    const WordhoodStore* store() const {
        return sys.system.word_model.kind == ModelKind::WordOpen ? &sys.store : nullptr;
    }

    std::vector<std::pair<std::string, std::string>> decode(const std::string& text) const {
        const Sentence c = Sentence::from_utf8(text);
        const Analysis a =
            decode_sentence(sys.system.char_model, sys.system.word_model, sys.config, c, store());
        std::vector<std::pair<std::string, std::string>> out;
        for (const Edge& e : a.edges)
            out.emplace_back(utf8_encode(e.word), sys.system.char_model.tags.symbol(e.tag));
        return out;
    }

    std::vector<std::pair<std::string, std::string>> decode_char_only_py(
        const std::string& text) const {
        const Sentence c = Sentence::from_utf8(text);
        const Analysis a = decode_char_only(sys.system.char_model, c);
        std::vector<std::pair<std::string, std::string>> out;
        for (const Edge& e : a.edges)
            out.emplace_back(utf8_encode(e.word), sys.system.char_model.tags.symbol(e.tag));
        return out;
    }

    std::vector<std::tuple<size_t, std::string, std::string, double>> lattice(
        const std::string& text, double delta) const {
        const Sentence c = Sentence::from_utf8(text);
        const WordLattice lat =
            generate_lattice(sys.system.char_model, c, delta, sys.config.max_word_len);
        std::vector<std::tuple<size_t, std::string, std::string, double>> out;
        for (const WeightedEdge& we : lat.edges)
            out.emplace_back(we.edge.pos, utf8_encode(we.edge.word),
                             sys.system.char_model.tags.symbol(we.edge.tag),
                             static_cast<double>(we.margin) / static_cast<double>(lat.scale));
        return out;
    }
};

}  // namespace

PYBIND11_MODULE(latseg, m) {
    m.doc() = "word-lattice Chinese segmentation and POS tagging";

    static py::exception<DataError> data_error(m, "DataError");
    static py::exception<StructuralError> structural_error(m, "StructuralError");
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const DataError& e) {
            py::set_error(data_error, e.what());
        } catch (const StructuralError& e) {
            py::set_error(structural_error, e.what());
        }
    });

    m.def(
        "read_corpus",
        [](const std::string& path) {
            const Corpus corpus = read_corpus(path);
            std::vector<std::pair<std::string,
                                  std::vector<std::tuple<size_t, std::string, std::string>>>>
                out;
            for (const CorpusEntry& e : corpus.entries)
                out.emplace_back(e.sentence.utf8(), analysis_tuples(e.gold, corpus.tags));
            return out;
        },
        py::arg("path"), "Read a word_TAG corpus; returns (sentence, [(pos, word, tag)]) pairs.");

    m.def(
        "train",
        [](const std::string& corpus_path, const std::string& out_dir, double delta, int folds,
           size_t max_word_len, int char_epochs, int word_epochs,
           const std::string& lexicon, const std::string& entries, const std::string& ngrams,
           const std::string& pairs, std::optional<unsigned long long> seed) {
            const Corpus corpus = read_corpus(corpus_path);
            const bool open = !(lexicon.empty() && entries.empty() && ngrams.empty() &&
                                pairs.empty());
            const PipelineConfig cfg =
                make_config(delta, folds, max_word_len, char_epochs, word_epochs, open, seed);
            WordhoodStore store;
            if (open) store = load_wordhood_resources(lexicon, entries, ngrams, pairs);
            const TrainedSystem sys = stacked_train(corpus, cfg, open ? &store : nullptr);
            save_system(out_dir, sys, cfg, open ? &store : nullptr);
        },
        py::arg("corpus"), py::arg("out_dir"), py::arg("delta") = 15.0, py::arg("folds") = 10,
        py::arg("max_word_len") = 20, py::arg("char_epochs") = 10, py::arg("word_epochs") = 10,
        py::arg("lexicon") = "", py::arg("entries") = "", py::arg("ngrams") = "",
        py::arg("pairs") = "", py::arg("seed") = std::nullopt,
        "Run stacked training and write a model directory.");

    py::class_<PySegmenter>(m, "Segmenter")
        .def(py::init<const std::string&>(), py::arg("model_dir"))
        .def("decode", &PySegmenter::decode, py::arg("text"),
             "Segment and tag one sentence; returns (word, tag) pairs.")
        .def("decode_char_only", &PySegmenter::decode_char_only_py, py::arg("text"))
        .def("lattice", &PySegmenter::lattice, py::arg("text"), py::arg("delta"),
             "Word lattice of one sentence; returns (pos, word, tag, margin) tuples.");

    m.def(
        "evaluate",
        [](const std::string& gold_path, const std::string& pred_path, int bootstrap,
           unsigned long long seed) {
            Corpus corpus;
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
            py::dict out;
            out["sentences"] = gold_count;
            out["gold_edges"] = c.gold;
            out["predicted_edges"] = c.predicted;
            out["correct_seg"] = c.correct_seg;
            out["correct_st"] = c.correct_st;
            out["seg_f1"] = c.seg_f1();
            out["st_f1"] = c.st_f1();
            if (bootstrap > 0) {
                out["seg_ci95_half_width"] =
                    bootstrap_ci(pred, gold, true, bootstrap, 0.95, seed).half_width;
                out["st_ci95_half_width"] =
                    bootstrap_ci(pred, gold, false, bootstrap, 0.95, seed).half_width;
            }
            return out;
        },
        py::arg("gold"), py::arg("pred"), py::arg("bootstrap") = 0, py::arg("seed") = 1,
        "Edge F1 of a prediction corpus against gold.");

    m.def(
        "build_stats",
        [](const std::string& raw, const std::string& out_dir, size_t max_len,
           unsigned long long floor) {
            build_ngram_store(raw, max_len, floor).save(out_dir);
        },
        py::arg("raw"), py::arg("out_dir"), py::arg("max_len") = 20, py::arg("floor") = 1,
        "Count raw-corpus n-gram statistics into a stats directory.");

    m.def(
        "select_pairs",
        [](const std::string& ngrams_dir, const std::vector<std::string>& seed_words,
           size_t count, const std::string& epsilon, const std::string& out_path) {
            const NgramStore store = NgramStore::load(ngrams_dir);
            const RestrictedPairSet pairs =
                select_restricted_pairs(store, seed_words, count, Ratio::from_decimal(epsilon));
            pairs.save(out_path);
            return pairs.pairs.size();
        },
        py::arg("ngrams"), py::arg("seed_words"), py::arg("count") = 30,
        py::arg("epsilon") = "0.0001", py::arg("out") = std::string());

    m.def(
        "rav",
        [](const std::string& ngrams_dir, const std::string& pairs_path,
           const std::string& word) {
            const NgramStore store = NgramStore::load(ngrams_dir);
            const RestrictedPairSet pairs = RestrictedPairSet::load(pairs_path);
            return rav(store, pairs, word);
        },
        py::arg("ngrams"), py::arg("pairs"), py::arg("word"),
        "Restricted accessor variety of a string.");
}
