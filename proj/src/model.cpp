#include "latseg/model.hpp"

#include <algorithm>
#include <fstream>

namespace latseg {

std::string_view model_kind_name(ModelKind k) {
    switch (k) {
        case ModelKind::Char: return "char";
        case ModelKind::WordClosed: return "word-closed";
        case ModelKind::WordOpen: return "word-open";
    }
    return "?";
}

ModelKind model_kind_from_name(std::string_view name) {
    if (name == "char") return ModelKind::Char;
    if (name == "word-closed") return ModelKind::WordClosed;
    if (name == "word-open") return ModelKind::WordOpen;
    throw DataError("unknown model kind: " + std::string(name));
}

void PerceptronTrainer::update(std::string_view key, long long delta) {
    if (step_ == 0) throw StructuralError("update before begin_instance");
    State& s = feats_[std::string(key)];
    s.w += delta;
    s.u += step_ * delta;
}

long long PerceptronTrainer::RawView::weight(std::string_view key) const {
    auto it = t_.feats_.find(key);
    return it == t_.feats_.end() ? 0 : it->second.w;
}

FeatureWeights PerceptronTrainer::averaged() const {
    // sum_{n=1..N} w_n = (N+1)*w_final - sum_s s*delta_s
    FeatureWeights out;
    out.reserve(feats_.size());
    for (const auto& [key, s] : feats_) {
        const long long total = (step_ + 1) * s.w - s.u;
        if (total != 0) out.emplace(key, total);
    }
    return out;
}

static const char kMagic[] = "latseg-model";

void LinearModel::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path);
    out << kMagic << " 1 " << model_kind_name(kind) << '\n';
    out << "tags";
    for (const std::string& t : tags.symbols()) out << '\t' << t;
    out << '\n';
    if (kind == ModelKind::Char) {
        out << "labels";
        for (const CharLabel& l : labels.labels())
            out << '\t' << position_tag_char(l.pos) << l.tag;
        out << '\n';
    }
    std::vector<const FeatureWeights::value_type*> rows;
    rows.reserve(weights.size());
    for (const auto& kv : weights) rows.push_back(&kv);
    std::sort(rows.begin(), rows.end(),
              [](const auto* a, const auto* b) { return a->first < b->first; });
    for (const auto* kv : rows) out << kv->first << '\t' << kv->second << '\t' << scale << '\n';
    if (!out) throw DataError("write failed: " + path);
}

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> out;
    size_t start = 0;
    while (true) {
        size_t end = line.find('\t', start);
        if (end == std::string::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, end - start));
        start = end + 1;
    }
}

long long parse_ll(const std::string& s, const std::string& path) {
    try {
        size_t used = 0;
        long long v = std::stoll(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw DataError(path + ": bad integer field '" + s + "'");
    }
}

}  // namespace

LinearModel LinearModel::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw DataError(path + ": empty model file");
    {
        std::vector<std::string> head;
        size_t start = 0;
        while (start <= line.size()) {
            size_t end = line.find(' ', start);
            if (end == std::string::npos) end = line.size();
            head.push_back(line.substr(start, end - start));
            if (end == line.size()) break;
            start = end + 1;
        }
        if (head.size() != 3 || head[0] != kMagic)
            throw DataError(path + ": not a model file");
        if (head[1] != "1") throw DataError(path + ": unsupported format version " + head[1]);
        LinearModel model;
        model.kind = model_kind_from_name(head[2]);

        if (!std::getline(in, line)) throw DataError(path + ": missing tags line");
        std::vector<std::string> tag_fields = split_tabs(line);
        if (tag_fields.empty() || tag_fields[0] != "tags")
            throw DataError(path + ": missing tags line");
        for (size_t i = 1; i < tag_fields.size(); ++i) model.tags.intern(tag_fields[i]);
        if (model.tags.size() == 0) throw DataError(path + ": empty tagset");

        if (model.kind == ModelKind::Char) {
            if (!std::getline(in, line)) throw DataError(path + ": missing labels line");
            std::vector<std::string> fields = split_tabs(line);
            if (fields.empty() || fields[0] != "labels")
                throw DataError(path + ": missing labels line");
            std::vector<CharLabel> order;
            for (size_t i = 1; i < fields.size(); ++i) {
                const std::string& f = fields[i];
                if (f.size() < 2) throw DataError(path + ": bad label entry '" + f + "'");
                PositionTag p;
                switch (f[0]) {
                    case 'S': p = PositionTag::S; break;
                    case 'B': p = PositionTag::B; break;
                    case 'M': p = PositionTag::M; break;
                    case 'E': p = PositionTag::E; break;
                    default: throw DataError(path + ": bad label entry '" + f + "'");
                }
                const long long t = parse_ll(f.substr(1), path);
                if (t < 0 || t >= model.tags.size())
                    throw DataError(path + ": label tag id out of range in '" + f + "'");
                order.push_back(CharLabel{p, static_cast<int>(t)});
            }
            model.labels = LabelSet::from_order(order, model.tags.size());
        }

        long long scale = 0;
        size_t line_no = model.kind == ModelKind::Char ? 3 : 2;
        while (std::getline(in, line)) {
            ++line_no;
            std::vector<std::string> fields = split_tabs(line);
            if (fields.size() != 3)
                throw DataError(path + ":" + std::to_string(line_no) + ": expected 3 fields");
            const long long total = parse_ll(fields[1], path);
            const long long steps = parse_ll(fields[2], path);
            if (steps <= 0) throw DataError(path + ": non-positive steps");
            if (scale == 0) scale = steps;
            if (steps != scale) throw DataError(path + ": inconsistent steps column");
            if (!model.weights.emplace(fields[0], total).second)
                throw DataError(path + ": duplicate feature key");
        }
        model.scale = scale == 0 ? 1 : scale;
        return model;
    }
}

}  // namespace latseg
