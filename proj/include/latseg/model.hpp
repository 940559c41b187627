#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "latseg/types.hpp"

namespace latseg {

struct StringHash {
    using is_transparent = void;
    size_t operator()(std::string_view s) const { return std::hash<std::string_view>()(s); }
};
using FeatureWeights =
    std::unordered_map<std::string, long long, StringHash, std::equal_to<>>;

// Anything that can score a feature key. Scores are integer numerators over a
// shared denominator, so argmax and ties stay exact.
class WeightSource {
  public:
    virtual ~WeightSource() = default;
    virtual long long weight(std::string_view key) const = 0;
};

enum class ModelKind { Char, WordClosed, WordOpen };

std::string_view model_kind_name(ModelKind k);
ModelKind model_kind_from_name(std::string_view name);

// A frozen linear model. For averaged perceptrons the stored weights are the
// per-feature sums of all weight snapshots and `scale` is the snapshot count;
// raw integer models use scale 1.
class LinearModel : public WeightSource {
  public:
    ModelKind kind = ModelKind::Char;
    TagSet tags;
    LabelSet labels;  // meaningful for char models only
    FeatureWeights weights;
    long long scale = 1;

    long long weight(std::string_view key) const override {
        auto it = weights.find(key);
        return it == weights.end() ? 0 : it->second;
    }

    void save(const std::string& path) const;
    static LinearModel load(const std::string& path);
};

// Online averaged-perceptron state. One step per training instance; the
// averaged weight of a feature is the mean of its values after each step,
// tracked exactly with integer accumulators.
class PerceptronTrainer {
  public:
    void begin_instance() { ++step_; }
    void update(std::string_view key, long long delta);
    long long steps() const { return step_; }

    // Current raw weights, used for decoding while training.
    class RawView : public WeightSource {
      public:
        explicit RawView(const PerceptronTrainer& t) : t_(t) {}
        long long weight(std::string_view key) const override;

      private:
        const PerceptronTrainer& t_;
    };
    RawView raw() const { return RawView(*this); }

    // Averaged numerators with denominator steps(); zero entries dropped.
    FeatureWeights averaged() const;

  private:
    struct State {
        long long w = 0;  // current weight
        long long u = 0;  // sum of step * delta over all updates
    };
    std::unordered_map<std::string, State, StringHash, std::equal_to<>> feats_;
    long long step_ = 0;
    friend class RawView;
};

}  // namespace latseg
