#include "argsem/metrics.hpp"

#include <stdexcept>

namespace argsem {

const char* eval_mode_name(EvalMode m) { return m == EvalMode::Frozen ? "frozen" : "trainable"; }

PerClassMetrics class_metrics(const std::vector<Label>& predictions, const std::vector<Label>& gold,
                              Label positive) {
    size_t tp = 0, fp = 0, fn = 0;
    for (size_t i = 0; i < gold.size(); ++i) {
        bool p = predictions[i] == positive;
        bool g = gold[i] == positive;
        if (p && g) ++tp;
        else if (p && !g) ++fp;
        else if (!p && g) ++fn;
    }
    PerClassMetrics m;
    m.precision = (tp + fp) ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
    m.recall = (tp + fn) ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
    m.f1 = (m.precision + m.recall) > 0 ? 2 * m.precision * m.recall / (m.precision + m.recall) : 0.0;
    return m;
}

EvalReport evaluate(const std::vector<Label>& predictions, const std::vector<Label>& gold) {
    if (predictions.size() != gold.size())
        throw std::runtime_error("evaluate: length mismatch (" + std::to_string(predictions.size()) +
                                 " predictions vs " + std::to_string(gold.size()) + " gold)");
    if (gold.empty()) throw std::runtime_error("evaluate: empty label sequences");

    auto pos = class_metrics(predictions, gold, Label::Argument);
    auto neg = class_metrics(predictions, gold, Label::NonArgument);

    EvalReport r;
    r.precision.mean = 0.5 * (pos.precision + neg.precision);
    r.recall.mean = 0.5 * (pos.recall + neg.recall);
    r.f1.mean = 0.5 * (pos.f1 + neg.f1);
    r.f1_positive.mean = pos.f1;
    return r;
}

}  // namespace argsem
