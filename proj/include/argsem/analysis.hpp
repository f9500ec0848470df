#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "argsem/bilstm.hpp"
#include "argsem/dataset.hpp"
#include "argsem/linear.hpp"
#include "argsem/metrics.hpp"

namespace argsem {

using PredictFn = std::function<std::vector<Label>(const LabeledDataset&)>;

// a trainer produces a predictor from a split set and a seed
struct TrainerSpec {
    std::string name;
    std::function<PredictFn(const SplitSet&, uint64_t)> fit;
};

// trains on seeded stratified prefixes of the train split; fraction 1.0
// reproduces the plain run (prefix keeps the original train order)
std::map<double, EvalReport> profile_curve(const TrainerSpec& trainer, const SplitSet& splits,
                                           const std::vector<double>& fractions, uint64_t seed);

struct CrossCell {
    bool ok = false;
    EvalReport report;
    std::string error;
};

struct CrossTrainMatrix {
    std::vector<std::string> names;             // dataset order
    std::vector<std::vector<CrossCell>> cells;  // [train][test]
};

CrossTrainMatrix cross_train(const std::vector<SplitSet>& datasets, const TrainerSpec& trainer,
                             uint64_t seed);

struct BowReport {
    std::vector<std::string> intersection;  // sorted
    size_t content_unigrams = 0;
    size_t function_unigrams = 0;
    size_t bigrams = 0;
    double content_function_ratio = 0;  // 0 when no function unigrams
};

// intersects the union of top-k positive and negative features across the
// per-dataset models; unigrams are classified by function-word membership
BowReport bow_report(const std::vector<LinearModel>& models, size_t k,
                     const std::set<std::string>& function_words);

std::set<std::string> load_function_words(const std::string& path);

struct PredictionSet {
    std::string model;
    std::string split;
    std::vector<std::string> ids;  // file order
    std::unordered_map<std::string, std::pair<Label, double>> by_id;
};

// TSV rows `id<TAB>label<TAB>score` preceded by the metadata line
// `# model=<name> split=<split>`
PredictionSet load_external_predictions(const std::string& path);
void save_predictions(const PredictionSet& p, const std::string& path);
PredictionSet predictions_from_labels(const std::string& model, const std::string& split,
                                      const LabeledDataset& d, const std::vector<Label>& labels,
                                      const std::vector<double>& scores = {});

// majority vote without weights (ties -> Argument); weighted argmax over
// weight-summed votes otherwise. Output follows the first member's id order.
std::vector<std::pair<std::string, Label>> ensemble_predict(
    const std::vector<PredictionSet>& members, const std::optional<std::vector<double>>& weights);

// arithmetic mean and sample standard deviation per metric
EvalReport aggregate_runs(const std::vector<EvalReport>& reports);

struct MultiRunResult {
    EvalReport aggregate;
    std::vector<EvalReport> per_run;
};

// the "trained 10 times" protocol: run seeds are cfg.seed + run index
MultiRunResult train_bilstm_runs(const SplitSet& splits, const SemanticSpace& space,
                                 const ClassifierConfig& cfg, int runs);

}  // namespace argsem
