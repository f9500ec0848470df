#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "argsem/dataset.hpp"
#include "argsem/metrics.hpp"

namespace argsem {

// unigrams + "_"-joined bigrams, binary presence, L2-normalized
struct FeatureVector {
    std::vector<std::pair<std::string, double>> items;  // unique, sorted by feature
};

FeatureVector featurize_ngrams(const std::vector<std::string>& tokens);

struct LinearModel {
    std::unordered_map<std::string, double> weights;
    double bias = 0;
    double lambda = 0;
    int epochs = 0;
    uint64_t seed = 0;

    double margin(const FeatureVector& fv) const;
    Label predict_tokens(const std::vector<std::string>& tokens) const;
    std::vector<Label> predict(const LabeledDataset& d) const;
};

// L2-regularized hinge loss by seeded stochastic subgradient descent;
// when lambda is not given, the dev split selects it from
// {1e-2, 1e-3, 1e-4, 1e-5}
LinearModel train_linear(const SplitSet& splits, std::optional<double> lambda, int epochs,
                         uint64_t seed);

struct TopFeatures {
    std::vector<std::pair<std::string, double>> positive;  // Argument-leaning
    std::vector<std::pair<std::string, double>> negative;
};

// k features per class ranked by |weight|, ties broken lexicographically
TopFeatures top_features(const LinearModel& m, size_t k);

void save_linear(const LinearModel& m, const std::string& path);
LinearModel load_linear(const std::string& path);

}  // namespace argsem
