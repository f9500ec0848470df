#include "argsem/linear.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <stdexcept>

#include "argsem/rng.hpp"
#include "argsem/util.hpp"

namespace argsem {

FeatureVector featurize_ngrams(const std::vector<std::string>& tokens) {
    std::set<std::string> feats;
    for (const auto& t : tokens) feats.insert(t);
    for (size_t i = 0; i + 1 < tokens.size(); ++i) feats.insert(tokens[i] + "_" + tokens[i + 1]);
    FeatureVector fv;
    if (feats.empty()) return fv;
    double norm = 1.0 / std::sqrt(static_cast<double>(feats.size()));
    fv.items.reserve(feats.size());
    for (const auto& f : feats) fv.items.emplace_back(f, norm);
    return fv;
}

double LinearModel::margin(const FeatureVector& fv) const {
    double m = bias;
    for (const auto& [f, v] : fv.items) {
        auto it = weights.find(f);
        if (it != weights.end()) m += it->second * v;
    }
    return m;
}

Label LinearModel::predict_tokens(const std::vector<std::string>& tokens) const {
    return margin(featurize_ngrams(tokens)) >= 0 ? Label::Argument : Label::NonArgument;
}

std::vector<Label> LinearModel::predict(const LabeledDataset& d) const {
    std::vector<Label> out;
    out.reserve(d.size());
    for (const auto& s : d.sentences) out.push_back(predict_tokens(s.tokens));
    return out;
}

namespace {

// Pegasos-style primal solver; the weight vector is kept as scale * sparse
// so the L2 decay stays O(non-zeros)
LinearModel fit_hinge(const std::vector<FeatureVector>& features, const std::vector<double>& labels,
                      double lambda, int epochs, uint64_t seed) {
    std::unordered_map<std::string, double> v;
    double scale = 1.0;
    double bias = 0.0;
    uint64_t t = 0;

    std::vector<size_t> order(features.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;

    for (int epoch = 0; epoch < epochs; ++epoch) {
        Rng rng(mix_seed(seed, 0x6c696e0aULL, static_cast<uint64_t>(epoch)));
        rng.shuffle(order);
        for (size_t idx : order) {
            ++t;
            double eta = 1.0 / (lambda * static_cast<double>(t));
            const FeatureVector& fv = features[idx];
            double y = labels[idx];
            double m = bias;
            for (const auto& [f, x] : fv.items) {
                auto it = v.find(f);
                if (it != v.end()) m += scale * it->second * x;
            }
            scale *= (1.0 - eta * lambda);
            if (y * m < 1.0) {
                for (const auto& [f, x] : fv.items) v[f] += eta * y * x / scale;
                bias += eta * y;
            }
            if (scale < 1e-9) {
                for (auto& [f, w] : v) w *= scale;
                scale = 1.0;
            }
        }
    }

    LinearModel model;
    model.lambda = lambda;
    model.epochs = epochs;
    model.seed = seed;
    model.bias = bias;
    for (auto& [f, w] : v) {
        double val = scale * w;
        if (val != 0.0) model.weights.emplace(f, val);
    }
    return model;
}

}  // namespace

LinearModel train_linear(const SplitSet& splits, std::optional<double> lambda, int epochs,
                         uint64_t seed) {
    const LabeledDataset& train = splits.train;
    if (train.sentences.empty()) throw std::runtime_error("train_linear: empty train split");
    if (train.count(Label::Argument) == 0 || train.count(Label::NonArgument) == 0)
        throw std::runtime_error("train_linear: train split '" + train.name + "' has a single class");

    std::vector<FeatureVector> features;
    std::vector<double> labels;
    features.reserve(train.size());
    for (const auto& s : train.sentences) {
        features.push_back(featurize_ngrams(s.tokens));
        labels.push_back(s.label == Label::Argument ? 1.0 : -1.0);
    }

    if (lambda) return fit_hinge(features, labels, *lambda, epochs, seed);

    const double grid[] = {1e-2, 1e-3, 1e-4, 1e-5};
    LinearModel best;
    double best_f1 = -1;
    for (double l : grid) {
        LinearModel m = fit_hinge(features, labels, l, epochs, seed);
        auto report = evaluate(m.predict(splits.dev), [&] {
            std::vector<Label> gold;
            for (const auto& s : splits.dev.sentences) gold.push_back(s.label);
            return gold;
        }());
        if (report.f1.mean > best_f1) {
            best_f1 = report.f1.mean;
            best = std::move(m);
        }
    }
    return best;
}

TopFeatures top_features(const LinearModel& m, size_t k) {
    std::vector<std::pair<std::string, double>> pos, neg;
    for (const auto& [f, w] : m.weights) {
        if (w > 0) pos.emplace_back(f, w);
        else if (w < 0) neg.emplace_back(f, w);
    }
    auto by_magnitude = [](const auto& a, const auto& b) {
        double ma = std::fabs(a.second), mb = std::fabs(b.second);
        if (ma != mb) return ma > mb;
        return a.first < b.first;
    };
    std::sort(pos.begin(), pos.end(), by_magnitude);
    std::sort(neg.begin(), neg.end(), by_magnitude);
    TopFeatures out;
    out.positive.assign(pos.begin(), pos.begin() + std::min(k, pos.size()));
    out.negative.assign(neg.begin(), neg.begin() + std::min(k, neg.size()));
    return out;
}

void save_linear(const LinearModel& m, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write model: " + path);
    char buf[64];
    out << "argsem-linear v1\n";
    std::snprintf(buf, sizeof(buf), "%a", m.lambda);
    out << "lambda " << buf;
    std::snprintf(buf, sizeof(buf), "%a", m.bias);
    out << " bias " << buf << " epochs " << m.epochs << " seed " << m.seed << '\n';
    std::map<std::string, double> sorted(m.weights.begin(), m.weights.end());
    out << sorted.size() << '\n';
    for (const auto& [f, w] : sorted) {
        std::snprintf(buf, sizeof(buf), "%a", w);
        out << f << ' ' << buf << '\n';
    }
}

LinearModel load_linear(const std::string& path) {
    auto lines = read_lines(path);
    if (lines.size() < 3 || lines[0] != "argsem-linear v1")
        throw std::runtime_error(path + ": not an argsem-linear v1 checkpoint");
    LinearModel m;
    auto header = split_ws(lines[1]);
    if (header.size() != 8 || header[0] != "lambda" || header[2] != "bias")
        throw std::runtime_error(path + ": malformed header line");
    m.lambda = std::strtod(header[1].c_str(), nullptr);
    m.bias = std::strtod(header[3].c_str(), nullptr);
    m.epochs = std::atoi(header[5].c_str());
    m.seed = std::strtoull(header[7].c_str(), nullptr, 10);
    size_t n = std::strtoull(lines[2].c_str(), nullptr, 10);
    if (lines.size() < 3 + n) throw std::runtime_error(path + ": truncated weight table");
    for (size_t i = 0; i < n; ++i) {
        auto fields = split_ws(lines[3 + i]);
        if (fields.size() != 2)
            throw std::runtime_error(path + ": line " + std::to_string(4 + i) + ": malformed weight row");
        m.weights[fields[0]] = std::strtod(fields[1].c_str(), nullptr);
    }
    return m;
}

}  // namespace argsem
