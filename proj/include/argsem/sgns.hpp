#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "argsem/lexical.hpp"
#include "argsem/rng.hpp"
#include "argsem/space.hpp"

namespace argsem {

struct SgnsConfig {
    size_t dim = 300;
    int window = 3;       // paper grid: 3, 10, 20
    int negatives = 5;    // paper grid: 5, 25, 100
    double lr = 0.01;     // paper grid: 0.1, 0.01, 0.001
    int epochs = 5;       // paper grid: 1, 5, 10
    size_t min_count = 1;
    uint64_t seed = 1;
    int workers = 1;

    uint64_t hash() const;
    std::string describe() const;
};

// sampling distribution proportional to count^0.75, alias-method sampling
class UnigramTable {
public:
    explicit UnigramTable(const std::vector<size_t>& counts);

    // convenience for word-keyed counts; index order = sorted word order
    static UnigramTable from_counts(const std::map<std::string, size_t>& counts);

    double probability(size_t i) const { return prob_[i]; }
    size_t size() const { return prob_.size(); }
    size_t sample(Rng& rng) const;

private:
    std::vector<double> prob_;
    std::vector<double> accept_;
    std::vector<size_t> alias_;
};

namespace detail {
template <class Real>
Real log_sigmoid(Real x) {
    // -softplus(-x), computed without overflow
    if (x >= 0) return -std::log1p(std::exp(-x));
    return x - std::log1p(std::exp(x));
}
}  // namespace detail

// loss of one (word, context) pair: -log sigmoid(w.c) for label 1,
// -log sigmoid(-w.c) for label 0
template <class Real>
Real sgns_pair_loss(std::span<const Real> w, std::span<const Real> c, int label) {
    Real dot = 0;
    for (size_t k = 0; k < w.size(); ++k) dot += w[k] * c[k];
    return label ? -detail::log_sigmoid(dot) : -detail::log_sigmoid(-dot);
}

// one SGD step on the pair loss; both vectors updated from their old values.
// returns the pair's loss contribution (before the step).
template <class Real>
Real sgns_update(std::span<Real> w, std::span<Real> c, int label, Real lr) {
    Real dot = 0;
    for (size_t k = 0; k < w.size(); ++k) dot += w[k] * c[k];
    Real sigma = Real(1) / (Real(1) + std::exp(-dot));
    Real g = (label ? Real(1) : Real(0)) - sigma;
    Real step = lr * g;
    for (size_t k = 0; k < w.size(); ++k) {
        Real w_old = w[k];
        w[k] += step * c[k];
        c[k] += step * w_old;
    }
    return label ? -detail::log_sigmoid(dot) : -detail::log_sigmoid(-dot);
}

struct SgnsStats {
    std::vector<double> epoch_mean_loss;
    uint64_t total_pairs = 0;
    size_t vocab_size = 0;
};

SemanticSpace train_skipgram(const ProjectedCorpus& corpus, const SgnsConfig& cfg,
                             SgnsStats* stats = nullptr);
SemanticSpace train_skipgram_file(const std::string& path, const SgnsConfig& cfg,
                                  SgnsStats* stats = nullptr);

}  // namespace argsem
