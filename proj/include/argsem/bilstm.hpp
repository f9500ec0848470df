#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "argsem/dataset.hpp"
#include "argsem/metrics.hpp"
#include "argsem/space.hpp"

namespace argsem {

struct ClassifierConfig {
    int epochs = 10;
    int batch_size = 64;
    int seq_len = 30;
    double lr = 0.01;
    double dropout_keep = 0.8;  // keep probability
    int lstm_units = 48;
    bool trainable_embeddings = false;
    uint64_t seed = 1;

    uint64_t hash() const;
    std::string describe() const;
};

// one LSTM direction; gate order in the packed 4H axis is i, f, g, o
struct LstmDir {
    std::vector<double> w_x;  // dim x 4H
    std::vector<double> w_h;  // H x 4H
    std::vector<double> b;    // 4H
};

struct BiLstmCore {
    size_t dim = 0;
    size_t hidden = 0;
    LstmDir fwd;
    LstmDir bwd;
    std::vector<double> w_out;  // 2H
    double b_out = 0;
};

// masked steps carry state through unchanged; returns the concatenation
// [h_forward_last ; h_backward_last] (2H)
std::vector<double> lstm_forward(const BiLstmCore& net, std::span<const double> inputs,
                                 std::span<const uint8_t> mask);

struct BiLstmGrads {
    LstmDir fwd;
    LstmDir bwd;
    std::vector<double> w_out;
    double b_out = 0;
    std::vector<double> inputs;  // T x dim, for trainable embeddings
};

// binary cross-entropy on the sigmoid logit of one example; when grads is
// non-null the full backward pass fills every tensor. dropout_mask (2H,
// already scaled by 1/keep) is applied to the concatenated hidden state;
// pass empty for no dropout.
double bilstm_example_loss(const BiLstmCore& net, std::span<const double> inputs,
                           std::span<const uint8_t> mask, int label, BiLstmGrads* grads,
                           std::span<const double> dropout_mask = {});

double bilstm_predict_prob(const BiLstmCore& net, std::span<const double> inputs,
                           std::span<const uint8_t> mask);

struct BiLstmModel {
    ClassifierConfig cfg;
    BiLstmCore net;
    const SemanticSpace* space = nullptr;  // vocabulary + frozen rows; must outlive the model
    std::vector<double> embedding;         // (|V|+1) x dim private copy, trainable mode only
    std::vector<double> unk;               // fixed unknown vector

    double predict_prob(const std::vector<std::string>& tokens) const;
    std::vector<Label> predict(const LabeledDataset& d) const;
};

struct BiLstmTrainLog {
    std::vector<double> epoch_train_loss;
    std::vector<double> epoch_dev_f1;
    int best_epoch = -1;
};

// best-dev-F1 epoch checkpoint is used for the test report; frozen mode
// never writes to the input space
std::pair<BiLstmModel, EvalReport> train_bilstm(const SplitSet& splits, const SemanticSpace& space,
                                                const ClassifierConfig& cfg,
                                                BiLstmTrainLog* log = nullptr);

void save_bilstm(const BiLstmModel& m, const std::string& path);
BiLstmModel load_bilstm(const std::string& path, const SemanticSpace* space);

}  // namespace argsem
