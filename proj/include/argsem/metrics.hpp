#pragma once

#include <limits>
#include <string>
#include <vector>

#include "argsem/dataset.hpp"

namespace argsem {

enum class EvalMode { Frozen, Trainable };

const char* eval_mode_name(EvalMode m);

struct Metric {
    double mean = 0;
    double stddev = 0;  // meaningful only when runs > 1
};

struct EvalReport {
    Metric precision;  // macro over both classes
    Metric recall;
    Metric f1;
    Metric f1_positive;  // Argument-class F1
    double oov = std::numeric_limits<double>::quiet_NaN();
    EvalMode mode = EvalMode::Frozen;
    int runs = 1;
};

// per-class P/R/F1 with macro averaging; a class with no predictions gets
// precision 0
EvalReport evaluate(const std::vector<Label>& predictions, const std::vector<Label>& gold);

struct PerClassMetrics {
    double precision = 0, recall = 0, f1 = 0;
};

PerClassMetrics class_metrics(const std::vector<Label>& predictions, const std::vector<Label>& gold,
                              Label positive);

}  // namespace argsem
