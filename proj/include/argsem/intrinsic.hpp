#pragma once

#include <span>
#include <string>
#include <vector>

#include "argsem/sgns.hpp"
#include "argsem/space.hpp"

namespace argsem {

struct SimilarityBenchmark {
    std::string name;
    struct WordPair {
        std::string w1;
        std::string w2;
        double gold;
    };
    std::vector<WordPair> pairs;
};

// Spearman rank correlation with average ranks for ties
double spearman(std::span<const double> x, std::span<const double> y);

struct EvalSimResult {
    double rho = 0;
    double coverage = 0;
    size_t used_pairs = 0;
    size_t total_pairs = 0;
};

// pairs with any OOV word are skipped; coverage = kept / total
EvalSimResult eval_space(const SemanticSpace& s, const SimilarityBenchmark& b);

enum class BenchmarkFormat { Auto, Plain, SimLex, WordSim };

// Plain: TSV word1<TAB>word2<TAB>score, optional header auto-detected.
// SimLex / WordSim adapters accept the native column layouts.
SimilarityBenchmark load_benchmark(const std::string& path,
                                   BenchmarkFormat format = BenchmarkFormat::Auto,
                                   const std::string& name = "");

struct GridRow {
    SgnsConfig cfg;
    double rho_similarity = 0;
    double rho_relatedness = 0;
    double average = 0;
    double coverage_similarity = 0;
    double coverage_relatedness = 0;
    std::string error;  // non-empty when this config failed
};

struct GridResult {
    std::vector<GridRow> rows;  // deterministic grid enumeration order
    size_t best_index = 0;
    SemanticSpace best_space;
};

// trains every config, scores on both benchmarks, winner maximizes the
// unweighted benchmark average; ties go to the earlier config
GridResult grid_search(const ProjectedCorpus& corpus, const std::vector<SgnsConfig>& grid,
                       const SimilarityBenchmark& similarity, const SimilarityBenchmark& relatedness);

// the four-parameter grid: window (3,10,20) x negatives (5,25,100)
// x lr (0.1,0.01,0.001) x epochs (1,5,10), dim 300
std::vector<SgnsConfig> paper_grid(uint64_t seed);

}  // namespace argsem
