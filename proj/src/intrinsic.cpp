#include "argsem/intrinsic.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numeric>
#include <stdexcept>

#include "argsem/util.hpp"

namespace argsem {

namespace {

// average ranks, ties get the mean of the rank block
std::vector<double> average_ranks(std::span<const double> x) {
    const size_t n = x.size();
    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) { return x[a] < x[b]; });
    std::vector<double> ranks(n);
    size_t i = 0;
    while (i < n) {
        size_t j = i;
        while (j + 1 < n && x[order[j + 1]] == x[order[i]]) ++j;
        double r = 0.5 * static_cast<double>(i + j) + 1.0;  // 1-based average rank
        for (size_t k = i; k <= j; ++k) ranks[order[k]] = r;
        i = j + 1;
    }
    return ranks;
}

double pearson(std::span<const double> a, std::span<const double> b) {
    const size_t n = a.size();
    double ma = 0, mb = 0;
    for (size_t i = 0; i < n; ++i) {
        ma += a[i];
        mb += b[i];
    }
    ma /= static_cast<double>(n);
    mb /= static_cast<double>(n);
    double sab = 0, saa = 0, sbb = 0;
    for (size_t i = 0; i < n; ++i) {
        sab += (a[i] - ma) * (b[i] - mb);
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
    }
    if (saa == 0 || sbb == 0) throw std::runtime_error("spearman: constant sequence, correlation undefined");
    return sab / std::sqrt(saa * sbb);
}

}  // namespace

double spearman(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size())
        throw std::runtime_error("spearman: length mismatch (" + std::to_string(x.size()) + " vs " +
                                 std::to_string(y.size()) + ")");
    if (x.size() < 2) throw std::runtime_error("spearman: need at least 2 observations");
    auto rx = average_ranks(x);
    auto ry = average_ranks(y);
    return pearson(rx, ry);
}

EvalSimResult eval_space(const SemanticSpace& s, const SimilarityBenchmark& b) {
    if (b.pairs.empty()) throw std::runtime_error("eval_space: benchmark '" + b.name + "' is empty");
    std::vector<double> model, gold;
    for (const auto& p : b.pairs) {
        if (!s.contains(p.w1) || !s.contains(p.w2)) continue;
        model.push_back(cosine(s, p.w1, p.w2));
        gold.push_back(p.gold);
    }
    EvalSimResult r;
    r.total_pairs = b.pairs.size();
    r.used_pairs = model.size();
    r.coverage = static_cast<double>(r.used_pairs) / static_cast<double>(r.total_pairs);
    if (r.used_pairs < 2)
        throw std::runtime_error("eval_space: fewer than 2 covered pairs on '" + b.name + "'");
    r.rho = spearman(model, gold);
    return r;
}

namespace {

bool parse_double(const std::string& s, double& out) {
    char* end = nullptr;
    out = std::strtod(s.c_str(), &end);
    return end == s.c_str() + s.size() && !s.empty() && std::isfinite(out);
}

std::vector<std::string> split_row(const std::string& line) {
    // native WordSim-353 files are sometimes comma-separated
    if (line.find('\t') != std::string::npos) return split_on(line, '\t');
    if (line.find(',') != std::string::npos) return split_on(line, ',');
    return split_ws(line);
}

}  // namespace

SimilarityBenchmark load_benchmark(const std::string& path, BenchmarkFormat format,
                                   const std::string& name) {
    auto lines = read_lines(path);
    SimilarityBenchmark b;
    b.name = name.empty() ? std::filesystem::path(path).stem().string() : name;

    size_t start = 0;
    size_t score_col = 2;
    if (!lines.empty()) {
        auto first = split_row(lines[0]);
        bool looks_simlex = first.size() >= 4 && first[0] == "word1" && first[2] == "POS";
        if (format == BenchmarkFormat::SimLex || (format == BenchmarkFormat::Auto && looks_simlex)) {
            score_col = 3;  // the SimLex999 column
            start = 1;
        } else {
            double tmp;
            bool header = first.size() >= 3 && !parse_double(strip(first[2]), tmp);
            if (header) start = 1;
        }
    }

    std::set<std::pair<std::string, std::string>> seen;
    for (size_t li = start; li < lines.size(); ++li) {
        if (strip(lines[li]).empty()) continue;
        auto fields = split_row(lines[li]);
        if (fields.size() <= score_col)
            throw std::runtime_error(path + ": line " + std::to_string(li + 1) + ": expected at least " +
                                     std::to_string(score_col + 1) + " columns");
        SimilarityBenchmark::WordPair p;
        p.w1 = lowercase_ascii(strip(fields[0]));
        p.w2 = lowercase_ascii(strip(fields[1]));
        if (!parse_double(strip(fields[score_col]), p.gold))
            throw std::runtime_error(path + ": line " + std::to_string(li + 1) + ": bad score '" +
                                     fields[score_col] + "'");
        auto key = p.w1 < p.w2 ? std::make_pair(p.w1, p.w2) : std::make_pair(p.w2, p.w1);
        if (!seen.insert(key).second)
            throw std::runtime_error(path + ": line " + std::to_string(li + 1) + ": duplicate pair " +
                                     p.w1 + "/" + p.w2);
        b.pairs.push_back(std::move(p));
    }
    if (b.pairs.empty()) throw std::runtime_error(path + ": no benchmark pairs");
    return b;
}

GridResult grid_search(const ProjectedCorpus& corpus, const std::vector<SgnsConfig>& grid,
                       const SimilarityBenchmark& similarity, const SimilarityBenchmark& relatedness) {
    if (grid.empty()) throw std::runtime_error("grid_search: empty grid");
    GridResult result;
    result.rows.reserve(grid.size());
    bool have_best = false;
    double best_avg = 0;
    for (const auto& cfg : grid) {
        GridRow row;
        row.cfg = cfg;
        try {
            SemanticSpace space = train_skipgram(corpus, cfg);
            auto sim = eval_space(space, similarity);
            auto rel = eval_space(space, relatedness);
            row.rho_similarity = sim.rho;
            row.rho_relatedness = rel.rho;
            row.coverage_similarity = sim.coverage;
            row.coverage_relatedness = rel.coverage;
            row.average = 0.5 * (sim.rho + rel.rho);
            if (!have_best || row.average > best_avg) {
                have_best = true;
                best_avg = row.average;
                result.best_index = result.rows.size();
                result.best_space = std::move(space);
            }
        } catch (const std::exception& e) {
            row.error = e.what();
        }
        result.rows.push_back(std::move(row));
    }
    if (!have_best) throw std::runtime_error("grid_search: every config failed benchmark coverage");
    return result;
}

std::vector<SgnsConfig> paper_grid(uint64_t seed) {
    std::vector<SgnsConfig> grid;
    for (int window : {3, 10, 20})
        for (int negatives : {5, 25, 100})
            for (double lr : {0.1, 0.01, 0.001})
                for (int epochs : {1, 5, 10}) {
                    SgnsConfig cfg;
                    cfg.dim = 300;
                    cfg.window = window;
                    cfg.negatives = negatives;
                    cfg.lr = lr;
                    cfg.epochs = epochs;
                    cfg.seed = seed;
                    grid.push_back(cfg);
                }
    return grid;
}

}  // namespace argsem
