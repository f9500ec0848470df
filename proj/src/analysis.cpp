#include "argsem/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "argsem/rng.hpp"
#include "argsem/util.hpp"

namespace argsem {

namespace {

std::vector<Label> gold_labels(const LabeledDataset& d) {
    std::vector<Label> out;
    out.reserve(d.size());
    for (const auto& s : d.sentences) out.push_back(s.label);
    return out;
}

// nested stratified subsets: each sentence gets a per-class shuffled rank;
// the fraction-f subset keeps ranks below the class quota, in original
// train order
LabeledDataset train_prefix(const LabeledDataset& train, double fraction, uint64_t seed) {
    std::vector<std::vector<size_t>> by_class(2);
    for (size_t i = 0; i < train.size(); ++i)
        by_class[train.sentences[i].label == Label::Argument ? 0 : 1].push_back(i);

    std::vector<bool> keep(train.size(), false);
    for (size_t c = 0; c < 2; ++c) {
        auto idx = by_class[c];
        Rng rng(mix_seed(seed, 0x70726566ULL, c));  // "pref"
        rng.shuffle(idx);
        size_t quota = static_cast<size_t>(
            std::llround(fraction * static_cast<double>(idx.size())));
        quota = std::min(quota, idx.size());
        if (quota < 2)
            throw std::runtime_error("profile_curve: fraction " + std::to_string(fraction) +
                                     " yields fewer than 2 examples for a class");
        for (size_t i = 0; i < quota; ++i) keep[idx[i]] = true;
    }
    LabeledDataset out;
    out.name = train.name;
    for (size_t i = 0; i < train.size(); ++i)
        if (keep[i]) out.sentences.push_back(train.sentences[i]);
    out.recount();
    return out;
}

}  // namespace

std::map<double, EvalReport> profile_curve(const TrainerSpec& trainer, const SplitSet& splits,
                                           const std::vector<double>& fractions, uint64_t seed) {
    if (fractions.empty()) throw std::runtime_error("profile_curve: no fractions given");
    for (size_t i = 0; i < fractions.size(); ++i) {
        if (fractions[i] <= 0.0 || fractions[i] > 1.0)
            throw std::runtime_error("profile_curve: fractions must lie in (0,1]");
        if (i && fractions[i] <= fractions[i - 1])
            throw std::runtime_error("profile_curve: fractions must be strictly ascending");
    }
    if (fractions.back() != 1.0) throw std::runtime_error("profile_curve: fractions must include 1.0");

    std::map<double, EvalReport> curve;
    auto test_gold = gold_labels(splits.test);
    for (double f : fractions) {
        SplitSet reduced = splits;
        reduced.train = f == 1.0 ? splits.train : train_prefix(splits.train, f, seed);
        auto predict = trainer.fit(reduced, seed);
        curve[f] = evaluate(predict(splits.test), test_gold);
    }
    return curve;
}

CrossTrainMatrix cross_train(const std::vector<SplitSet>& datasets, const TrainerSpec& trainer,
                             uint64_t seed) {
    if (datasets.size() < 2) throw std::runtime_error("cross_train: need at least 2 datasets");
    CrossTrainMatrix m;
    for (const auto& d : datasets) {
        std::string name = d.train.name;
        if (auto pos = name.rfind("-train"); pos != std::string::npos && pos == name.size() - 6)
            name.erase(pos);
        m.names.push_back(name);
    }
    m.cells.assign(datasets.size(), std::vector<CrossCell>(datasets.size()));
    for (size_t i = 0; i < datasets.size(); ++i) {
        PredictFn predict;
        std::string train_error;
        try {
            predict = trainer.fit(datasets[i], seed);
        } catch (const std::exception& e) {
            train_error = e.what();
        }
        for (size_t j = 0; j < datasets.size(); ++j) {
            CrossCell& cell = m.cells[i][j];
            if (!train_error.empty()) {
                cell.error = "train failed: " + train_error;
                continue;
            }
            try {
                cell.report = evaluate(predict(datasets[j].test), gold_labels(datasets[j].test));
                cell.ok = true;
            } catch (const std::exception& e) {
                cell.error = e.what();
            }
        }
    }
    return m;
}

BowReport bow_report(const std::vector<LinearModel>& models, size_t k,
                     const std::set<std::string>& function_words) {
    if (models.empty()) throw std::runtime_error("bow_report: no models");
    std::set<std::string> common;
    for (size_t i = 0; i < models.size(); ++i) {
        auto top = top_features(models[i], k);
        std::set<std::string> feats;
        for (const auto& [f, w] : top.positive) feats.insert(f);
        for (const auto& [f, w] : top.negative) feats.insert(f);
        if (i == 0) {
            common = std::move(feats);
        } else {
            std::set<std::string> next;
            std::set_intersection(common.begin(), common.end(), feats.begin(), feats.end(),
                                  std::inserter(next, next.begin()));
            common = std::move(next);
        }
    }
    BowReport r;
    r.intersection.assign(common.begin(), common.end());
    for (const auto& f : r.intersection) {
        if (f.find('_') != std::string::npos) {
            r.bigrams++;
        } else if (function_words.count(f)) {
            r.function_unigrams++;
        } else {
            r.content_unigrams++;
        }
    }
    r.content_function_ratio = r.function_unigrams
                                   ? static_cast<double>(r.content_unigrams) /
                                         static_cast<double>(r.function_unigrams)
                                   : 0.0;
    return r;
}

std::set<std::string> load_function_words(const std::string& path) {
    std::set<std::string> words;
    for (const auto& line : read_lines(path)) {
        auto w = strip(line);
        if (w.empty() || w[0] == '#') continue;
        words.insert(lowercase_ascii(w));
    }
    return words;
}

PredictionSet load_external_predictions(const std::string& path) {
    auto lines = read_lines(path);
    if (lines.empty()) throw std::runtime_error(path + ": empty predictions file");
    PredictionSet p;
    size_t start = 0;
    if (!lines[0].empty() && lines[0][0] == '#') {
        for (const auto& field : split_ws(lines[0].substr(1))) {
            if (field.rfind("model=", 0) == 0) p.model = field.substr(6);
            if (field.rfind("split=", 0) == 0) p.split = field.substr(6);
        }
        start = 1;
    }
    if (p.model.empty())
        throw std::runtime_error(path + ": missing metadata line '# model=<name> split=<split>'");
    for (size_t li = start; li < lines.size(); ++li) {
        if (strip(lines[li]).empty()) continue;
        auto fields = split_on(lines[li], '\t');
        if (fields.size() != 3)
            throw std::runtime_error(path + ": line " + std::to_string(li + 1) +
                                     ": expected id<TAB>label<TAB>score");
        Label label = parse_label_token(fields[1]);
        char* end = nullptr;
        double score = std::strtod(fields[2].c_str(), &end);
        if (end != fields[2].c_str() + fields[2].size() || !std::isfinite(score) || score < 0 || score > 1)
            throw std::runtime_error(path + ": line " + std::to_string(li + 1) + ": score must be in [0,1]");
        if (!p.by_id.emplace(fields[0], std::make_pair(label, score)).second)
            throw std::runtime_error(path + ": line " + std::to_string(li + 1) + ": duplicate id '" +
                                     fields[0] + "'");
        p.ids.push_back(fields[0]);
    }
    if (p.ids.empty()) throw std::runtime_error(path + ": no prediction rows");
    return p;
}

void save_predictions(const PredictionSet& p, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write predictions: " + path);
    out << "# model=" << p.model << " split=" << p.split << '\n';
    char buf[32];
    for (const auto& id : p.ids) {
        const auto& [label, score] = p.by_id.at(id);
        std::snprintf(buf, sizeof(buf), "%.6f", score);
        out << id << '\t' << label_token(label) << '\t' << buf << '\n';
    }
}

PredictionSet predictions_from_labels(const std::string& model, const std::string& split,
                                      const LabeledDataset& d, const std::vector<Label>& labels,
                                      const std::vector<double>& scores) {
    if (labels.size() != d.size())
        throw std::runtime_error("predictions_from_labels: label count mismatch");
    PredictionSet p;
    p.model = model;
    p.split = split;
    for (size_t i = 0; i < d.size(); ++i) {
        double score = scores.empty() ? (labels[i] == Label::Argument ? 1.0 : 0.0) : scores[i];
        p.ids.push_back(d.sentences[i].id);
        p.by_id[d.sentences[i].id] = {labels[i], score};
    }
    return p;
}

std::vector<std::pair<std::string, Label>> ensemble_predict(
    const std::vector<PredictionSet>& members, const std::optional<std::vector<double>>& weights) {
    if (members.empty()) throw std::runtime_error("ensemble_predict: no members");
    if (weights) {
        if (weights->size() != members.size())
            throw std::runtime_error("ensemble_predict: weight count does not match member count");
        double total = 0;
        for (double w : *weights) {
            if (w < 0) throw std::runtime_error("ensemble_predict: negative weight");
            total += w;
        }
        if (total == 0) throw std::runtime_error("ensemble_predict: all weights are zero");
    }

    // all members must cover the same ids
    const auto& base = members[0];
    for (size_t mi = 1; mi < members.size(); ++mi) {
        const auto& m = members[mi];
        std::vector<std::string> missing, extra;
        for (const auto& id : base.ids)
            if (!m.by_id.count(id)) missing.push_back(id);
        for (const auto& id : m.ids)
            if (!base.by_id.count(id)) extra.push_back(id);
        if (!missing.empty() || !extra.empty()) {
            std::string msg = "ensemble_predict: member '" + m.model + "' id set mismatch;";
            auto sample = [](const std::vector<std::string>& v) {
                std::string s;
                for (size_t i = 0; i < std::min<size_t>(v.size(), 5); ++i) s += " " + v[i];
                if (v.size() > 5) s += " ...";
                return s;
            };
            if (!missing.empty()) msg += " missing:" + sample(missing);
            if (!extra.empty()) msg += " extra:" + sample(extra);
            throw std::runtime_error(msg);
        }
    }

    std::vector<std::pair<std::string, Label>> out;
    out.reserve(base.ids.size());
    for (const auto& id : base.ids) {
        double arg_votes = 0, non_votes = 0;
        for (size_t mi = 0; mi < members.size(); ++mi) {
            double w = weights ? (*weights)[mi] : 1.0;
            if (members[mi].by_id.at(id).first == Label::Argument)
                arg_votes += w;
            else
                non_votes += w;
        }
        out.emplace_back(id, arg_votes >= non_votes ? Label::Argument : Label::NonArgument);
    }
    return out;
}

EvalReport aggregate_runs(const std::vector<EvalReport>& reports) {
    if (reports.empty()) throw std::runtime_error("aggregate_runs: no reports");
    if (reports.size() == 1) {
        EvalReport r = reports[0];
        r.runs = 1;
        return r;
    }
    auto stat = [&](auto pick) {
        double sum = 0;
        for (const auto& r : reports) sum += pick(r);
        double mean = sum / static_cast<double>(reports.size());
        double ss = 0;
        for (const auto& r : reports) {
            double d = pick(r) - mean;
            ss += d * d;
        }
        Metric m;
        m.mean = mean;
        m.stddev = std::sqrt(ss / static_cast<double>(reports.size() - 1));
        return m;
    };
    EvalReport out;
    out.precision = stat([](const EvalReport& r) { return r.precision.mean; });
    out.recall = stat([](const EvalReport& r) { return r.recall.mean; });
    out.f1 = stat([](const EvalReport& r) { return r.f1.mean; });
    out.f1_positive = stat([](const EvalReport& r) { return r.f1_positive.mean; });
    out.mode = reports[0].mode;
    out.runs = static_cast<int>(reports.size());
    bool have_oov = true;
    double oov_sum = 0;
    for (const auto& r : reports) {
        if (std::isnan(r.oov)) have_oov = false;
        else oov_sum += r.oov;
    }
    if (have_oov) out.oov = oov_sum / static_cast<double>(reports.size());
    return out;
}

MultiRunResult train_bilstm_runs(const SplitSet& splits, const SemanticSpace& space,
                                 const ClassifierConfig& cfg, int runs) {
    if (runs < 1) throw std::runtime_error("train_bilstm_runs: runs must be >= 1");
    MultiRunResult out;
    for (int r = 0; r < runs; ++r) {
        ClassifierConfig run_cfg = cfg;
        run_cfg.seed = cfg.seed + static_cast<uint64_t>(r);
        auto [model, report] = train_bilstm(splits, space, run_cfg);
        out.per_run.push_back(report);
    }
    out.aggregate = aggregate_runs(out.per_run);
    return out;
}

}  // namespace argsem
