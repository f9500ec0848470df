#include "argsem/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <stdexcept>

#include <json.hpp>

#include "argsem/rng.hpp"
#include "argsem/util.hpp"

namespace argsem {

const char* label_token(Label l) { return l == Label::Argument ? "arg" : "non-arg"; }

Label parse_label_token(const std::string& tok) {
    if (tok == "arg") return Label::Argument;
    if (tok == "non-arg") return Label::NonArgument;
    throw std::runtime_error("unknown label token '" + tok + "' (expected 'arg' or 'non-arg')");
}

size_t LabeledDataset::count(Label l) const {
    auto it = class_counts.find(l);
    return it == class_counts.end() ? 0 : it->second;
}

void LabeledDataset::recount() {
    class_counts.clear();
    class_counts[Label::Argument] = 0;
    class_counts[Label::NonArgument] = 0;
    for (const auto& s : sentences) class_counts[s.label]++;
}

DatasetFormat parse_dataset_format(const std::string& s) {
    if (s == "tsv") return DatasetFormat::Tsv;
    if (s == "jsonl") return DatasetFormat::Jsonl;
    throw std::runtime_error("unknown dataset format '" + s + "' (expected 'tsv' or 'jsonl')");
}

std::vector<std::string> tokenize(const std::string& text) {
    std::vector<std::string> tokens;
    std::string cur;
    for (unsigned char c : text) {
        bool word_char = (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c >= 0x80;
        if (c >= 'A' && c <= 'Z') {
            c += 'a' - 'A';
            word_char = true;
        }
        if (word_char) {
            cur.push_back(static_cast<char>(c));
        } else if (!cur.empty()) {
            tokens.push_back(std::move(cur));
            cur.clear();
        }
    }
    if (!cur.empty()) tokens.push_back(std::move(cur));
    return tokens;
}

namespace {

Sentence make_sentence(std::string id, std::string text, const std::string& label_tok,
                       const std::string& source, size_t row) {
    Sentence s;
    s.id = std::move(id);
    s.text = std::move(text);
    try {
        s.label = parse_label_token(label_tok);
    } catch (const std::exception& e) {
        throw std::runtime_error("row " + std::to_string(row) + ": " + e.what());
    }
    s.tokens = tokenize(s.text);
    s.source = source;
    return s;
}

}  // namespace

LabeledDataset load_dataset(const std::string& path, DatasetFormat format) {
    if (!file_exists(path)) throw std::runtime_error("dataset file not found: " + path);
    LabeledDataset d;
    d.name = std::filesystem::path(path).stem().string();

    std::unordered_set<std::string> seen_ids;
    auto lines = read_lines(path);
    size_t row = 0;
    for (const auto& line : lines) {
        ++row;
        if (strip(line).empty()) continue;
        Sentence s;
        if (format == DatasetFormat::Tsv) {
            auto fields = split_on(line, '\t');
            if (fields.size() != 3)
                throw std::runtime_error("row " + std::to_string(row) + ": expected 3 tab-separated fields, got " +
                                         std::to_string(fields.size()));
            s = make_sentence(fields[0], fields[1], fields[2], d.name, row);
        } else {
            nlohmann::json obj;
            try {
                obj = nlohmann::json::parse(line);
            } catch (const std::exception& e) {
                throw std::runtime_error("row " + std::to_string(row) + ": invalid JSON: " + e.what());
            }
            if (!obj.contains("id") || !obj.contains("text") || !obj.contains("label"))
                throw std::runtime_error("row " + std::to_string(row) + ": missing one of keys id/text/label");
            s = make_sentence(obj["id"].get<std::string>(), obj["text"].get<std::string>(),
                              obj["label"].get<std::string>(), d.name, row);
        }
        if (s.text.empty())
            throw std::runtime_error("row " + std::to_string(row) + ": empty text");
        if (s.id.empty())
            throw std::runtime_error("row " + std::to_string(row) + ": empty id");
        if (!seen_ids.insert(s.id).second)
            throw std::runtime_error("row " + std::to_string(row) + ": duplicate sentence id '" + s.id + "'");
        d.sentences.push_back(std::move(s));
    }
    if (d.sentences.empty()) throw std::runtime_error("empty dataset file: " + path);
    d.recount();
    return d;
}

LabeledDataset undersample(const LabeledDataset& d, uint64_t seed) {
    size_t n_arg = d.count(Label::Argument);
    size_t n_non = d.count(Label::NonArgument);
    if (n_arg == 0 || n_non == 0)
        throw std::runtime_error("undersample: dataset '" + d.name + "' has a class with zero members");
    if (n_arg == n_non) {
        LabeledDataset out = d;
        return out;
    }
    Label majority = n_arg > n_non ? Label::Argument : Label::NonArgument;
    size_t target = std::min(n_arg, n_non);

    std::vector<size_t> major_idx;
    for (size_t i = 0; i < d.sentences.size(); ++i)
        if (d.sentences[i].label == majority) major_idx.push_back(i);

    Rng rng(mix_seed(seed, 0x756e646572ULL));  // "under"
    rng.shuffle(major_idx);
    std::vector<bool> keep(d.sentences.size(), true);
    for (size_t i = target; i < major_idx.size(); ++i) keep[major_idx[i]] = false;

    LabeledDataset out;
    out.name = d.name;
    for (size_t i = 0; i < d.sentences.size(); ++i)
        if (keep[i]) out.sentences.push_back(d.sentences[i]);
    out.recount();
    return out;
}

namespace {

// largest-remainder apportionment of `total` over per-class ideals,
// capped by each class's remaining capacity
std::vector<size_t> apportion(const std::vector<double>& ideal, size_t total,
                              const std::vector<size_t>& capacity) {
    size_t k = ideal.size();
    std::vector<size_t> out(k);
    std::vector<std::pair<double, size_t>> rem(k);
    size_t assigned = 0;
    for (size_t i = 0; i < k; ++i) {
        out[i] = std::min(static_cast<size_t>(std::floor(ideal[i])), capacity[i]);
        assigned += out[i];
        rem[i] = {ideal[i] - std::floor(ideal[i]), i};
    }
    std::sort(rem.begin(), rem.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });
    size_t extras = total > assigned ? total - assigned : 0;
    for (size_t pass = 0; extras > 0 && pass < 2; ++pass) {
        for (const auto& [r, i] : rem) {
            if (extras == 0) break;
            if (out[i] < capacity[i]) {
                out[i]++;
                --extras;
            }
        }
    }
    return out;
}

}  // namespace

SplitSet split(const LabeledDataset& d, uint64_t seed) {
    if (d.size() < 10)
        throw std::runtime_error("split: dataset '" + d.name + "' has " + std::to_string(d.size()) +
                                 " sentences, need at least 10");
    const size_t n = d.size();
    const size_t t_train = static_cast<size_t>(std::llround(0.70 * static_cast<double>(n)));
    const size_t t_dev = static_cast<size_t>(std::llround(0.10 * static_cast<double>(n)));
    const size_t t_test = n - t_train - t_dev;
    if (t_train == 0 || t_test == 0)
        throw std::runtime_error("split: dataset too small to populate all three splits");

    const Label classes[2] = {Label::Argument, Label::NonArgument};
    std::vector<std::vector<size_t>> by_class(2);
    for (size_t i = 0; i < n; ++i)
        by_class[d.sentences[i].label == Label::Argument ? 0 : 1].push_back(i);

    std::vector<double> ideal_train(2), ideal_dev(2);
    std::vector<size_t> cap(2);
    for (size_t c = 0; c < 2; ++c) {
        cap[c] = by_class[c].size();
        ideal_train[c] = 0.70 * static_cast<double>(cap[c]);
        ideal_dev[c] = 0.10 * static_cast<double>(cap[c]);
    }
    auto q_train = apportion(ideal_train, t_train, cap);
    std::vector<size_t> cap_after(2);
    for (size_t c = 0; c < 2; ++c) cap_after[c] = cap[c] - q_train[c];
    auto q_dev = apportion(ideal_dev, t_dev, cap_after);

    // 0 = train, 1 = dev, 2 = test
    std::vector<int> assignment(n, 2);
    for (size_t c = 0; c < 2; ++c) {
        auto idx = by_class[c];
        Rng rng(mix_seed(seed, 0x73706c6974ULL, c));  // "split"
        rng.shuffle(idx);
        for (size_t i = 0; i < idx.size(); ++i) {
            if (i < q_train[c])
                assignment[idx[i]] = 0;
            else if (i < q_train[c] + q_dev[c])
                assignment[idx[i]] = 1;
        }
    }
    (void)classes;
    (void)t_test;

    SplitSet out;
    out.seed = seed;
    out.train.name = d.name + "-train";
    out.dev.name = d.name + "-dev";
    out.test.name = d.name + "-test";
    for (size_t i = 0; i < n; ++i) {
        LabeledDataset& dst = assignment[i] == 0 ? out.train : assignment[i] == 1 ? out.dev : out.test;
        dst.sentences.push_back(d.sentences[i]);
    }
    out.train.recount();
    out.dev.recount();
    out.test.recount();
    return out;
}

double oov_rate(const LabeledDataset& d, const std::unordered_set<std::string>& vocab) {
    size_t total = 0, missing = 0;
    for (const auto& s : d.sentences) {
        total += s.tokens.size();
        for (const auto& t : s.tokens)
            if (!vocab.count(t)) ++missing;
    }
    if (total == 0) return 0.0;
    return static_cast<double>(missing) / static_cast<double>(total);
}

std::unordered_map<std::string, size_t> build_vocab(const LabeledDataset& d, size_t min_count) {
    std::unordered_map<std::string, size_t> counts;
    for (const auto& s : d.sentences)
        for (const auto& t : s.tokens) counts[t]++;
    if (min_count > 1) {
        for (auto it = counts.begin(); it != counts.end();) {
            if (it->second < min_count)
                it = counts.erase(it);
            else
                ++it;
        }
    }
    return counts;
}

}  // namespace argsem
