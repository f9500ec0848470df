#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace argsem {

enum class Label { Argument, NonArgument };

const char* label_token(Label l);
Label parse_label_token(const std::string& tok);  // throws on unknown token

struct Sentence {
    std::string id;
    std::string text;
    std::vector<std::string> tokens;
    Label label = Label::NonArgument;
    std::string source;
};

struct LabeledDataset {
    std::string name;
    std::vector<Sentence> sentences;
    std::map<Label, size_t> class_counts;

    size_t size() const { return sentences.size(); }
    size_t count(Label l) const;
    void recount();
};

struct SplitSet {
    LabeledDataset train;
    LabeledDataset dev;
    LabeledDataset test;
    double ratios[3] = {0.70, 0.10, 0.20};
    uint64_t seed = 0;
};

enum class DatasetFormat { Tsv, Jsonl };

DatasetFormat parse_dataset_format(const std::string& s);

// lowercases, splits on any non-alphanumeric ASCII byte; bytes >= 0x80 are
// treated as word characters so multi-byte UTF-8 sequences stay intact
std::vector<std::string> tokenize(const std::string& text);

LabeledDataset load_dataset(const std::string& path, DatasetFormat format);

// majority class randomly reduced to the minority size, without replacement
LabeledDataset undersample(const LabeledDataset& d, uint64_t seed);

// seeded, stratified 70/10/20 partition
SplitSet split(const LabeledDataset& d, uint64_t seed);

// fraction of token occurrences absent from vocab
double oov_rate(const LabeledDataset& d, const std::unordered_set<std::string>& vocab);

std::unordered_map<std::string, size_t> build_vocab(const LabeledDataset& d, size_t min_count);

}  // namespace argsem
