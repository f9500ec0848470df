#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace argsem {

enum class SpaceFamily { Network, FeatureBased, Corpus, Random };

const char* space_family_name(SpaceFamily f);

struct SpaceMeta {
    SpaceFamily family = SpaceFamily::Corpus;
    std::string source;
    uint64_t config_hash = 0;
};

class SemanticSpace {
public:
    SemanticSpace() = default;
    SemanticSpace(std::vector<std::string> words, size_t dim);

    size_t dim() const { return dim_; }
    size_t size() const { return words_.size(); }
    bool contains(const std::string& w) const { return vocab_.count(w) != 0; }
    std::optional<size_t> index_of(const std::string& w) const;
    const std::vector<std::string>& words() const { return words_; }
    const std::unordered_map<std::string, size_t>& vocab() const { return vocab_; }

    std::span<const float> row(size_t i) const { return {matrix_.data() + i * dim_, dim_}; }
    std::span<float> row(size_t i) { return {matrix_.data() + i * dim_, dim_}; }
    const std::vector<float>& matrix() const { return matrix_; }
    std::vector<float>& matrix() { return matrix_; }

    SpaceMeta meta;

private:
    std::unordered_map<std::string, size_t> vocab_;
    std::vector<std::string> words_;
    std::vector<float> matrix_;
    size_t dim_ = 0;
};

// throws on OOV (names the word) and on zero-norm vectors
double cosine(const SemanticSpace& s, const std::string& w1, const std::string& w2);

enum class OovPolicy { UnknownVector, ZeroVector };

struct EmbeddedSequence {
    std::vector<float> rows;  // seq_len x dim, row-major
    std::vector<uint8_t> mask;
    size_t seq_len = 0;
    size_t dim = 0;

    std::span<const float> row(size_t t) const { return {rows.data() + t * dim, dim}; }
};

// truncates beyond seq_len, pads short sequences with zero rows and mask=0;
// OOV tokens map to one fixed seeded unknown vector
EmbeddedSequence embed_sequence(const SemanticSpace& s, const std::vector<std::string>& tokens,
                                size_t seq_len, OovPolicy oov = OovPolicy::UnknownVector);

// the shared OOV vector for a given dimensionality (fixed seed)
std::vector<float> unknown_vector(size_t dim);

// word2vec text format: header `|V| dim`, then `word v1 .. vd` rows
void save_space(const SemanticSpace& s, const std::string& path);
SemanticSpace load_space(const std::string& path);

// entries uniform in [-0.5/dim, 0.5/dim]; word order = given order
SemanticSpace random_space(const std::vector<std::string>& vocab, size_t dim, uint64_t seed);

}  // namespace argsem
