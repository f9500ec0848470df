#include "argsem/space.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "argsem/rng.hpp"
#include "argsem/util.hpp"

namespace argsem {

const char* space_family_name(SpaceFamily f) {
    switch (f) {
        case SpaceFamily::Network: return "network";
        case SpaceFamily::FeatureBased: return "feature_based";
        case SpaceFamily::Corpus: return "corpus";
        case SpaceFamily::Random: return "random";
    }
    return "corpus";
}

SemanticSpace::SemanticSpace(std::vector<std::string> words, size_t dim)
    : words_(std::move(words)), dim_(dim) {
    vocab_.reserve(words_.size());
    for (size_t i = 0; i < words_.size(); ++i) {
        if (!vocab_.emplace(words_[i], i).second)
            throw std::runtime_error("duplicate word in space vocabulary: " + words_[i]);
    }
    matrix_.assign(words_.size() * dim_, 0.0f);
}

std::optional<size_t> SemanticSpace::index_of(const std::string& w) const {
    auto it = vocab_.find(w);
    if (it == vocab_.end()) return std::nullopt;
    return it->second;
}

double cosine(const SemanticSpace& s, const std::string& w1, const std::string& w2) {
    auto i1 = s.index_of(w1);
    if (!i1) throw std::runtime_error("cosine: word not in vocabulary: '" + w1 + "'");
    auto i2 = s.index_of(w2);
    if (!i2) throw std::runtime_error("cosine: word not in vocabulary: '" + w2 + "'");
    auto a = s.row(*i1), b = s.row(*i2);
    double dot = 0, na = 0, nb = 0;
    for (size_t k = 0; k < a.size(); ++k) {
        dot += static_cast<double>(a[k]) * b[k];
        na += static_cast<double>(a[k]) * a[k];
        nb += static_cast<double>(b[k]) * b[k];
    }
    if (na == 0.0) throw std::runtime_error("cosine: zero-norm vector for '" + w1 + "'");
    if (nb == 0.0) throw std::runtime_error("cosine: zero-norm vector for '" + w2 + "'");
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

std::vector<float> unknown_vector(size_t dim) {
    Rng rng(mix_seed(0x756e6b6e6f776eULL, dim));  // "unknown"
    std::vector<float> v(dim);
    double half = 0.5 / static_cast<double>(dim);
    for (auto& x : v) x = static_cast<float>(rng.uniform(-half, half));
    return v;
}

EmbeddedSequence embed_sequence(const SemanticSpace& s, const std::vector<std::string>& tokens,
                                size_t seq_len, OovPolicy oov) {
    if (seq_len < 1) throw std::runtime_error("embed_sequence: seq_len must be >= 1");
    EmbeddedSequence out;
    out.seq_len = seq_len;
    out.dim = s.dim();
    out.rows.assign(seq_len * s.dim(), 0.0f);
    out.mask.assign(seq_len, 0);

    std::vector<float> unk;
    size_t n = std::min(tokens.size(), seq_len);
    for (size_t t = 0; t < n; ++t) {
        out.mask[t] = 1;
        float* dst = out.rows.data() + t * s.dim();
        if (auto idx = s.index_of(tokens[t])) {
            auto src = s.row(*idx);
            std::copy(src.begin(), src.end(), dst);
        } else if (oov == OovPolicy::UnknownVector) {
            if (unk.empty()) unk = unknown_vector(s.dim());
            std::copy(unk.begin(), unk.end(), dst);
        }  // ZeroVector: row stays zero, mask stays 1
    }
    return out;
}

void save_space(const SemanticSpace& s, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write space: " + path);
    out << s.size() << ' ' << s.dim() << '\n';
    char buf[32];
    for (size_t i = 0; i < s.size(); ++i) {
        out << s.words()[i];
        auto r = s.row(i);
        for (float v : r) {
            std::snprintf(buf, sizeof(buf), " %.6f", static_cast<double>(v));
            out << buf;
        }
        out << '\n';
    }
}

SemanticSpace load_space(const std::string& path) {
    auto lines = read_lines(path);
    if (lines.empty()) throw std::runtime_error(path + ": empty space file");
    auto header = split_ws(lines[0]);
    if (header.size() != 2)
        throw std::runtime_error(path + ": line 1: expected header '|V| dim'");
    size_t n = 0, dim = 0;
    auto parse_sz = [&](const std::string& s, size_t& out) {
        auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
        return ec == std::errc() && p == s.data() + s.size();
    };
    if (!parse_sz(header[0], n) || !parse_sz(header[1], dim) || dim == 0)
        throw std::runtime_error(path + ": line 1: malformed header '" + lines[0] + "'");

    std::vector<std::string> words;
    words.reserve(n);
    std::vector<float> values;
    values.reserve(n * dim);
    size_t rows = 0;
    for (size_t li = 1; li < lines.size(); ++li) {
        if (lines[li].empty()) {
            if (li + 1 == lines.size()) break;  // trailing newline
            throw std::runtime_error(path + ": line " + std::to_string(li + 1) + ": empty row");
        }
        auto fields = split_ws(lines[li]);
        if (fields.size() != dim + 1)
            throw std::runtime_error(path + ": line " + std::to_string(li + 1) + ": expected " +
                                     std::to_string(dim + 1) + " fields, got " + std::to_string(fields.size()));
        words.push_back(fields[0]);
        for (size_t k = 1; k < fields.size(); ++k) {
            const std::string& fs = fields[k];
            char* end = nullptr;
            double v = std::strtod(fs.c_str(), &end);
            if (end != fs.c_str() + fs.size() || !std::isfinite(v))
                throw std::runtime_error(path + ": line " + std::to_string(li + 1) +
                                         ": non-numeric component '" + fs + "'");
            values.push_back(static_cast<float>(v));
        }
        ++rows;
    }
    if (rows != n)
        throw std::runtime_error(path + ": header declares " + std::to_string(n) + " rows, found " +
                                 std::to_string(rows));

    SemanticSpace s(std::move(words), dim);
    s.matrix() = std::move(values);
    s.meta.source = path;
    return s;
}

SemanticSpace random_space(const std::vector<std::string>& vocab, size_t dim, uint64_t seed) {
    if (vocab.empty()) throw std::runtime_error("random_space: empty vocabulary");
    SemanticSpace s(vocab, dim);
    Rng rng(mix_seed(seed, 0x72616e64ULL));  // "rand"
    double half = 0.5 / static_cast<double>(dim);
    for (auto& v : s.matrix()) v = static_cast<float>(rng.uniform(-half, half));
    s.meta.family = SpaceFamily::Random;
    s.meta.source = "random";
    s.meta.config_hash = mix_seed(seed, dim, vocab.size());
    return s;
}

}  // namespace argsem
