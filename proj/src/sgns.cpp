#include "argsem/sgns.hpp"

#include <algorithm>
#include <atomic>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "argsem/util.hpp"

namespace argsem {

uint64_t SgnsConfig::hash() const {
    return fnv1a64(describe());
}

std::string SgnsConfig::describe() const {
    std::ostringstream out;
    out << "sgns dim=" << dim << " window=" << window << " negatives=" << negatives << " lr=" << lr
        << " epochs=" << epochs << " min_count=" << min_count << " seed=" << seed;
    return out.str();
}

UnigramTable::UnigramTable(const std::vector<size_t>& counts) {
    if (counts.empty()) throw std::runtime_error("unigram table: empty counts");
    const size_t n = counts.size();
    prob_.resize(n);
    double total = 0;
    for (size_t i = 0; i < n; ++i) {
        if (counts[i] == 0) throw std::runtime_error("unigram table: zero count at index " + std::to_string(i));
        prob_[i] = std::pow(static_cast<double>(counts[i]), 0.75);
        total += prob_[i];
    }
    for (auto& p : prob_) p /= total;

    // Vose alias method
    accept_.assign(n, 0.0);
    alias_.assign(n, 0);
    std::vector<double> scaled(n);
    std::vector<size_t> small, large;
    for (size_t i = 0; i < n; ++i) {
        scaled[i] = prob_[i] * static_cast<double>(n);
        (scaled[i] < 1.0 ? small : large).push_back(i);
    }
    while (!small.empty() && !large.empty()) {
        size_t s = small.back();
        small.pop_back();
        size_t l = large.back();
        large.pop_back();
        accept_[s] = scaled[s];
        alias_[s] = l;
        scaled[l] = (scaled[l] + scaled[s]) - 1.0;
        (scaled[l] < 1.0 ? small : large).push_back(l);
    }
    for (size_t i : large) accept_[i] = 1.0;
    for (size_t i : small) accept_[i] = 1.0;
}

UnigramTable UnigramTable::from_counts(const std::map<std::string, size_t>& counts) {
    std::vector<size_t> v;
    v.reserve(counts.size());
    for (const auto& [w, c] : counts) v.push_back(c);
    return UnigramTable(v);
}

size_t UnigramTable::sample(Rng& rng) const {
    size_t i = static_cast<size_t>(rng.bounded(prob_.size()));
    return rng.uniform() < accept_[i] ? i : alias_[i];
}

namespace {

constexpr uint64_t kInitTag = 0x696e6974;    // "init"
constexpr uint64_t kWindowTag = 0x77696e;    // "win"
constexpr uint64_t kNegativeTag = 0x6e6567;  // "neg"

struct EncodedCorpus {
    std::vector<std::string> words;            // vocab index -> word
    std::vector<size_t> counts;                // vocab index -> corpus count
    std::vector<std::vector<int32_t>> lines;   // pruned token ids, empty lines dropped
};

EncodedCorpus encode_corpus(const std::vector<std::vector<std::string>>& lines, size_t min_count) {
    std::unordered_map<std::string, size_t> raw;
    for (const auto& line : lines)
        for (const auto& tok : line) raw[tok]++;

    std::vector<std::pair<std::string, size_t>> kept;
    for (auto& [w, c] : raw)
        if (c >= std::max<size_t>(min_count, 1)) kept.emplace_back(w, c);
    if (kept.empty()) throw std::runtime_error("sgns: vocabulary empty after min_count pruning");
    std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });

    EncodedCorpus enc;
    std::unordered_map<std::string, int32_t> index;
    index.reserve(kept.size());
    for (auto& [w, c] : kept) {
        index.emplace(w, static_cast<int32_t>(enc.words.size()));
        enc.words.push_back(w);
        enc.counts.push_back(c);
    }
    for (const auto& line : lines) {
        std::vector<int32_t> ids;
        ids.reserve(line.size());
        for (const auto& tok : line) {
            auto it = index.find(tok);
            if (it != index.end()) ids.push_back(it->second);
        }
        if (!ids.empty()) enc.lines.push_back(std::move(ids));
    }
    return enc;
}

// pairs generated at position i of a length-L line with window draw b
inline uint64_t pairs_at(size_t i, size_t len, int b) {
    size_t lo = i >= static_cast<size_t>(b) ? i - static_cast<size_t>(b) : 0;
    size_t hi = std::min(len - 1, i + static_cast<size_t>(b));
    return hi - lo;  // excludes the center itself
}

struct Trainer {
    const SgnsConfig& cfg;
    const EncodedCorpus& corpus;
    const UnigramTable& table;
    std::vector<float> target;   // vocab x dim, becomes the space
    std::vector<float> context;  // vocab x dim
    uint64_t total_pairs = 0;
    std::atomic<uint64_t> pair_counter{0};

    explicit Trainer(const SgnsConfig& c, const EncodedCorpus& e, const UnigramTable& t)
        : cfg(c), corpus(e), table(t) {
        target.resize(corpus.words.size() * cfg.dim);
        context.assign(corpus.words.size() * cfg.dim, 0.0f);
        Rng rng(mix_seed(cfg.seed, kInitTag));
        double half = 0.5 / static_cast<double>(cfg.dim);
        for (auto& v : target) v = static_cast<float>(rng.uniform(-half, half));
        count_total_pairs();
    }

    // window draws are replayed from per-(epoch, line) streams, so the
    // planned pair total matches training exactly
    void count_total_pairs() {
        total_pairs = 0;
        for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
            for (size_t li = 0; li < corpus.lines.size(); ++li) {
                const auto& line = corpus.lines[li];
                Rng win(mix_seed(cfg.seed, kWindowTag, static_cast<uint64_t>(epoch), li));
                for (size_t i = 0; i < line.size(); ++i) {
                    int b = 1 + static_cast<int>(win.bounded(static_cast<uint64_t>(cfg.window)));
                    total_pairs += pairs_at(i, line.size(), b);
                }
            }
        }
    }

    float lr_at(uint64_t pair_index) const {
        double frac = total_pairs ? static_cast<double>(pair_index) / static_cast<double>(total_pairs) : 0.0;
        double lr = cfg.lr * std::max(1.0 - frac, 1e-4);
        return static_cast<float>(lr);
    }

    // trains lines [begin, end) for one epoch; returns (loss sum, pair count)
    std::pair<double, uint64_t> train_shard(int epoch, size_t begin, size_t end) {
        const size_t dim = cfg.dim;
        double loss_sum = 0;
        uint64_t pairs = 0;
        for (size_t li = begin; li < end; ++li) {
            const auto& line = corpus.lines[li];
            Rng win(mix_seed(cfg.seed, kWindowTag, static_cast<uint64_t>(epoch), li));
            Rng neg(mix_seed(cfg.seed, kNegativeTag, static_cast<uint64_t>(epoch), li));
            for (size_t i = 0; i < line.size(); ++i) {
                int b = 1 + static_cast<int>(win.bounded(static_cast<uint64_t>(cfg.window)));
                size_t lo = i >= static_cast<size_t>(b) ? i - static_cast<size_t>(b) : 0;
                size_t hi = std::min(line.size() - 1, i + static_cast<size_t>(b));
                int32_t center = line[i];
                for (size_t j = lo; j <= hi; ++j) {
                    if (j == i) continue;
                    int32_t ctx = line[j];
                    uint64_t k = pair_counter.fetch_add(1, std::memory_order_relaxed);
                    float lr = lr_at(k);
                    std::span<float> w{target.data() + static_cast<size_t>(ctx) * dim, dim};
                    std::span<float> c{context.data() + static_cast<size_t>(center) * dim, dim};
                    loss_sum += sgns_update<float>(w, c, 1, lr);
                    for (int s = 0; s < cfg.negatives; ++s) {
                        int32_t sampled = static_cast<int32_t>(table.sample(neg));
                        if (sampled == center) continue;
                        std::span<float> cn{context.data() + static_cast<size_t>(sampled) * dim, dim};
                        loss_sum += sgns_update<float>(w, cn, 0, lr);
                    }
                    ++pairs;
                }
            }
        }
        return {loss_sum, pairs};
    }

    SgnsStats run() {
        SgnsStats stats;
        stats.vocab_size = corpus.words.size();
        stats.total_pairs = total_pairs;
        const int workers = std::max(1, cfg.workers);
        for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
            double loss_sum = 0;
            uint64_t pairs = 0;
            if (workers == 1 || corpus.lines.size() < 2) {
                auto [l, p] = train_shard(epoch, 0, corpus.lines.size());
                loss_sum = l;
                pairs = p;
            } else {
                // benign hogwild races on the shared matrices, as in the
                // reference method; reproducible only with workers == 1
                std::vector<std::thread> threads;
                std::vector<std::pair<double, uint64_t>> results(workers);
                size_t per = (corpus.lines.size() + workers - 1) / workers;
                for (int t = 0; t < workers; ++t) {
                    size_t begin = std::min(corpus.lines.size(), static_cast<size_t>(t) * per);
                    size_t end = std::min(corpus.lines.size(), begin + per);
                    threads.emplace_back([this, epoch, begin, end, t, &results] {
                        results[t] = train_shard(epoch, begin, end);
                    });
                }
                for (auto& th : threads) th.join();
                for (auto& [l, p] : results) {
                    loss_sum += l;
                    pairs += p;
                }
            }
            stats.epoch_mean_loss.push_back(pairs ? loss_sum / static_cast<double>(pairs) : 0.0);
        }
        return stats;
    }
};

SemanticSpace train_common(const std::vector<std::vector<std::string>>& lines, const SgnsConfig& cfg,
                           SpaceFamily family, const std::string& source, SgnsStats* stats_out) {
    if (lines.empty()) throw std::runtime_error("sgns: empty corpus");
    if (cfg.window < 1 || cfg.negatives < 0 || cfg.epochs < 1 || cfg.lr <= 0 || cfg.dim < 1)
        throw std::runtime_error("sgns: invalid config: " + cfg.describe());

    EncodedCorpus enc = encode_corpus(lines, cfg.min_count);
    UnigramTable table(enc.counts);
    Trainer trainer(cfg, enc, table);
    SgnsStats stats = trainer.run();
    if (stats_out) *stats_out = stats;

    SemanticSpace space(enc.words, cfg.dim);
    space.matrix() = std::move(trainer.target);
    space.meta.family = family;
    space.meta.source = source;
    space.meta.config_hash = cfg.hash();
    return space;
}

}  // namespace

SemanticSpace train_skipgram(const ProjectedCorpus& corpus, const SgnsConfig& cfg, SgnsStats* stats) {
    SpaceFamily family =
        corpus.source == CorpusSource::Network ? SpaceFamily::Network : SpaceFamily::FeatureBased;
    return train_common(corpus.lines, cfg, family, "projected", stats);
}

SemanticSpace train_skipgram_file(const std::string& path, const SgnsConfig& cfg, SgnsStats* stats) {
    auto raw = read_lines(path);
    std::vector<std::vector<std::string>> lines;
    lines.reserve(raw.size());
    for (const auto& l : raw) {
        auto toks = split_ws(l);
        if (!toks.empty()) lines.push_back(std::move(toks));
    }
    return train_common(lines, cfg, SpaceFamily::Corpus, path, stats);
}

}  // namespace argsem
