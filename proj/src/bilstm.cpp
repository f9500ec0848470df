#include "argsem/bilstm.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "argsem/rng.hpp"
#include "argsem/util.hpp"

namespace argsem {

uint64_t ClassifierConfig::hash() const { return fnv1a64(describe()); }

std::string ClassifierConfig::describe() const {
    std::ostringstream out;
    out << "bilstm epochs=" << epochs << " batch=" << batch_size << " seq_len=" << seq_len
        << " lr=" << lr << " dropout_keep=" << dropout_keep << " units=" << lstm_units
        << " trainable=" << (trainable_embeddings ? 1 : 0) << " seed=" << seed;
    return out.str();
}

namespace {

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// numerically stable BCE on the raw logit
inline double bce_logit(double logit, int label) {
    return std::max(logit, 0.0) - logit * static_cast<double>(label) + std::log1p(std::exp(-std::fabs(logit)));
}

struct StepCache {
    std::vector<double> gates;   // 4H: i, f, g, o (post-activation)
    std::vector<double> c;       // H
    std::vector<double> tanh_c;  // H
    std::vector<double> h_prev;  // H
    std::vector<double> c_prev;  // H
    size_t t = 0;
};

// runs one direction over the positions in `order`, skipping masked steps
void run_direction(const LstmDir& dir, size_t dim, size_t hidden, std::span<const double> inputs,
                   std::span<const uint8_t> mask, std::span<const size_t> order,
                   std::vector<double>& h_final, std::vector<StepCache>* caches) {
    const size_t g4 = 4 * hidden;
    std::vector<double> h(hidden, 0.0), c(hidden, 0.0), pre(g4);
    for (size_t t : order) {
        if (!mask[t]) continue;
        const double* x = inputs.data() + t * dim;
        for (size_t k = 0; k < g4; ++k) pre[k] = dir.b[k];
        for (size_t e = 0; e < dim; ++e) {
            double xv = x[e];
            const double* wrow = dir.w_x.data() + e * g4;
            for (size_t k = 0; k < g4; ++k) pre[k] += xv * wrow[k];
        }
        for (size_t j = 0; j < hidden; ++j) {
            double hv = h[j];
            const double* wrow = dir.w_h.data() + j * g4;
            for (size_t k = 0; k < g4; ++k) pre[k] += hv * wrow[k];
        }
        StepCache cache;
        cache.t = t;
        cache.h_prev = h;
        cache.c_prev = c;
        cache.gates.resize(g4);
        cache.c.resize(hidden);
        cache.tanh_c.resize(hidden);
        for (size_t j = 0; j < hidden; ++j) {
            double gi = sigmoid(pre[j]);
            double gf = sigmoid(pre[hidden + j]);
            double gg = std::tanh(pre[2 * hidden + j]);
            double go = sigmoid(pre[3 * hidden + j]);
            cache.gates[j] = gi;
            cache.gates[hidden + j] = gf;
            cache.gates[2 * hidden + j] = gg;
            cache.gates[3 * hidden + j] = go;
            c[j] = gf * c[j] + gi * gg;
            cache.c[j] = c[j];
            cache.tanh_c[j] = std::tanh(c[j]);
            h[j] = go * cache.tanh_c[j];
        }
        if (caches) caches->push_back(std::move(cache));
    }
    h_final = h;
}

void backward_direction(const LstmDir& dir, size_t dim, size_t hidden, std::span<const double> inputs,
                        const std::vector<StepCache>& caches, std::span<const double> dh_final,
                        LstmDir& grads, std::vector<double>& d_inputs) {
    const size_t g4 = 4 * hidden;
    std::vector<double> dh(dh_final.begin(), dh_final.end());
    std::vector<double> dc(hidden, 0.0), dpre(g4);
    for (auto it = caches.rbegin(); it != caches.rend(); ++it) {
        const StepCache& s = *it;
        const double* x = inputs.data() + s.t * dim;
        for (size_t j = 0; j < hidden; ++j) {
            double gi = s.gates[j];
            double gf = s.gates[hidden + j];
            double gg = s.gates[2 * hidden + j];
            double go = s.gates[3 * hidden + j];
            double do_ = dh[j] * s.tanh_c[j];
            double dcj = dc[j] + dh[j] * go * (1.0 - s.tanh_c[j] * s.tanh_c[j]);
            double di = dcj * gg;
            double df = dcj * s.c_prev[j];
            double dg = dcj * gi;
            dpre[j] = di * gi * (1.0 - gi);
            dpre[hidden + j] = df * gf * (1.0 - gf);
            dpre[2 * hidden + j] = dg * (1.0 - gg * gg);
            dpre[3 * hidden + j] = do_ * go * (1.0 - go);
            dc[j] = dcj * gf;
        }
        for (size_t k = 0; k < g4; ++k) grads.b[k] += dpre[k];
        for (size_t e = 0; e < dim; ++e) {
            double xv = x[e];
            double* grow = grads.w_x.data() + e * g4;
            const double* wrow = dir.w_x.data() + e * g4;
            double dx = 0;
            for (size_t k = 0; k < g4; ++k) {
                grow[k] += xv * dpre[k];
                dx += wrow[k] * dpre[k];
            }
            d_inputs[s.t * dim + e] += dx;
        }
        for (size_t j = 0; j < hidden; ++j) {
            double hv = s.h_prev[j];
            double* grow = grads.w_h.data() + j * g4;
            const double* wrow = dir.w_h.data() + j * g4;
            double dhj = 0;
            for (size_t k = 0; k < g4; ++k) {
                grow[k] += hv * dpre[k];
                dhj += wrow[k] * dpre[k];
            }
            dh[j] = dhj;
        }
    }
}

void zero_dir(LstmDir& d, size_t dim, size_t hidden) {
    d.w_x.assign(dim * 4 * hidden, 0.0);
    d.w_h.assign(hidden * 4 * hidden, 0.0);
    d.b.assign(4 * hidden, 0.0);
}

std::vector<size_t> forward_order(size_t n) {
    std::vector<size_t> o(n);
    for (size_t i = 0; i < n; ++i) o[i] = i;
    return o;
}

std::vector<size_t> backward_order(size_t n) {
    std::vector<size_t> o(n);
    for (size_t i = 0; i < n; ++i) o[i] = n - 1 - i;
    return o;
}

}  // namespace

std::vector<double> lstm_forward(const BiLstmCore& net, std::span<const double> inputs,
                                 std::span<const uint8_t> mask) {
    const size_t T = mask.size();
    if (inputs.size() != T * net.dim)
        throw std::runtime_error("lstm_forward: input size " + std::to_string(inputs.size()) +
                                 " does not match mask length x dim");
    std::vector<double> h_fwd, h_bwd;
    run_direction(net.fwd, net.dim, net.hidden, inputs, mask, forward_order(T), h_fwd, nullptr);
    run_direction(net.bwd, net.dim, net.hidden, inputs, mask, backward_order(T), h_bwd, nullptr);
    std::vector<double> z;
    z.reserve(2 * net.hidden);
    z.insert(z.end(), h_fwd.begin(), h_fwd.end());
    z.insert(z.end(), h_bwd.begin(), h_bwd.end());
    return z;
}

double bilstm_example_loss(const BiLstmCore& net, std::span<const double> inputs,
                           std::span<const uint8_t> mask, int label, BiLstmGrads* grads,
                           std::span<const double> dropout_mask) {
    const size_t T = mask.size();
    const size_t H = net.hidden;
    if (inputs.size() != T * net.dim) throw std::runtime_error("bilstm: input/mask shape mismatch");
    if (!dropout_mask.empty() && dropout_mask.size() != 2 * H)
        throw std::runtime_error("bilstm: dropout mask must have 2H entries");

    std::vector<StepCache> cache_fwd, cache_bwd;
    std::vector<double> h_fwd, h_bwd;
    run_direction(net.fwd, net.dim, H, inputs, mask, forward_order(T), h_fwd,
                  grads ? &cache_fwd : nullptr);
    run_direction(net.bwd, net.dim, H, inputs, mask, backward_order(T), h_bwd,
                  grads ? &cache_bwd : nullptr);

    std::vector<double> z(2 * H);
    for (size_t j = 0; j < H; ++j) {
        z[j] = h_fwd[j];
        z[H + j] = h_bwd[j];
    }
    if (!dropout_mask.empty())
        for (size_t j = 0; j < 2 * H; ++j) z[j] *= dropout_mask[j];

    double logit = net.b_out;
    for (size_t j = 0; j < 2 * H; ++j) logit += net.w_out[j] * z[j];
    double loss = bce_logit(logit, label);

    if (grads) {
        zero_dir(grads->fwd, net.dim, H);
        zero_dir(grads->bwd, net.dim, H);
        grads->w_out.assign(2 * H, 0.0);
        grads->inputs.assign(T * net.dim, 0.0);

        double dlogit = sigmoid(logit) - static_cast<double>(label);
        grads->b_out = dlogit;
        std::vector<double> dz(2 * H);
        for (size_t j = 0; j < 2 * H; ++j) {
            grads->w_out[j] = dlogit * z[j];
            dz[j] = dlogit * net.w_out[j];
        }
        if (!dropout_mask.empty())
            for (size_t j = 0; j < 2 * H; ++j) dz[j] *= dropout_mask[j];

        std::span<const double> dh_fwd{dz.data(), H};
        std::span<const double> dh_bwd{dz.data() + H, H};
        backward_direction(net.fwd, net.dim, H, inputs, cache_fwd, dh_fwd, grads->fwd, grads->inputs);
        backward_direction(net.bwd, net.dim, H, inputs, cache_bwd, dh_bwd, grads->bwd, grads->inputs);
    }
    return loss;
}

double bilstm_predict_prob(const BiLstmCore& net, std::span<const double> inputs,
                           std::span<const uint8_t> mask) {
    auto z = lstm_forward(net, inputs, mask);
    double logit = net.b_out;
    for (size_t j = 0; j < z.size(); ++j) logit += net.w_out[j] * z[j];
    return sigmoid(logit);
}

namespace {

constexpr int32_t kPad = -1;

// token indices into the space vocabulary; |V| stands for the unknown row
std::vector<int32_t> encode_tokens(const SemanticSpace& space, const std::vector<std::string>& tokens,
                                   size_t seq_len) {
    std::vector<int32_t> ids(seq_len, kPad);
    size_t n = std::min(tokens.size(), seq_len);
    for (size_t t = 0; t < n; ++t) {
        auto idx = space.index_of(tokens[t]);
        ids[t] = idx ? static_cast<int32_t>(*idx) : static_cast<int32_t>(space.size());
    }
    return ids;
}

struct EncodedExample {
    std::vector<int32_t> ids;
    uint8_t label = 0;
};

std::vector<EncodedExample> encode_dataset(const SemanticSpace& space, const LabeledDataset& d,
                                           size_t seq_len) {
    std::vector<EncodedExample> out;
    out.reserve(d.size());
    for (const auto& s : d.sentences) {
        EncodedExample e;
        e.ids = encode_tokens(space, s.tokens, seq_len);
        e.label = s.label == Label::Argument ? 1 : 0;
        out.push_back(std::move(e));
    }
    return out;
}

// gathers embedding rows for one example; trainable mode reads the private
// copy, frozen mode reads the space (with the fixed unknown vector)
void gather_inputs(const BiLstmModel& m, const std::vector<int32_t>& ids, std::vector<double>& inputs,
                   std::vector<uint8_t>& mask) {
    const size_t dim = m.net.dim;
    const size_t T = ids.size();
    inputs.assign(T * dim, 0.0);
    mask.assign(T, 0);
    for (size_t t = 0; t < T; ++t) {
        if (ids[t] == kPad) continue;
        mask[t] = 1;
        double* dst = inputs.data() + t * dim;
        size_t row = static_cast<size_t>(ids[t]);
        if (!m.embedding.empty()) {
            const double* src = m.embedding.data() + row * dim;
            std::copy(src, src + dim, dst);
        } else if (row == m.space->size()) {
            std::copy(m.unk.begin(), m.unk.end(), dst);
        } else {
            auto src = m.space->row(row);
            for (size_t e = 0; e < dim; ++e) dst[e] = static_cast<double>(src[e]);
        }
    }
}

struct Adam {
    std::vector<double> m, v;
    double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;

    void init(size_t n) {
        m.assign(n, 0.0);
        v.assign(n, 0.0);
    }

    void step(std::vector<double>& param, const std::vector<double>& grad, double lr, uint64_t t) {
        double c1 = 1.0 - std::pow(beta1, static_cast<double>(t));
        double c2 = 1.0 - std::pow(beta2, static_cast<double>(t));
        for (size_t i = 0; i < param.size(); ++i) {
            m[i] = beta1 * m[i] + (1.0 - beta1) * grad[i];
            v[i] = beta2 * v[i] + (1.0 - beta2) * grad[i] * grad[i];
            param[i] -= lr * (m[i] / c1) / (std::sqrt(v[i] / c2) + eps);
        }
    }

    // lazy variant for embedding rows touched in this batch
    void step_rows(std::vector<double>& param, const std::vector<double>& grad,
                   const std::vector<size_t>& rows, size_t dim, double lr, uint64_t t) {
        double c1 = 1.0 - std::pow(beta1, static_cast<double>(t));
        double c2 = 1.0 - std::pow(beta2, static_cast<double>(t));
        for (size_t r : rows) {
            for (size_t e = r * dim; e < (r + 1) * dim; ++e) {
                m[e] = beta1 * m[e] + (1.0 - beta1) * grad[e];
                v[e] = beta2 * v[e] + (1.0 - beta2) * grad[e] * grad[e];
                param[e] -= lr * (m[e] / c1) / (std::sqrt(v[e] / c2) + eps);
            }
        }
    }
};

void init_dir(LstmDir& d, size_t dim, size_t hidden, Rng& rng) {
    const size_t g4 = 4 * hidden;
    d.w_x.resize(dim * g4);
    d.w_h.resize(hidden * g4);
    d.b.assign(g4, 0.0);
    double bx = 1.0 / std::sqrt(static_cast<double>(dim));
    for (auto& w : d.w_x) w = rng.uniform(-bx, bx);
    double bh = 1.0 / std::sqrt(static_cast<double>(hidden));
    for (auto& w : d.w_h) w = rng.uniform(-bh, bh);
    for (size_t j = hidden; j < 2 * hidden; ++j) d.b[j] = 1.0;  // forget gate bias
}

void add_dir(LstmDir& acc, const BiLstmGrads& g, bool fwd) {
    const LstmDir& src = fwd ? g.fwd : g.bwd;
    for (size_t i = 0; i < acc.w_x.size(); ++i) acc.w_x[i] += src.w_x[i];
    for (size_t i = 0; i < acc.w_h.size(); ++i) acc.w_h[i] += src.w_h[i];
    for (size_t i = 0; i < acc.b.size(); ++i) acc.b[i] += src.b[i];
}

double macro_f1(const std::vector<Label>& pred, const std::vector<Label>& gold) {
    return evaluate(pred, gold).f1.mean;
}

}  // namespace

double BiLstmModel::predict_prob(const std::vector<std::string>& tokens) const {
    auto ids = encode_tokens(*space, tokens, static_cast<size_t>(cfg.seq_len));
    std::vector<double> inputs;
    std::vector<uint8_t> mask;
    gather_inputs(*this, ids, inputs, mask);
    return bilstm_predict_prob(net, inputs, mask);
}

std::vector<Label> BiLstmModel::predict(const LabeledDataset& d) const {
    std::vector<Label> out;
    out.reserve(d.size());
    for (const auto& s : d.sentences)
        out.push_back(predict_prob(s.tokens) >= 0.5 ? Label::Argument : Label::NonArgument);
    return out;
}

std::pair<BiLstmModel, EvalReport> train_bilstm(const SplitSet& splits, const SemanticSpace& space,
                                                const ClassifierConfig& cfg, BiLstmTrainLog* log) {
    if (cfg.seq_len < 1 || cfg.lstm_units < 1 || cfg.batch_size < 1 || cfg.epochs < 1)
        throw std::runtime_error("train_bilstm: invalid config: " + cfg.describe());
    if (cfg.dropout_keep <= 0.0 || cfg.dropout_keep > 1.0)
        throw std::runtime_error("train_bilstm: dropout_keep must be in (0,1]");
    if (splits.train.sentences.empty()) throw std::runtime_error("train_bilstm: empty train split");

    const size_t dim = space.dim();
    const size_t H = static_cast<size_t>(cfg.lstm_units);

    BiLstmModel model;
    model.cfg = cfg;
    model.space = &space;
    model.unk = [&] {
        auto u = unknown_vector(dim);
        return std::vector<double>(u.begin(), u.end());
    }();
    model.net.dim = dim;
    model.net.hidden = H;
    {
        Rng rng(mix_seed(cfg.seed, 0x626c73746dULL));  // "blstm"
        init_dir(model.net.fwd, dim, H, rng);
        init_dir(model.net.bwd, dim, H, rng);
        model.net.w_out.resize(2 * H);
        double bo = 1.0 / std::sqrt(static_cast<double>(2 * H));
        for (auto& w : model.net.w_out) w = rng.uniform(-bo, bo);
        model.net.b_out = 0.0;
    }
    if (cfg.trainable_embeddings) {
        model.embedding.resize((space.size() + 1) * dim);
        for (size_t r = 0; r < space.size(); ++r) {
            auto src = space.row(r);
            for (size_t e = 0; e < dim; ++e) model.embedding[r * dim + e] = static_cast<double>(src[e]);
        }
        std::copy(model.unk.begin(), model.unk.end(), model.embedding.data() + space.size() * dim);
    }

    auto train_ex = encode_dataset(space, splits.train, static_cast<size_t>(cfg.seq_len));
    auto dev_ex = encode_dataset(space, splits.dev, static_cast<size_t>(cfg.seq_len));

    Adam a_wx_f, a_wh_f, a_b_f, a_wx_b, a_wh_b, a_b_b, a_out, a_bout, a_emb;
    a_wx_f.init(model.net.fwd.w_x.size());
    a_wh_f.init(model.net.fwd.w_h.size());
    a_b_f.init(model.net.fwd.b.size());
    a_wx_b.init(model.net.bwd.w_x.size());
    a_wh_b.init(model.net.bwd.w_h.size());
    a_b_b.init(model.net.bwd.b.size());
    a_out.init(model.net.w_out.size());
    a_bout.init(1);
    if (cfg.trainable_embeddings) a_emb.init(model.embedding.size());

    auto predict_encoded = [&](const std::vector<EncodedExample>& data) {
        std::vector<Label> out;
        out.reserve(data.size());
        std::vector<double> inputs;
        std::vector<uint8_t> mask;
        for (const auto& ex : data) {
            gather_inputs(model, ex.ids, inputs, mask);
            double p = bilstm_predict_prob(model.net, inputs, mask);
            out.push_back(p >= 0.5 ? Label::Argument : Label::NonArgument);
        }
        return out;
    };
    std::vector<Label> dev_gold;
    for (const auto& s : splits.dev.sentences) dev_gold.push_back(s.label);

    std::vector<size_t> order(train_ex.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;

    BiLstmCore best_net = model.net;
    std::vector<double> best_emb = model.embedding;
    double best_dev = -1;
    int best_epoch = -1;
    uint64_t adam_t = 0;

    BiLstmGrads g;
    LstmDir acc_fwd, acc_bwd;
    std::vector<double> acc_out, acc_emb;
    std::vector<double> inputs, drop;
    std::vector<uint8_t> mask;

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        Rng order_rng(mix_seed(cfg.seed, 0x6f72646572ULL, static_cast<uint64_t>(epoch)));
        order_rng.shuffle(order);
        Rng drop_rng(mix_seed(cfg.seed, 0x64726f70ULL, static_cast<uint64_t>(epoch)));
        double epoch_loss = 0;

        for (size_t start = 0; start < order.size(); start += static_cast<size_t>(cfg.batch_size)) {
            size_t end = std::min(order.size(), start + static_cast<size_t>(cfg.batch_size));
            double inv_bs = 1.0 / static_cast<double>(end - start);

            zero_dir(acc_fwd, dim, H);
            zero_dir(acc_bwd, dim, H);
            acc_out.assign(2 * H, 0.0);
            double acc_bout = 0;
            std::vector<size_t> touched_rows;
            if (cfg.trainable_embeddings) acc_emb.assign(model.embedding.size(), 0.0);

            for (size_t bi = start; bi < end; ++bi) {
                const EncodedExample& ex = train_ex[order[bi]];
                gather_inputs(model, ex.ids, inputs, mask);
                drop.assign(2 * H, 1.0);
                if (cfg.dropout_keep < 1.0)
                    for (auto& dm : drop)
                        dm = drop_rng.uniform() < cfg.dropout_keep ? 1.0 / cfg.dropout_keep : 0.0;
                double loss = bilstm_example_loss(model.net, inputs, mask, ex.label, &g, drop);
                if (!std::isfinite(loss))
                    throw std::runtime_error("train_bilstm: NaN loss at epoch " + std::to_string(epoch) +
                                             ", batch " + std::to_string(start / cfg.batch_size));
                epoch_loss += loss;
                add_dir(acc_fwd, g, true);
                add_dir(acc_bwd, g, false);
                for (size_t j = 0; j < 2 * H; ++j) acc_out[j] += g.w_out[j];
                acc_bout += g.b_out;
                if (cfg.trainable_embeddings) {
                    for (size_t t = 0; t < ex.ids.size(); ++t) {
                        if (ex.ids[t] == kPad) continue;
                        size_t row = static_cast<size_t>(ex.ids[t]);
                        for (size_t e = 0; e < dim; ++e)
                            acc_emb[row * dim + e] += g.inputs[t * dim + e];
                        touched_rows.push_back(row);
                    }
                }
            }

            auto scale_dir = [&](LstmDir& d) {
                for (auto& w : d.w_x) w *= inv_bs;
                for (auto& w : d.w_h) w *= inv_bs;
                for (auto& w : d.b) w *= inv_bs;
            };
            scale_dir(acc_fwd);
            scale_dir(acc_bwd);
            for (auto& w : acc_out) w *= inv_bs;
            acc_bout *= inv_bs;

            ++adam_t;
            a_wx_f.step(model.net.fwd.w_x, acc_fwd.w_x, cfg.lr, adam_t);
            a_wh_f.step(model.net.fwd.w_h, acc_fwd.w_h, cfg.lr, adam_t);
            a_b_f.step(model.net.fwd.b, acc_fwd.b, cfg.lr, adam_t);
            a_wx_b.step(model.net.bwd.w_x, acc_bwd.w_x, cfg.lr, adam_t);
            a_wh_b.step(model.net.bwd.w_h, acc_bwd.w_h, cfg.lr, adam_t);
            a_b_b.step(model.net.bwd.b, acc_bwd.b, cfg.lr, adam_t);
            a_out.step(model.net.w_out, acc_out, cfg.lr, adam_t);
            {
                std::vector<double> bvec{model.net.b_out}, gvec{acc_bout};
                a_bout.step(bvec, gvec, cfg.lr, adam_t);
                model.net.b_out = bvec[0];
            }
            if (cfg.trainable_embeddings && !touched_rows.empty()) {
                std::sort(touched_rows.begin(), touched_rows.end());
                touched_rows.erase(std::unique(touched_rows.begin(), touched_rows.end()),
                                   touched_rows.end());
                for (size_t r : touched_rows)
                    for (size_t e = r * dim; e < (r + 1) * dim; ++e) acc_emb[e] *= inv_bs;
                a_emb.step_rows(model.embedding, acc_emb, touched_rows, dim, cfg.lr, adam_t);
            }
        }

        double dev_f1 = dev_ex.empty() ? 0.0 : macro_f1(predict_encoded(dev_ex), dev_gold);
        if (log) {
            log->epoch_train_loss.push_back(epoch_loss / static_cast<double>(train_ex.size()));
            log->epoch_dev_f1.push_back(dev_f1);
        }
        if (dev_f1 > best_dev) {
            best_dev = dev_f1;
            best_epoch = epoch;
            best_net = model.net;
            best_emb = model.embedding;
        }
    }

    if (best_epoch >= 0) {
        model.net = std::move(best_net);
        model.embedding = std::move(best_emb);
    }
    if (log) log->best_epoch = best_epoch;

    std::vector<Label> test_gold;
    for (const auto& s : splits.test.sentences) test_gold.push_back(s.label);
    EvalReport report;
    if (!test_gold.empty()) {
        auto test_ex = encode_dataset(space, splits.test, static_cast<size_t>(cfg.seq_len));
        report = evaluate(predict_encoded(test_ex), test_gold);
    }
    report.mode = cfg.trainable_embeddings ? EvalMode::Trainable : EvalMode::Frozen;
    std::unordered_set<std::string> vocab;
    vocab.reserve(space.size());
    for (const auto& w : space.words()) vocab.insert(w);
    report.oov = oov_rate(splits.test, vocab);
    return {std::move(model), report};
}

namespace {

void write_tensor(std::ofstream& out, const char* name, const std::vector<double>& v) {
    out << name << ' ' << v.size();
    char buf[40];
    for (double x : v) {
        std::snprintf(buf, sizeof(buf), " %a", x);
        out << buf;
    }
    out << '\n';
}

std::vector<double> read_tensor(const std::string& line, const char* name, size_t line_no,
                                const std::string& path) {
    auto fields = split_ws(line);
    if (fields.size() < 2 || fields[0] != name)
        throw std::runtime_error(path + ": line " + std::to_string(line_no) + ": expected tensor '" +
                                 name + "'");
    size_t n = std::strtoull(fields[1].c_str(), nullptr, 10);
    if (fields.size() != n + 2)
        throw std::runtime_error(path + ": line " + std::to_string(line_no) + ": tensor '" + name +
                                 "' arity mismatch");
    std::vector<double> v(n);
    for (size_t i = 0; i < n; ++i) v[i] = std::strtod(fields[i + 2].c_str(), nullptr);
    return v;
}

}  // namespace

void save_bilstm(const BiLstmModel& m, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write checkpoint: " + path);
    out << "argsem-bilstm v1\n";
    out << "config epochs " << m.cfg.epochs << " batch_size " << m.cfg.batch_size << " seq_len "
        << m.cfg.seq_len << " lr " << m.cfg.lr << " dropout_keep " << m.cfg.dropout_keep
        << " lstm_units " << m.cfg.lstm_units << " trainable " << (m.cfg.trainable_embeddings ? 1 : 0)
        << " seed " << m.cfg.seed << '\n';
    out << "shape dim " << m.net.dim << " hidden " << m.net.hidden << " vocab "
        << (m.space ? m.space->size() : 0) << '\n';
    write_tensor(out, "fwd.w_x", m.net.fwd.w_x);
    write_tensor(out, "fwd.w_h", m.net.fwd.w_h);
    write_tensor(out, "fwd.b", m.net.fwd.b);
    write_tensor(out, "bwd.w_x", m.net.bwd.w_x);
    write_tensor(out, "bwd.w_h", m.net.bwd.w_h);
    write_tensor(out, "bwd.b", m.net.bwd.b);
    write_tensor(out, "w_out", m.net.w_out);
    write_tensor(out, "b_out", {m.net.b_out});
    write_tensor(out, "embedding", m.embedding);  // empty in frozen mode
}

BiLstmModel load_bilstm(const std::string& path, const SemanticSpace* space) {
    auto lines = read_lines(path);
    if (lines.size() < 12 || lines[0] != "argsem-bilstm v1")
        throw std::runtime_error(path + ": not an argsem-bilstm v1 checkpoint");
    BiLstmModel m;
    {
        auto f = split_ws(lines[1]);
        if (f.size() != 17 || f[0] != "config")
            throw std::runtime_error(path + ": malformed config line");
        m.cfg.epochs = std::atoi(f[2].c_str());
        m.cfg.batch_size = std::atoi(f[4].c_str());
        m.cfg.seq_len = std::atoi(f[6].c_str());
        m.cfg.lr = std::strtod(f[8].c_str(), nullptr);
        m.cfg.dropout_keep = std::strtod(f[10].c_str(), nullptr);
        m.cfg.lstm_units = std::atoi(f[12].c_str());
        m.cfg.trainable_embeddings = f[14] == "1";
        m.cfg.seed = std::strtoull(f[16].c_str(), nullptr, 10);
    }
    {
        auto f = split_ws(lines[2]);
        if (f.size() != 7 || f[0] != "shape")
            throw std::runtime_error(path + ": malformed shape line");
        m.net.dim = std::strtoull(f[2].c_str(), nullptr, 10);
        m.net.hidden = std::strtoull(f[4].c_str(), nullptr, 10);
        size_t vocab = std::strtoull(f[6].c_str(), nullptr, 10);
        if (!space) throw std::runtime_error(path + ": a semantic space is required to load this model");
        if (space->size() != vocab || space->dim() != m.net.dim)
            throw std::runtime_error(path + ": space shape mismatch (checkpoint " + std::to_string(vocab) +
                                     "x" + std::to_string(m.net.dim) + ")");
    }
    m.space = space;
    {
        auto u = unknown_vector(m.net.dim);
        m.unk.assign(u.begin(), u.end());
    }
    m.net.fwd.w_x = read_tensor(lines[3], "fwd.w_x", 4, path);
    m.net.fwd.w_h = read_tensor(lines[4], "fwd.w_h", 5, path);
    m.net.fwd.b = read_tensor(lines[5], "fwd.b", 6, path);
    m.net.bwd.w_x = read_tensor(lines[6], "bwd.w_x", 7, path);
    m.net.bwd.w_h = read_tensor(lines[7], "bwd.w_h", 8, path);
    m.net.bwd.b = read_tensor(lines[8], "bwd.b", 9, path);
    m.net.w_out = read_tensor(lines[9], "w_out", 10, path);
    m.net.b_out = read_tensor(lines[10], "b_out", 11, path)[0];
    m.embedding = read_tensor(lines[11], "embedding", 12, path);
    return m;
}

}  // namespace argsem
