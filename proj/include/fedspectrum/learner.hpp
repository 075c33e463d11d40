#ifndef FEDSPECTRUM_LEARNER_HPP
#define FEDSPECTRUM_LEARNER_HPP
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "error.hpp"
#include "grid.hpp"
#include "rng.hpp"
#include "spectrum_env.hpp"

namespace fedspectrum {

// ---------------------------------------------------------------------------
// Model description
// ---------------------------------------------------------------------------

enum class activation { relu };

/// How raw energies are mapped to the network input.
enum class input_transform {
    log_standardize,  // log10(energy), then zero mean / unit variance per grid
    raw,
};

inline const char* to_string(input_transform t) {
    return t == input_transform::raw ? "raw" : "log_standardize";
}

/*
 * A stack of same-padded 2-D convolutions with ReLU, followed by a 1x1
 * convolution head and a per-RB sigmoid. The input is one channel (energy).
 */
struct model_arch {
    std::size_t hidden_layers = 2;
    std::vector<std::size_t> channels_per_layer{4, 4};
    std::size_t kernel_h = 3;
    std::size_t kernel_w = 3;
    activation act = activation::relu;
    input_transform input = input_transform::log_standardize;

    void validate() const {
        if (hidden_layers < 1) {
            throw parameter_error("model_arch: hidden_layers must be >= 1");
        }
        if (channels_per_layer.size() != hidden_layers) {
            throw parameter_error("model_arch: channels_per_layer has " +
                                  std::to_string(channels_per_layer.size()) + " entries, expected " +
                                  std::to_string(hidden_layers));
        }
        for (auto c : channels_per_layer) {
            if (c < 1) {
                throw parameter_error("model_arch: every layer needs >= 1 channel");
            }
        }
        if (kernel_h % 2 == 0 || kernel_w % 2 == 0) {
            throw parameter_error("model_arch: kernel dims must be odd, got " +
                                  std::to_string(kernel_h) + "x" + std::to_string(kernel_w));
        }
    }

    friend bool operator==(const model_arch&, const model_arch&) = default;
};

/// One convolution: weights laid out [out][in][kh][kw].
struct layer_params {
    std::size_t out_ch = 0;
    std::size_t in_ch = 0;
    std::size_t kh = 1;
    std::size_t kw = 1;
    std::vector<double> weights;
    std::vector<double> biases;

    std::size_t weight_count() const noexcept { return out_ch * in_ch * kh * kw; }
    double& w(std::size_t o, std::size_t i, std::size_t y, std::size_t x) noexcept {
        return weights[((o * in_ch + i) * kh + y) * kw + x];
    }
    double w(std::size_t o, std::size_t i, std::size_t y, std::size_t x) const noexcept {
        return weights[((o * in_ch + i) * kh + y) * kw + x];
    }

    friend bool operator==(const layer_params&, const layer_params&) = default;
};

struct model_params {
    model_arch arch;
    std::vector<layer_params> layers;  // hidden layers, then the 1x1 head

    std::size_t parameter_count() const noexcept {
        std::size_t n = 0;
        for (const auto& l : layers) {
            n += l.weights.size() + l.biases.size();
        }
        return n;
    }

    /// Visits every parameter in serialization order (per layer: weights, biases).
    template <typename F>
    void for_each_value(F&& f) {
        for (auto& l : layers) {
            for (auto& v : l.weights) f(v);
            for (auto& v : l.biases) f(v);
        }
    }
    template <typename F>
    void for_each_value(F&& f) const {
        for (const auto& l : layers) {
            for (const auto& v : l.weights) f(v);
            for (const auto& v : l.biases) f(v);
        }
    }

    std::vector<double> flat() const {
        std::vector<double> out;
        out.reserve(parameter_count());
        for_each_value([&](double v) { out.push_back(v); });
        return out;
    }

    void assign_flat(std::span<const double> values) {
        if (values.size() != parameter_count()) {
            throw shape_error("assign_flat: expected " + std::to_string(parameter_count()) +
                              " values, got " + std::to_string(values.size()));
        }
        std::size_t i = 0;
        for_each_value([&](double& v) { v = values[i++]; });
    }

    bool same_shape(const model_params& other) const {
        if (!(arch == other.arch) || layers.size() != other.layers.size()) {
            return false;
        }
        for (std::size_t l = 0; l < layers.size(); ++l) {
            const auto& a = layers[l];
            const auto& b = other.layers[l];
            if (a.out_ch != b.out_ch || a.in_ch != b.in_ch || a.kh != b.kh || a.kw != b.kw ||
                a.weights.size() != b.weights.size() || a.biases.size() != b.biases.size()) {
                return false;
            }
        }
        return true;
    }

    bool all_finite() const {
        bool ok = true;
        for_each_value([&](double v) { ok = ok && std::isfinite(v); });
        return ok;
    }

    friend bool operator==(const model_params&, const model_params&) = default;
};

enum class init_mode { zero, random };

/// Zero-filled parameters with the layer shapes implied by arch.
inline model_params zeros_for(const model_arch& arch) {
    arch.validate();
    model_params m{arch, {}};
    std::size_t in = 1;
    for (std::size_t l = 0; l < arch.hidden_layers; ++l) {
        const auto out = arch.channels_per_layer[l];
        layer_params lp{out, in, arch.kernel_h, arch.kernel_w, {}, {}};
        lp.weights.assign(lp.weight_count(), 0.0);
        lp.biases.assign(out, 0.0);
        m.layers.push_back(std::move(lp));
        in = out;
    }
    layer_params head{1, in, 1, 1, std::vector<double>(in, 0.0), std::vector<double>(1, 0.0)};
    m.layers.push_back(std::move(head));
    return m;
}

inline model_params zeros_like(const model_params& m) {
    model_params z = m;
    z.for_each_value([](double& v) { v = 0.0; });
    return z;
}

/// RANDOM draws weights uniformly from +-sqrt(6 / fan_in) (hidden) and
/// +-sqrt(3 / fan_in) (head); biases start at zero.
inline model_params init_model(const model_arch& arch, init_mode mode, std::uint64_t seed) {
    auto m = zeros_for(arch);
    if (mode == init_mode::zero) {
        return m;
    }
    rng r{derive_seed(seed, {stream::init})};
    for (std::size_t l = 0; l < m.layers.size(); ++l) {
        auto& lp = m.layers[l];
        const double fan_in = static_cast<double>(lp.in_ch * lp.kh * lp.kw);
        const bool head = l + 1 == m.layers.size();
        const double a = std::sqrt((head ? 3.0 : 6.0) / fan_in);
        for (auto& w : lp.weights) {
            w = r.uniform(-a, a);
        }
    }
    return m;
}

// ---------------------------------------------------------------------------
// Per-RB output types
// ---------------------------------------------------------------------------

/// Occupancy probabilities, strictly inside (0, 1).
struct prob_grid {
    real_grid prob;
    grid_dims dims() const noexcept { return prob.dims(); }
};

struct decision_grid {
    binary_grid decision;
    grid_dims dims() const noexcept { return decision.dims(); }
    friend bool operator==(const decision_grid&, const decision_grid&) = default;
};

inline constexpr double logit_clamp = 30.0;

inline double sigmoid(double z) noexcept {
    z = std::clamp(z, -logit_clamp, logit_clamp);
    return 1.0 / (1.0 + std::exp(-z));
}

// ---------------------------------------------------------------------------
// Convolution engine
// ---------------------------------------------------------------------------

namespace detail {

// Fixed 8-lane accumulation: the summation order is set here rather than by
// the optimizer, so results are identical with or without vectorization.
inline double dot(const double* a, const double* b, std::size_t n) noexcept {
    double acc[8] = {0, 0, 0, 0, 0, 0, 0, 0};
    std::size_t x = 0;
    for (; x + 8 <= n; x += 8) {
        for (std::size_t j = 0; j < 8; ++j) {
            acc[j] += a[x + j] * b[x + j];
        }
    }
    for (; x < n; ++x) {
        acc[x % 8] += a[x] * b[x];
    }
    return ((acc[0] + acc[1]) + (acc[2] + acc[3])) + ((acc[4] + acc[5]) + (acc[6] + acc[7]));
}

inline double sum(const double* a, std::size_t n) noexcept {
    double acc[8] = {0, 0, 0, 0, 0, 0, 0, 0};
    std::size_t x = 0;
    for (; x + 8 <= n; x += 8) {
        for (std::size_t j = 0; j < 8; ++j) {
            acc[j] += a[x + j];
        }
    }
    for (; x < n; ++x) {
        acc[x % 8] += a[x];
    }
    return ((acc[0] + acc[1]) + (acc[2] + acc[3])) + ((acc[4] + acc[5]) + (acc[6] + acc[7]));
}

/// Channel-major planes with a zero border of (pad_h, pad_w).
struct padded_planes {
    std::size_t channels = 0, h = 0, w = 0, pad_h = 0, pad_w = 0;
    std::vector<double> data;

    padded_planes() = default;
    padded_planes(std::size_t c, std::size_t h_, std::size_t w_, std::size_t ph, std::size_t pw)
        : channels{c}, h{h_}, w{w_}, pad_h{ph}, pad_w{pw}, data(c * (h_ + 2 * ph) * (w_ + 2 * pw), 0.0) {}

    std::size_t stride() const noexcept { return w + 2 * pad_w; }
    std::size_t plane_size() const noexcept { return (h + 2 * pad_h) * stride(); }
    /// Pointer to padded row py (0 = first border row) of channel c.
    double* prow(std::size_t c, std::size_t py) noexcept { return data.data() + c * plane_size() + py * stride(); }
    const double* prow(std::size_t c, std::size_t py) const noexcept {
        return data.data() + c * plane_size() + py * stride();
    }
    /// Pointer to interior element (y, 0) of channel c.
    double* interior(std::size_t c, std::size_t y) noexcept { return prow(c, y + pad_h) + pad_w; }
    const double* interior(std::size_t c, std::size_t y) const noexcept { return prow(c, y + pad_h) + pad_w; }
};

/// Activations retained by the forward pass for backprop.
struct forward_trace {
    std::vector<padded_planes> acts;  // acts[0] = input, acts[l+1] = relu(layer l)
    std::vector<std::vector<double>> pre;  // pre-activation of each hidden layer, c*h*w
    std::vector<double> logits;            // head output before clamping
};

inline void preprocess(const energy_grid& g, input_transform t, padded_planes& dst) {
    const auto n = g.energy.size();
    for (double e : g.energy) {
        if (!std::isfinite(e)) {
            throw input_error("forward: non-finite input energy");
        }
    }
    std::vector<double> v(n);
    if (t == input_transform::raw) {
        std::copy(g.energy.begin(), g.energy.end(), v.begin());
    } else {
        double mean = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            v[i] = std::log10(std::max(g.energy[i], 1e-12));
            mean += v[i];
        }
        mean /= static_cast<double>(n);
        double var = 0.0;
        for (double x : v) {
            var += (x - mean) * (x - mean);
        }
        var /= static_cast<double>(n);
        const double inv_std = var > 0.0 ? 1.0 / std::sqrt(var) : 1.0;
        for (auto& x : v) {
            x = (x - mean) * inv_std;
        }
    }
    const auto dims = g.dims();
    for (std::size_t y = 0; y < dims.n_freq; ++y) {
        std::copy_n(v.data() + y * dims.n_time, dims.n_time, dst.interior(0, y));
    }
}

inline forward_trace run_forward(const model_params& m, const energy_grid& g) {
    const auto dims = g.dims();
    const std::size_t h = dims.n_freq, w = dims.n_time;
    const std::size_t ph = m.arch.kernel_h / 2, pw = m.arch.kernel_w / 2;
    const std::size_t hidden = m.layers.size() - 1;

    forward_trace tr;
    tr.acts.reserve(hidden + 1);
    tr.acts.emplace_back(1, h, w, ph, pw);
    preprocess(g, m.arch.input, tr.acts[0]);

    std::vector<double> zrow(w);
    for (std::size_t l = 0; l < hidden; ++l) {
        const auto& lp = m.layers[l];
        const auto& in = tr.acts[l];
        padded_planes out(lp.out_ch, h, w, ph, pw);
        std::vector<double> pre(lp.out_ch * h * w);
        for (std::size_t o = 0; o < lp.out_ch; ++o) {
            for (std::size_t y = 0; y < h; ++y) {
                std::fill(zrow.begin(), zrow.end(), lp.biases[o]);
                for (std::size_t i = 0; i < lp.in_ch; ++i) {
                    for (std::size_t dy = 0; dy < lp.kh; ++dy) {
                        const double* src = in.prow(i, y + dy);
                        for (std::size_t dx = 0; dx < lp.kw; ++dx) {
                            const double wt = lp.w(o, i, dy, dx);
                            const double* s = src + dx;
                            for (std::size_t x = 0; x < w; ++x) {
                                zrow[x] += wt * s[x];
                            }
                        }
                    }
                }
                double* prow = pre.data() + (o * h + y) * w;
                double* arow = out.interior(o, y);
                for (std::size_t x = 0; x < w; ++x) {
                    prow[x] = zrow[x];
                    arow[x] = zrow[x] > 0.0 ? zrow[x] : 0.0;
                }
            }
        }
        tr.pre.push_back(std::move(pre));
        tr.acts.push_back(std::move(out));
    }

    const auto& head = m.layers.back();
    const auto& last = tr.acts.back();
    tr.logits.assign(h * w, head.biases[0]);
    for (std::size_t c = 0; c < head.in_ch; ++c) {
        const double wt = head.weights[c];
        for (std::size_t y = 0; y < h; ++y) {
            const double* a = last.interior(c, y);
            double* z = tr.logits.data() + y * w;
            for (std::size_t x = 0; x < w; ++x) {
                z[x] += wt * a[x];
            }
        }
    }
    return tr;
}

/// Per-RB BCE computed from the (clamped) logit.
inline double bce_from_logit(double z, double y) noexcept {
    z = std::clamp(z, -logit_clamp, logit_clamp);
    return std::max(z, 0.0) - y * z + std::log1p(std::exp(-std::abs(z)));
}

/*
 * Accumulates into grad the gradient of scale * sum_RB bce over one example,
 * and returns sum_RB bce.
 */
inline double accumulate_gradient(const model_params& m, const labeled_example& ex, double scale,
                                  model_params& grad) {
    const auto dims = ex.input.dims();
    const std::size_t h = dims.n_freq, w = dims.n_time, n = h * w;
    const auto tr = run_forward(m, ex.input);
    const std::size_t hidden = m.layers.size() - 1;

    double loss = 0.0;
    std::vector<double> dz(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double z = tr.logits[i];
        const double y = ex.label.mask[i] ? 1.0 : 0.0;
        loss += bce_from_logit(z, y);
        dz[i] = std::abs(z) > logit_clamp ? 0.0 : scale * (sigmoid(z) - y);
    }

    // Head.
    auto& gh = grad.layers.back();
    const auto& head = m.layers.back();
    const auto& last = tr.acts.back();
    gh.biases[0] += sum(dz.data(), n);

    const std::size_t ph = last.pad_h, pw = last.pad_w;
    // upstream gradient w.r.t. the current layer's activations (unpadded, c*h*w)
    std::vector<double> da(head.in_ch * n);
    for (std::size_t c = 0; c < head.in_ch; ++c) {
        double gw = 0.0;
        const double wt = head.weights[c];
        for (std::size_t y = 0; y < h; ++y) {
            const double* a = last.interior(c, y);
            const double* d = dz.data() + y * w;
            double* out = da.data() + (c * h + y) * w;
            gw += dot(d, a, w);
            for (std::size_t x = 0; x < w; ++x) {
                out[x] = wt * d[x];
            }
        }
        gh.weights[c] += gw;
    }

    for (std::size_t l = hidden; l-- > 0;) {
        const auto& lp = m.layers[l];
        auto& gl = grad.layers[l];
        const auto& in = tr.acts[l];
        const auto& pre = tr.pre[l];

        // through the ReLU
        for (std::size_t i = 0; i < da.size(); ++i) {
            if (pre[i] <= 0.0) da[i] = 0.0;
        }

        const bool need_input_grad = l > 0;
        padded_planes dprev;
        if (need_input_grad) {
            dprev = padded_planes(lp.in_ch, h, w, ph, pw);
        }

        for (std::size_t o = 0; o < lp.out_ch; ++o) {
            gl.biases[o] += sum(da.data() + o * n, n);

            for (std::size_t i = 0; i < lp.in_ch; ++i) {
                for (std::size_t dy = 0; dy < lp.kh; ++dy) {
                    for (std::size_t dx = 0; dx < lp.kw; ++dx) {
                        const double wt = lp.w(o, i, dy, dx);
                        double gw = 0.0;
                        for (std::size_t y = 0; y < h; ++y) {
                            const double* d = da.data() + (o * h + y) * w;
                            const double* s = in.prow(i, y + dy) + dx;
                            gw += dot(d, s, w);
                            if (need_input_grad) {
                                double* t = dprev.prow(i, y + dy) + dx;
                                for (std::size_t x = 0; x < w; ++x) {
                                    t[x] += wt * d[x];
                                }
                            }
                        }
                        gl.w(o, i, dy, dx) += gw;
                    }
                }
            }
        }

        if (need_input_grad) {
            da.assign(lp.in_ch * n, 0.0);
            for (std::size_t c = 0; c < lp.in_ch; ++c) {
                for (std::size_t y = 0; y < h; ++y) {
                    std::copy_n(dprev.interior(c, y), w, da.data() + (c * h + y) * w);
                }
            }
        }
    }
    return loss;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Inference and loss
// ---------------------------------------------------------------------------

inline prob_grid forward(const model_params& model, const energy_grid& grid) {
    require_valid(grid.dims());
    const auto tr = detail::run_forward(model, grid);
    prob_grid out{real_grid{grid.dims()}};
    for (std::size_t i = 0; i < tr.logits.size(); ++i) {
        out.prob[i] = sigmoid(tr.logits[i]);
    }
    return out;
}

inline constexpr double prob_epsilon = 1e-12;

/// Mean per-RB binary cross-entropy, probabilities clamped to [eps, 1 - eps].
inline double bce_loss(const prob_grid& probs, const occupancy_pattern& label) {
    require_same_dims(probs.dims(), label.dims(), "bce_loss");
    double acc = 0.0;
    for (std::size_t i = 0; i < probs.prob.size(); ++i) {
        const double p = std::clamp(probs.prob[i], prob_epsilon, 1.0 - prob_epsilon);
        acc += label.mask[i] ? -std::log(p) : -std::log1p(-p);
    }
    return acc / static_cast<double>(probs.prob.size());
}

/// Decision = 1 iff probability >= threshold.
inline decision_grid predict(const prob_grid& probs, double threshold) {
    if (!(threshold >= 0.0 && threshold <= 1.0)) {
        throw parameter_error("predict: threshold must be in [0,1]");
    }
    decision_grid out{binary_grid{probs.dims()}};
    for (std::size_t i = 0; i < probs.prob.size(); ++i) {
        out.decision[i] = probs.prob[i] >= threshold ? 1 : 0;
    }
    return out;
}

inline decision_grid predict(const model_params& model, const energy_grid& grid, double threshold) {
    return predict(forward(model, grid), threshold);
}

/// Classical energy detector: occupied iff energy >= lambda.
inline decision_grid energy_detector(const energy_grid& grid, double lambda) {
    if (!(lambda >= 0.0)) {
        throw parameter_error("energy_detector: lambda must be >= 0");
    }
    decision_grid out{binary_grid{grid.dims()}};
    for (std::size_t i = 0; i < grid.energy.size(); ++i) {
        out.decision[i] = grid.energy[i] >= lambda ? 1 : 0;
    }
    return out;
}

/// Empirical q-quantile of the energies of a (noise-only) grid, by the
/// nearest-rank rule.
inline double calibrate_threshold(std::span<const double> energies, double q) {
    if (energies.empty()) {
        throw parameter_error("calibrate_threshold: no samples");
    }
    std::vector<double> v(energies.begin(), energies.end());
    const auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(v.size())));
    const auto k = std::min(v.size() - 1, rank == 0 ? 0 : rank - 1);
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(k), v.end());
    return v[k];
}

// ---------------------------------------------------------------------------
// Training
// ---------------------------------------------------------------------------

struct train_config {
    double learning_rate = 0.05;
    std::size_t local_epochs = 2;
    std::size_t batch_size = 8;
    double decision_threshold = 0.5;

    void validate() const {
        // 0 is accepted here as a no-op step; config files require > 0
        if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate)) {
            throw parameter_error("train.learning_rate must be >= 0");
        }
        if (local_epochs < 1) {
            throw parameter_error("train.local_epochs must be >= 1");
        }
        if (batch_size < 1) {
            throw parameter_error("train.batch_size must be >= 1");
        }
        if (!(decision_threshold >= 0.0 && decision_threshold <= 1.0)) {
            throw parameter_error("train.decision_threshold must be in [0,1]");
        }
    }
};

struct loss_and_grad {
    double loss = 0.0;  // mean per-RB BCE over the batch
    model_params grad;
};

inline loss_and_grad batch_gradient(const model_params& model,
                                    std::span<const labeled_example* const> batch) {
    if (batch.empty()) {
        throw parameter_error("batch_gradient: empty batch");
    }
    std::size_t total = 0;
    for (const auto* ex : batch) {
        require_same_dims(ex->input.dims(), ex->label.dims(), "batch_gradient");
        total += ex->label.mask.size();
    }
    loss_and_grad out{0.0, zeros_like(model)};
    const double scale = 1.0 / static_cast<double>(total);
    for (const auto* ex : batch) {
        out.loss += detail::accumulate_gradient(model, *ex, scale, out.grad);
    }
    out.loss *= scale;
    return out;
}

inline loss_and_grad batch_gradient(const model_params& model, std::span<const labeled_example> batch) {
    std::vector<const labeled_example*> ptrs;
    ptrs.reserve(batch.size());
    for (const auto& ex : batch) ptrs.push_back(&ex);
    return batch_gradient(model, std::span<const labeled_example* const>{ptrs});
}

/// Mean per-RB BCE of the model over a batch (logit form, as in training).
inline double batch_loss(const model_params& model, std::span<const labeled_example> batch) {
    double acc = 0.0;
    std::size_t total = 0;
    for (const auto& ex : batch) {
        const auto tr = detail::run_forward(model, ex.input);
        for (std::size_t i = 0; i < tr.logits.size(); ++i) {
            acc += detail::bce_from_logit(tr.logits[i], ex.label.mask[i] ? 1.0 : 0.0);
        }
        total += tr.logits.size();
    }
    return acc / static_cast<double>(total);
}

inline model_params apply_step(const model_params& model, const loss_and_grad& lg, double lr) {
    if (!std::isfinite(lg.loss)) {
        throw numeric_error("train_step: non-finite loss (" + std::to_string(lg.loss) + ")");
    }
    model_params next = model;
    auto g = lg.grad.flat();
    std::size_t i = 0;
    bool finite = true;
    next.for_each_value([&](double& v) {
        v -= lr * g[i++];
        finite = finite && std::isfinite(v);
    });
    if (!finite) {
        throw numeric_error("train_step: parameters became non-finite at loss " +
                            std::to_string(lg.loss) + ", learning rate " + std::to_string(lr));
    }
    return next;
}

/// One SGD step on the mean batch loss.
inline model_params train_step(const model_params& model, std::span<const labeled_example> batch, double lr) {
    if (batch.empty()) {
        throw parameter_error("train_step: empty batch");
    }
    return apply_step(model, batch_gradient(model, batch), lr);
}

/// local_epochs passes of shuffled mini-batch SGD; shuffle order from seed.
inline model_params train_local(const model_params& model, const dataset& data, const train_config& cfg,
                                std::uint64_t seed) {
    if (data.empty()) {
        throw parameter_error("train_local: empty dataset");
    }
    cfg.validate();
    model_params current = model;
    std::vector<const labeled_example*> order;
    order.reserve(data.size());
    for (const auto& ex : data.examples) order.push_back(&ex);

    for (std::size_t epoch = 0; epoch < cfg.local_epochs; ++epoch) {
        rng r{derive_seed(seed, {stream::shuffle, epoch})};
        r.shuffle(std::span<const labeled_example*>{order});
        for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
            const auto len = std::min(cfg.batch_size, order.size() - start);
            std::span<const labeled_example* const> batch{order.data() + start, len};
            current = apply_step(current, batch_gradient(current, batch), cfg.learning_rate);
        }
    }
    return current;
}

}  // namespace fedspectrum

#endif  // FEDSPECTRUM_LEARNER_HPP
