// Reference implementations used only by the tests. They are written for
// clarity rather than speed and share no code with the library internals.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include <fedspectrum/fedspectrum.hpp>

namespace oracle {

using namespace fedspectrum;

/// Shape formula: in*out*kh*kw + out per hidden layer, then the 1x1 head.
inline std::size_t parameter_count(const model_arch& a) {
    std::size_t n = 0, in = 1;
    for (std::size_t l = 0; l < a.hidden_layers; ++l) {
        const auto out = a.channels_per_layer[l];
        n += in * out * a.kernel_h * a.kernel_w + out;
        in = out;
    }
    return n + in + 1;
}

/// Straightforward same-padded convolution stack; returns per-RB probabilities.
inline std::vector<double> probabilities(const model_params& m, const energy_grid& g) {
    const std::size_t H = g.dims().n_freq, W = g.dims().n_time;
    std::vector<double> x(H * W);
    if (m.arch.input == input_transform::raw) {
        for (std::size_t i = 0; i < x.size(); ++i) x[i] = g.energy[i];
    } else {
        double mu = 0;
        for (std::size_t i = 0; i < x.size(); ++i) mu += (x[i] = std::log10(std::max(g.energy[i], 1e-12)));
        mu /= static_cast<double>(x.size());
        double var = 0;
        for (double v : x) var += (v - mu) * (v - mu);
        var /= static_cast<double>(x.size());
        const double sd = var > 0 ? std::sqrt(var) : 1.0;
        for (auto& v : x) v = (v - mu) / sd;
    }
    std::vector<std::vector<double>> act{x};  // act[c][y*W+x]
    for (std::size_t li = 0; li < m.layers.size(); ++li) {
        const auto& L = m.layers[li];
        const bool head = li + 1 == m.layers.size();
        const long ph = static_cast<long>(L.kh / 2), pw = static_cast<long>(L.kw / 2);
        std::vector<std::vector<double>> next(L.out_ch, std::vector<double>(H * W));
        for (std::size_t o = 0; o < L.out_ch; ++o) {
            for (long y = 0; y < static_cast<long>(H); ++y) {
                for (long xx = 0; xx < static_cast<long>(W); ++xx) {
                    double s = L.biases[o];
                    for (std::size_t i = 0; i < L.in_ch; ++i) {
                        for (long ky = 0; ky < static_cast<long>(L.kh); ++ky) {
                            for (long kx = 0; kx < static_cast<long>(L.kw); ++kx) {
                                const long yy = y + ky - ph, xk = xx + kx - pw;
                                if (yy < 0 || xk < 0 || yy >= static_cast<long>(H) || xk >= static_cast<long>(W))
                                    continue;
                                s += L.w(o, i, static_cast<std::size_t>(ky), static_cast<std::size_t>(kx)) *
                                     act[i][static_cast<std::size_t>(yy) * W + static_cast<std::size_t>(xk)];
                            }
                        }
                    }
                    next[o][static_cast<std::size_t>(y) * W + static_cast<std::size_t>(xx)] =
                        head ? s : std::max(0.0, s);
                }
            }
        }
        act = std::move(next);
    }
    std::vector<double> p(H * W);
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double z = std::clamp(act[0][i], -30.0, 30.0);
        p[i] = 1.0 / (1.0 + std::exp(-z));
    }
    return p;
}

/// Mean per-RB binary cross-entropy over a batch, from the oracle forward.
inline double mean_bce(const model_params& m, std::span<const labeled_example> batch) {
    double acc = 0;
    std::size_t n = 0;
    for (const auto& ex : batch) {
        const auto p = probabilities(m, ex.input);
        for (std::size_t i = 0; i < p.size(); ++i) {
            acc += ex.label.mask[i] ? -std::log(p[i]) : -std::log(1.0 - p[i]);
        }
        n += p.size();
    }
    return acc / static_cast<double>(n);
}

struct gradient_check {
    std::size_t checked = 0;
    std::size_t failures = 0;
    double worst_relative = 0.0;
};

/*
 * Central differences of the library's batch loss against its analytic
 * gradient. Step is relative to the parameter magnitude. A coordinate passes
 * when the relative error is <= rel_tol, or, for gradients below 1e-8 in
 * magnitude, the absolute error is <= abs_tol.
 */
inline gradient_check check_gradient(const model_params& m, std::span<const labeled_example> batch,
                                     double rel_tol = 1e-4, double abs_tol = 1e-7) {
    gradient_check out;
    const auto analytic = batch_gradient(m, batch).grad.flat();
    auto theta = m.flat();
    model_params probe = m;
    for (std::size_t k = 0; k < theta.size(); ++k) {
        const double orig = theta[k];
        const double h = 1e-5 * std::max(1.0, std::abs(orig));
        theta[k] = orig + h;
        probe.assign_flat(theta);
        const double up = batch_loss(probe, batch);
        theta[k] = orig - h;
        probe.assign_flat(theta);
        const double down = batch_loss(probe, batch);
        theta[k] = orig;
        const double fd = (up - down) / (2.0 * h);
        const double g = analytic[k];
        const double err = std::abs(g - fd);
        const double mag = std::max(std::abs(g), std::abs(fd));
        bool ok;
        if (mag < 1e-8) {
            ok = err <= abs_tol;
        } else {
            const double rel = err / mag;
            out.worst_relative = std::max(out.worst_relative, rel);
            ok = rel <= rel_tol;
        }
        ++out.checked;
        if (!ok) ++out.failures;
    }
    return out;
}

/// Elementwise median of a coordinate set.
inline double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const auto n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace oracle
