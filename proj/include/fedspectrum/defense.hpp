#ifndef FEDSPECTRUM_DEFENSE_HPP
#define FEDSPECTRUM_DEFENSE_HPP
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "aggregation.hpp"
#include "error.hpp"
#include "learner.hpp"
#include "rng.hpp"
#include "spectrum_env.hpp"

namespace fedspectrum {

using node_id = std::uint32_t;

enum class peer_reduction { mean, min };

enum class dp_target { energy, model };

struct defense_config {
    bool enabled = true;
    double accordance_threshold_pct = 65.0;
    std::size_t validation_patterns = 50;
    aggregation_method aggregation = aggregation_method::mean;
    double trim_fraction = 0.1;
    double dp_sigma = 0.0;
    dp_target dp_on = dp_target::energy;
    peer_reduction peers = peer_reduction::mean;
    bool include_global_reference = false;

    void validate() const {
        if (!(accordance_threshold_pct >= 0.0 && accordance_threshold_pct <= 100.0)) {
            throw parameter_error("defense.accordance_threshold_pct must be in [0,100]");
        }
        if (!(trim_fraction >= 0.0 && trim_fraction < 0.5)) {
            throw parameter_error("defense.trim_fraction must be in [0, 0.5)");
        }
        if (!(dp_sigma >= 0.0)) {
            throw parameter_error("defense.dp_sigma must be >= 0");
        }
    }
};

// ---------------------------------------------------------------------------
// Decision-accordance filtering
// ---------------------------------------------------------------------------

/// Fraction of RB positions, pooled over all grids, where a and b agree.
inline double decision_accordance(std::span<const decision_grid> a, std::span<const decision_grid> b) {
    if (a.size() != b.size()) {
        throw shape_error("decision_accordance: " + std::to_string(a.size()) + " vs " +
                          std::to_string(b.size()) + " grids");
    }
    std::uint64_t agree = 0;
    std::uint64_t total = 0;
    for (std::size_t g = 0; g < a.size(); ++g) {
        require_same_dims(a[g].dims(), b[g].dims(), "decision_accordance");
        const auto& x = a[g].decision;
        const auto& y = b[g].decision;
        for (std::size_t i = 0; i < x.size(); ++i) {
            agree += x[i] == y[i] ? 1u : 0u;
        }
        total += x.size();
    }
    if (total == 0) {
        throw shape_error("decision_accordance: no RBs to compare");
    }
    return static_cast<double>(agree) / static_cast<double>(total);
}

struct filter_report {
    std::vector<node_id> submitted;
    std::vector<std::vector<double>> accordance;  // symmetric, unit diagonal
    std::vector<double> mean_accordance;          // per submitted model, over its peers
    std::vector<node_id> accepted;
    std::vector<node_id> rejected;
};

struct filter_options {
    peer_reduction peers = peer_reduction::mean;
    /// Previous global model, counted as one more peer when set. It is
    /// scored against but never itself accepted or rejected.
    const model_params* global_reference = nullptr;
};

struct filter_result {
    std::vector<std::pair<node_id, model_params>> accepted;
    filter_report report;
};

/*
 * Every submitted model labels the server's validation energies. Model i is
 * kept iff its accordance with its peers (mean over peers by default) reaches
 * threshold_pct / 100. The validation labels are never read.
 */
inline filter_result accordance_filter(std::span<const std::pair<node_id, model_params>> updates,
                                       const dataset& validation, double threshold_pct,
                                       double decision_threshold, const filter_options& opts = {}) {
    if (validation.empty()) {
        throw config_error("accordance_filter: server validation dataset is empty");
    }
    if (!(threshold_pct >= 0.0 && threshold_pct <= 100.0)) {
        throw parameter_error("accordance_filter: threshold_pct must be in [0,100]");
    }
    const std::size_t n = updates.size();
    filter_result out;
    auto& rep = out.report;
    for (const auto& [id, _] : updates) rep.submitted.push_back(id);
    rep.accordance.assign(n, std::vector<double>(n, 0.0));
    rep.mean_accordance.assign(n, 1.0);
    for (std::size_t i = 0; i < n; ++i) rep.accordance[i][i] = 1.0;

    if (n <= 1 && opts.global_reference == nullptr) {
        for (const auto& u : updates) {
            rep.accepted.push_back(u.first);
            out.accepted.push_back(u);
        }
        return out;
    }

    auto decide = [&](const model_params& m) {
        std::vector<decision_grid> d;
        d.reserve(validation.size());
        for (const auto& ex : validation.examples) {
            d.push_back(predict(m, ex.input, decision_threshold));
        }
        return d;
    };
    std::vector<std::vector<decision_grid>> decisions;
    decisions.reserve(n);
    for (const auto& u : updates) decisions.push_back(decide(u.second));

    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double a = decision_accordance(decisions[i], decisions[j]);
            rep.accordance[i][j] = a;
            rep.accordance[j][i] = a;
        }
    }
    std::vector<double> ref_acc;
    if (opts.global_reference != nullptr) {
        const auto ref = decide(*opts.global_reference);
        for (std::size_t i = 0; i < n; ++i) ref_acc.push_back(decision_accordance(decisions[i], ref));
    }

    const double cut = threshold_pct / 100.0;
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> peer;
        for (std::size_t j = 0; j < n; ++j) {
            if (j != i) peer.push_back(rep.accordance[i][j]);
        }
        if (!ref_acc.empty()) peer.push_back(ref_acc[i]);
        double score = 1.0;
        if (!peer.empty()) {
            if (opts.peers == peer_reduction::min) {
                score = *std::min_element(peer.begin(), peer.end());
            } else {
                double s = 0.0;
                for (double v : peer) s += v;
                score = s / static_cast<double>(peer.size());
            }
        }
        rep.mean_accordance[i] = score;
        if (score >= cut) {
            rep.accepted.push_back(updates[i].first);
            out.accepted.push_back(updates[i]);
        } else {
            rep.rejected.push_back(updates[i].first);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Micro-model data cleaning
// ---------------------------------------------------------------------------

struct cleaning_result {
    dataset cleaned;
    std::vector<std::size_t> removed;  // indices into the input dataset, ascending
};

/// Fold f holds examples [f n / k, (f + 1) n / k).
inline std::size_t fold_of(std::size_t index, std::size_t n, std::size_t k) {
    return (index * k) / n;
}

/*
 * Splits the dataset into k contiguous folds and trains one micro-model per
 * fold. Every example is checked against the k - 1 micro-models that did not
 * see it: an RB counts as contradicted when a strict majority of them votes
 * against its label. Examples with more than disagreement_fraction of their
 * RBs contradicted are dropped. k = 1 removes nothing.
 */
inline cleaning_result micro_model_clean(const dataset& data, std::size_t k_folds, const model_arch& arch,
                                         const train_config& cfg, std::uint64_t seed,
                                         double disagreement_fraction = 0.3) {
    if (k_folds < 1) {
        throw parameter_error("micro_model_clean: k_folds must be >= 1");
    }
    if (k_folds > data.size()) {
        throw parameter_error("micro_model_clean: k_folds (" + std::to_string(k_folds) +
                              ") exceeds dataset size (" + std::to_string(data.size()) + ")");
    }
    if (k_folds == 1) {
        return {data, {}};
    }
    const auto n = data.size();
    std::vector<model_params> micro;
    micro.reserve(k_folds);
    for (std::size_t f = 0; f < k_folds; ++f) {
        dataset fold;
        for (std::size_t i = 0; i < n; ++i) {
            if (fold_of(i, n, k_folds) == f) fold.examples.push_back(data.examples[i]);
        }
        const auto fold_seed = derive_seed(seed, {stream::fold, f});
        micro.push_back(train_local(init_model(arch, init_mode::random, fold_seed), fold, cfg, fold_seed));
    }

    cleaning_result out;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& ex = data.examples[i];
        const auto own = fold_of(i, n, k_folds);
        std::vector<std::uint32_t> against(ex.label.mask.size(), 0);
        for (std::size_t f = 0; f < k_folds; ++f) {
            if (f == own) continue;
            const auto d = predict(micro[f], ex.input, cfg.decision_threshold);
            for (std::size_t r = 0; r < against.size(); ++r) {
                against[r] += d.decision[r] != ex.label.mask[r] ? 1u : 0u;
            }
        }
        const std::size_t voters = k_folds - 1;
        std::size_t contradicted = 0;
        for (auto c : against) {
            if (2 * static_cast<std::size_t>(c) > voters) ++contradicted;
        }
        const double frac = static_cast<double>(contradicted) / static_cast<double>(against.size());
        if (frac > disagreement_fraction) {
            out.removed.push_back(i);
        } else {
            out.cleaned.examples.push_back(ex);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Differential-privacy style noise
// ---------------------------------------------------------------------------

inline model_params dp_noise(const model_params& target, double sigma, std::uint64_t seed) {
    if (!(sigma >= 0.0)) {
        throw parameter_error("dp_noise: sigma must be >= 0");
    }
    model_params out = target;
    if (sigma == 0.0) return out;
    rng r{derive_seed(seed, {stream::noise})};
    out.for_each_value([&](double& v) { v += sigma * r.normal(); });
    return out;
}

/// Noisy energies are clamped at zero.
inline energy_grid dp_noise(const energy_grid& target, double sigma, std::uint64_t seed) {
    if (!(sigma >= 0.0)) {
        throw parameter_error("dp_noise: sigma must be >= 0");
    }
    energy_grid out = target;
    if (sigma == 0.0) return out;
    rng r{derive_seed(seed, {stream::noise})};
    for (auto& e : out.energy) {
        e = std::max(0.0, e + sigma * r.normal());
    }
    return out;
}

}  // namespace fedspectrum

#endif  // FEDSPECTRUM_DEFENSE_HPP
