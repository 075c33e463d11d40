#ifndef FEDSPECTRUM_METRICS_HPP
#define FEDSPECTRUM_METRICS_HPP
#pragma once

#include <cstdint>
#include <optional>
#include <span>

#include "grid.hpp"
#include "learner.hpp"
#include "spectrum_env.hpp"

namespace fedspectrum {

struct confusion_counts {
    std::uint64_t tp = 0;  // occupied, detected
    std::uint64_t fn = 0;  // occupied, missed
    std::uint64_t fp = 0;  // free, flagged
    std::uint64_t tn = 0;  // free, not flagged

    std::uint64_t total() const noexcept { return tp + fn + fp + tn; }

    confusion_counts& operator+=(const confusion_counts& o) noexcept {
        tp += o.tp;
        fn += o.fn;
        fp += o.fp;
        tn += o.tn;
        return *this;
    }
    friend bool operator==(const confusion_counts&, const confusion_counts&) = default;
};

/// Detection and false-alarm probabilities. Either is empty (not applicable)
/// when the truth has no occupied / no free RBs.
struct metrics {
    std::optional<double> p_d;
    std::optional<double> p_fa;
    confusion_counts counts;

    static metrics from_counts(const confusion_counts& c) {
        metrics m;
        m.counts = c;
        if (c.tp + c.fn > 0) {
            m.p_d = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
        }
        if (c.fp + c.tn > 0) {
            m.p_fa = static_cast<double>(c.fp) / static_cast<double>(c.fp + c.tn);
        }
        return m;
    }
};

inline confusion_counts count_outcomes(const decision_grid& decisions, const occupancy_pattern& truth) {
    require_same_dims(decisions.dims(), truth.dims(), "compute_pd_pfa");
    confusion_counts c;
    for (std::size_t i = 0; i < truth.mask.size(); ++i) {
        const bool y = truth.mask[i] != 0;
        const bool d = decisions.decision[i] != 0;
        if (y) {
            d ? ++c.tp : ++c.fn;
        } else {
            d ? ++c.fp : ++c.tn;
        }
    }
    return c;
}

inline metrics compute_pd_pfa(const decision_grid& decisions, const occupancy_pattern& truth) {
    return metrics::from_counts(count_outcomes(decisions, truth));
}

/// Pooled variant: counts are summed over all grids before dividing.
inline metrics compute_pd_pfa(std::span<const decision_grid> decisions,
                              std::span<const occupancy_pattern> truths) {
    if (decisions.size() != truths.size()) {
        throw shape_error("compute_pd_pfa: " + std::to_string(decisions.size()) + " decision grids vs " +
                          std::to_string(truths.size()) + " truth grids");
    }
    confusion_counts c;
    for (std::size_t i = 0; i < decisions.size(); ++i) {
        c += count_outcomes(decisions[i], truths[i]);
    }
    return metrics::from_counts(c);
}

/// Mean of the per-grid ratios, skipping grids where a ratio is undefined.
struct averaged_rates {
    std::optional<double> p_d;
    std::optional<double> p_fa;
};

inline averaged_rates average_pd_pfa(std::span<const decision_grid> decisions,
                                     std::span<const occupancy_pattern> truths) {
    if (decisions.size() != truths.size()) {
        throw shape_error("average_pd_pfa: grid count mismatch");
    }
    double pd = 0.0, pfa = 0.0;
    std::size_t npd = 0, npfa = 0;
    for (std::size_t i = 0; i < decisions.size(); ++i) {
        const auto m = compute_pd_pfa(decisions[i], truths[i]);
        if (m.p_d) {
            pd += *m.p_d;
            ++npd;
        }
        if (m.p_fa) {
            pfa += *m.p_fa;
            ++npfa;
        }
    }
    averaged_rates r;
    if (npd > 0) r.p_d = pd / static_cast<double>(npd);
    if (npfa > 0) r.p_fa = pfa / static_cast<double>(npfa);
    return r;
}

}  // namespace fedspectrum

#endif  // FEDSPECTRUM_METRICS_HPP
