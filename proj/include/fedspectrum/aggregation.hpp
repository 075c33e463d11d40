#ifndef FEDSPECTRUM_AGGREGATION_HPP
#define FEDSPECTRUM_AGGREGATION_HPP
#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "error.hpp"
#include "learner.hpp"

namespace fedspectrum {

namespace detail {

inline void require_compatible(std::span<const model_params> updates, const char* who) {
    if (updates.empty()) {
        throw parameter_error(std::string(who) + ": no updates to aggregate");
    }
    for (std::size_t i = 1; i < updates.size(); ++i) {
        if (!updates[i].same_shape(updates[0])) {
            throw aggregation_error(std::string(who) + ": update " + std::to_string(i) +
                                    " has a different architecture than update 0");
        }
    }
}

/// Coordinate-major copy: column c holds coordinate c of every update.
inline std::vector<std::vector<double>> flatten_all(std::span<const model_params> updates) {
    std::vector<std::vector<double>> out;
    out.reserve(updates.size());
    for (const auto& u : updates) {
        out.push_back(u.flat());
    }
    return out;
}

}  // namespace detail

/*
 * Weighted elementwise mean. Weights are normalised to sum to one; without
 * weights every update counts equally. Per coordinate the weighted terms are
 * summed in ascending order, which makes the result exactly independent of
 * the order of the (update, weight) pairs.
 */
inline model_params fedavg(std::span<const model_params> updates,
                           std::optional<std::span<const double>> weights = std::nullopt) {
    detail::require_compatible(updates, "fedavg");
    const auto n = updates.size();
    std::vector<double> w(n, 1.0 / static_cast<double>(n));
    if (weights) {
        if (weights->size() != n) {
            throw parameter_error("fedavg: " + std::to_string(weights->size()) + " weights for " +
                                  std::to_string(n) + " updates");
        }
        std::vector<double> sorted(weights->begin(), weights->end());
        std::sort(sorted.begin(), sorted.end());
        double total = 0.0;
        for (double v : sorted) {
            if (!(v > 0.0) || !std::isfinite(v)) {
                throw parameter_error("fedavg: weights must be positive and finite");
            }
            total += v;
        }
        for (std::size_t i = 0; i < n; ++i) {
            w[i] = (*weights)[i] / total;
        }
    }

    const auto flat = detail::flatten_all(updates);
    std::vector<double> out(flat[0].size(), 0.0);
    std::vector<double> terms(n);
    for (std::size_t c = 0; c < out.size(); ++c) {
        // identical inputs must come back bit-identical
        bool same = true;
        for (std::size_t i = 1; i < n && same; ++i) same = flat[i][c] == flat[0][c];
        if (same) {
            out[c] = flat[0][c];
            continue;
        }
        for (std::size_t i = 0; i < n; ++i) {
            terms[i] = w[i] * flat[i][c];
        }
        std::sort(terms.begin(), terms.end());
        double acc = 0.0;
        for (double t : terms) acc += t;
        // rounding can leave the convex hull by an ulp
        double lo = flat[0][c], hi = flat[0][c];
        for (std::size_t i = 1; i < n; ++i) {
            lo = std::min(lo, flat[i][c]);
            hi = std::max(hi, flat[i][c]);
        }
        out[c] = std::clamp(acc, lo, hi);
    }
    model_params m = updates[0];
    m.assign_flat(out);
    return m;
}

enum class aggregation_method { mean, median, trimmed_mean };

inline const char* to_string(aggregation_method m) {
    switch (m) {
        case aggregation_method::mean: return "mean";
        case aggregation_method::median: return "median";
        case aggregation_method::trimmed_mean: return "trimmed_mean";
    }
    return "?";
}

/// Number of values dropped from each tail: ceil(f n), capped so that at
/// least one value survives.
inline std::size_t trim_count(std::size_t n, double trim_fraction) {
    auto k = static_cast<std::size_t>(std::ceil(trim_fraction * static_cast<double>(n)));
    return std::min(k, (n - 1) / 2);
}

/// Coordinate-wise median (mean of the two middle values for even n) or
/// trimmed mean.
inline model_params robust_aggregate(std::span<const model_params> updates, aggregation_method method,
                                     double trim_fraction = 0.0) {
    detail::require_compatible(updates, "robust_aggregate");
    if (method == aggregation_method::trimmed_mean && !(trim_fraction >= 0.0 && trim_fraction < 0.5)) {
        throw parameter_error("robust_aggregate: trim_fraction must be in [0, 0.5)");
    }
    if (method == aggregation_method::mean ||
        (method == aggregation_method::trimmed_mean && trim_count(updates.size(), trim_fraction) == 0)) {
        return fedavg(updates);
    }
    const auto n = updates.size();
    const auto flat = detail::flatten_all(updates);
    std::vector<double> out(flat[0].size());
    std::vector<double> column(n);
    const std::size_t k = method == aggregation_method::trimmed_mean ? trim_count(n, trim_fraction) : 0;

    for (std::size_t c = 0; c < out.size(); ++c) {
        for (std::size_t i = 0; i < n; ++i) column[i] = flat[i][c];
        std::sort(column.begin(), column.end());
        if (method == aggregation_method::median) {
            out[c] = n % 2 == 1 ? column[n / 2] : 0.5 * (column[n / 2 - 1] + column[n / 2]);
        } else {
            double acc = 0.0;
            for (std::size_t i = k; i < n - k; ++i) acc += column[i];
            out[c] = acc / static_cast<double>(n - 2 * k);
        }
    }
    model_params m = updates[0];
    m.assign_flat(out);
    return m;
}

}  // namespace fedspectrum

#endif  // FEDSPECTRUM_AGGREGATION_HPP
