#ifndef FEDSPECTRUM_SPECTRUM_ENV_HPP
#define FEDSPECTRUM_SPECTRUM_ENV_HPP
#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "error.hpp"
#include "grid.hpp"
#include "rng.hpp"

namespace fedspectrum {

// ---------------------------------------------------------------------------
// Ground-truth primary-user occupancy
// ---------------------------------------------------------------------------

/// Binary PU-activity mask over the RB grid (1 = occupied).
struct occupancy_pattern {
    binary_grid mask;

    grid_dims dims() const noexcept { return mask.dims(); }
    friend bool operator==(const occupancy_pattern&, const occupancy_pattern&) = default;
};

struct traffic_params {
    double duty_target = 0.3;       // long-run fraction of occupied RBs
    double persist_time = 0.9;      // P(allocation survives to the next time RB)
    double block_height_mean = 4.0; // mean contiguous frequency span, in RBs

    void validate() const {
        if (!(duty_target >= 0.0 && duty_target <= 1.0)) {
            throw parameter_error("traffic.duty_target must be in [0,1], got " +
                                  std::to_string(duty_target));
        }
        if (!(persist_time >= 0.0 && persist_time <= 1.0)) {
            throw parameter_error("traffic.persist_time must be in [0,1], got " +
                                  std::to_string(persist_time));
        }
        if (!(block_height_mean >= 1.0) || !std::isfinite(block_height_mean)) {
            throw parameter_error("traffic.block_height_mean must be >= 1, got " +
                                  std::to_string(block_height_mean));
        }
    }
};

/// Per-time-RB transition probabilities of one band's on/off chain.
struct band_chain_rates {
    double birth = 0.0;  // P(off -> on)
    double death = 0.0;  // P(on -> off)
};

/*
 * The chain is parameterised so that its stationary occupancy
 * birth / (birth + death) equals duty_target. death = 1 - persist_time unless
 * that would require birth > 1; then birth saturates at 1 and death is lowered
 * to (1 - duty) / duty, i.e. allocations persist longer than requested.
 */
inline band_chain_rates chain_rates(const traffic_params& p) {
    band_chain_rates r;
    if (p.duty_target <= 0.0) {
        return r;
    }
    if (p.duty_target >= 1.0) {
        r.birth = 1.0;
        return r;
    }
    r.death = 1.0 - p.persist_time;
    r.birth = p.duty_target * r.death / (1.0 - p.duty_target);
    if (r.birth > 1.0) {
        r.birth = 1.0;
        r.death = (1.0 - p.duty_target) / p.duty_target;
    }
    return r;
}

/*
 * Frequency axis is cut into bands with geometric heights (mean
 * block_height_mean); every band runs an independent two-state Markov chain
 * along time, started from its stationary distribution. Occupied RBs thus form
 * contiguous frequency blocks that persist over time.
 */
inline occupancy_pattern gen_occupancy(const traffic_params& traffic, grid_dims dims,
                                       std::uint64_t seed) {
    traffic.validate();
    require_valid(dims);

    occupancy_pattern out{binary_grid{dims, 0}};
    const auto rates = chain_rates(traffic);
    const double height_p = 1.0 / traffic.block_height_mean;
    rng r{derive_seed(seed, {stream::traffic})};

    std::size_t f0 = 0;
    while (f0 < dims.n_freq) {
        const std::size_t height = 1 + static_cast<std::size_t>(r.geometric(height_p));
        const std::size_t f1 = std::min(dims.n_freq, f0 + height);
        bool on = r.bernoulli(traffic.duty_target);
        for (std::size_t t = 0; t < dims.n_time; ++t) {
            if (t > 0) {
                on = on ? !r.bernoulli(rates.death) : r.bernoulli(rates.birth);
            }
            if (on) {
                for (std::size_t f = f0; f < f1; ++f) {
                    out.mask(f, t) = 1;
                }
            }
        }
        f0 = f1;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Fading channel
// ---------------------------------------------------------------------------

enum class channel_kind { flat, epa, eva };

inline const char* to_string(channel_kind k) {
    switch (k) {
        case channel_kind::flat: return "flat";
        case channel_kind::epa: return "epa";
        case channel_kind::eva: return "eva";
    }
    return "?";
}

struct tap {
    double delay_ns;
    double power_db;
};

/// 3GPP TS 36.101 Annex B extended pedestrian A.
inline constexpr std::array<tap, 7> epa_taps{{
    {0, 0.0}, {30, -1.0}, {70, -2.0}, {90, -3.0}, {110, -8.0}, {190, -17.2}, {410, -20.8},
}};

/// 3GPP TS 36.101 Annex B extended vehicular A.
inline constexpr std::array<tap, 9> eva_taps{{
    {0, 0.0}, {30, -1.5}, {150, -1.4}, {310, -3.6}, {370, -0.6},
    {710, -9.1}, {1090, -7.0}, {1730, -12.0}, {2510, -16.9},
}};

template <std::size_t N>
double rms_delay_spread_s(const std::array<tap, N>& taps) {
    double p_sum = 0.0;
    double m1 = 0.0;
    double m2 = 0.0;
    for (const auto& t : taps) {
        const double p = std::pow(10.0, t.power_db / 10.0);
        const double tau = t.delay_ns * 1e-9;
        p_sum += p;
        m1 += p * tau;
        m2 += p * tau * tau;
    }
    m1 /= p_sum;
    m2 /= p_sum;
    return std::sqrt(m2 - m1 * m1);
}

inline double rms_delay_spread_s(channel_kind k) {
    switch (k) {
        case channel_kind::flat: return 0.0;
        case channel_kind::epa: return rms_delay_spread_s(epa_taps);
        case channel_kind::eva: return rms_delay_spread_s(eva_taps);
    }
    return 0.0;
}

struct channel_profile {
    channel_kind kind = channel_kind::eva;
    double doppler_hz = 30.0;
    double rb_bandwidth_hz = 180e3;
    double rb_duration_s = 1e-3;

    void validate() const {
        if (!(doppler_hz >= 0.0) || !std::isfinite(doppler_hz)) {
            throw parameter_error("channel.doppler_hz must be >= 0, got " + std::to_string(doppler_hz));
        }
        if (!(rb_bandwidth_hz > 0.0) || !(rb_duration_s > 0.0)) {
            throw parameter_error("channel RB bandwidth and duration must be positive");
        }
    }

    /// Coherence bandwidth 1 / (2 pi tau_rms); infinite for the flat profile.
    double coherence_bandwidth_hz() const {
        const double tau = rms_delay_spread_s(kind);
        return tau > 0.0 ? 1.0 / (2.0 * std::numbers::pi * tau)
                         : std::numeric_limits<double>::infinity();
    }

    /// Correlation between complex gains of adjacent frequency RBs.
    double freq_correlation() const { return std::exp(-rb_bandwidth_hz / coherence_bandwidth_hz()); }

    /// Lag-1 time correlation, J0(2 pi f_d T).
    double time_correlation() const {
        return std::cyl_bessel_j(0.0, 2.0 * std::numbers::pi * doppler_hz * rb_duration_s);
    }
};

/// |h|^2 per RB, unit mean.
struct channel_gains {
    real_grid power_gain;

    grid_dims dims() const noexcept { return power_gain.dims(); }
};

/*
 * Separable AR(1) model of the complex gain: along frequency with
 * rho_f = exp(-df / B_c), along time with rho_t = J0(2 pi f_d dt). Each time
 * column's innovation is itself a frequency-correlated vector, so marginals
 * stay CN(0, 1) and both coherences are preserved.
 */
inline channel_gains gen_channel(const channel_profile& profile, grid_dims dims, std::uint64_t seed) {
    profile.validate();
    require_valid(dims);

    const double rho_f = profile.freq_correlation();
    const double rho_t = profile.time_correlation();
    const double innov_f = std::sqrt(std::max(0.0, 1.0 - rho_f * rho_f));
    const double innov_t = std::sqrt(std::max(0.0, 1.0 - rho_t * rho_t));
    constexpr double half = 0.7071067811865476;  // sqrt(1/2): per-component std of CN(0,1)

    rng r{derive_seed(seed, {stream::channel})};
    std::vector<double> re(dims.n_freq), im(dims.n_freq);
    std::vector<double> wre(dims.n_freq), wim(dims.n_freq);

    auto draw_column = [&](std::vector<double>& a, std::vector<double>& b) {
        a[0] = half * r.normal();
        b[0] = half * r.normal();
        for (std::size_t f = 1; f < dims.n_freq; ++f) {
            if (innov_f == 0.0) {
                a[f] = a[f - 1];
                b[f] = b[f - 1];
            } else {
                a[f] = rho_f * a[f - 1] + innov_f * half * r.normal();
                b[f] = rho_f * b[f - 1] + innov_f * half * r.normal();
            }
        }
    };

    channel_gains out{real_grid{dims, 0.0}};
    draw_column(re, im);
    for (std::size_t t = 0; t < dims.n_time; ++t) {
        if (t > 0 && innov_t != 0.0) {
            draw_column(wre, wim);
            for (std::size_t f = 0; f < dims.n_freq; ++f) {
                re[f] = rho_t * re[f] + innov_t * wre[f];
                im[f] = rho_t * im[f] + innov_t * wim[f];
            }
        }
        for (std::size_t f = 0; f < dims.n_freq; ++f) {
            out.power_gain(f, t) = re[f] * re[f] + im[f] * im[f];
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Energy detection
// ---------------------------------------------------------------------------

/// Per-RB detected energy seen by one node.
struct energy_grid {
    real_grid energy;
    double snr_db = 0.0;

    grid_dims dims() const noexcept { return energy.dims(); }
};

struct sensing_options {
    std::size_t k_samples = 8;
    double noise_power = 1.0;  // fixed at 1 outside of tests
};

/*
 * Energy of one RB is (1/K) sum_k |a u_k + n_k|^2 where a = sqrt(P |h|^2) on
 * occupied RBs and 0 on free ones, u_k is a unit-modulus symbol drawn from
 * {1, j, -1, -j}, n_k ~ CN(0, noise_power), P = 10^(snr_db / 10).
 */
inline energy_grid sense_energy(const occupancy_pattern& pattern, const channel_gains& gains,
                                double snr_db, std::uint64_t seed,
                                const sensing_options& opts = {}) {
    require_same_dims(pattern.dims(), gains.dims(), "sense_energy");
    if (opts.k_samples < 1) {
        throw parameter_error("sense_energy: k_samples must be >= 1");
    }
    if (!(opts.noise_power >= 0.0)) {
        throw parameter_error("sense_energy: noise_power must be >= 0");
    }

    const double signal_power = std::pow(10.0, snr_db / 10.0);
    const double noise_std = std::sqrt(opts.noise_power / 2.0);
    const double inv_k = 1.0 / static_cast<double>(opts.k_samples);
    rng r{derive_seed(seed, {stream::sensing})};

    energy_grid out{real_grid{pattern.dims(), 0.0}, snr_db};
    for (std::size_t i = 0; i < out.energy.size(); ++i) {
        const double amp = pattern.mask[i] ? std::sqrt(signal_power * gains.power_gain[i]) : 0.0;
        double acc = 0.0;
        for (std::size_t k = 0; k < opts.k_samples; ++k) {
            double s_re = 0.0;
            double s_im = 0.0;
            if (amp != 0.0) {
                switch (r.next_u64() >> 62) {
                    case 0: s_re = amp; break;
                    case 1: s_im = amp; break;
                    case 2: s_re = -amp; break;
                    default: s_im = -amp; break;
                }
            }
            if (noise_std != 0.0) {
                s_re += noise_std * r.normal();
                s_im += noise_std * r.normal();
            }
            acc += s_re * s_re + s_im * s_im;
        }
        out.energy[i] = acc * inv_k;
    }
    return out;
}

inline energy_grid sense_energy(const occupancy_pattern& pattern, const channel_gains& gains,
                                double snr_db, std::size_t k_samples, std::uint64_t seed) {
    return sense_energy(pattern, gains, snr_db, seed, sensing_options{k_samples, 1.0});
}

// ---------------------------------------------------------------------------
// Datasets
// ---------------------------------------------------------------------------

struct labeled_example {
    energy_grid input;
    occupancy_pattern label;
};

struct dataset {
    std::vector<labeled_example> examples;

    std::size_t size() const noexcept { return examples.size(); }
    bool empty() const noexcept { return examples.empty(); }
    grid_dims dims() const { return examples.empty() ? grid_dims{0, 0} : examples.front().label.dims(); }
};

/// Batch of fresh (pattern, channel, energy) triples. Example i depends only
/// on (seed, i).
inline dataset make_dataset(std::size_t n_patterns, const traffic_params& traffic,
                            const channel_profile& profile, double snr_db, grid_dims dims,
                            std::uint64_t seed, const sensing_options& opts = {}) {
    if (n_patterns == 0) {
        throw parameter_error("make_dataset: n_patterns must be >= 1");
    }
    traffic.validate();
    profile.validate();
    require_valid(dims);

    dataset out;
    out.examples.reserve(n_patterns);
    for (std::size_t i = 0; i < n_patterns; ++i) {
        const auto ex_seed = derive_seed(seed, {stream::example, i});
        auto pattern = gen_occupancy(traffic, dims, ex_seed);
        const auto gains = gen_channel(profile, dims, ex_seed);
        auto energy = sense_energy(pattern, gains, snr_db, ex_seed, opts);
        out.examples.push_back({std::move(energy), std::move(pattern)});
    }
    return out;
}

}  // namespace fedspectrum

#endif  // FEDSPECTRUM_SPECTRUM_ENV_HPP
