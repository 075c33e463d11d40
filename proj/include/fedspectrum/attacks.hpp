#ifndef FEDSPECTRUM_ATTACKS_HPP
#define FEDSPECTRUM_ATTACKS_HPP
#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "error.hpp"
#include "learner.hpp"
#include "rng.hpp"
#include "spectrum_env.hpp"

namespace fedspectrum {

// ---------------------------------------------------------------------------
// Attack descriptions
// ---------------------------------------------------------------------------

/// Spectrum sensing data falsification applied to training labels.
enum class ssdf_mode {
    selfish,       // fake occupancy: rewrite to 1
    interference,  // fake vacancy: rewrite to 0
    confusing,     // rewrite to a fair coin
};

/// Which RBs are candidates for rewriting.
enum class ssdf_variant {
    force_occupied_fraction,  // fraction of all RBs
    flip_free_fraction,       // fraction of the RBs whose label the mode would change
};

struct ssdf_attack {
    ssdf_mode mode = ssdf_mode::selfish;
    double fraction = 0.5;
    ssdf_variant variant = ssdf_variant::force_occupied_fraction;
};

enum class poison_strategy { sign_flip, scale, random };

struct model_poison_attack {
    poison_strategy strategy = poison_strategy::sign_flip;
    double factor = 1.0;  // SCALE
    double sigma = 0.0;   // RANDOM
};

struct free_ride_attack {
    double sigma = 0.0;
};

/// Primary-user emulation: extra energy in the masked RBs of the attacker's
/// own sensing data.
struct pue_attack {
    binary_grid region;  // empty grid means the whole RB grid
    double power = 10.0;
};

using attack_spec = std::variant<ssdf_attack, model_poison_attack, free_ride_attack, pue_attack>;

inline void validate(const attack_spec& spec) {
    std::visit(
        [](const auto& a) {
            using T = std::decay_t<decltype(a)>;
            if constexpr (std::is_same_v<T, ssdf_attack>) {
                if (!(a.fraction >= 0.0 && a.fraction <= 1.0)) {
                    throw parameter_error("ssdf fraction must be in [0,1]");
                }
            } else if constexpr (std::is_same_v<T, model_poison_attack>) {
                if (!(a.sigma >= 0.0) || !std::isfinite(a.factor)) {
                    throw parameter_error("model poison: sigma must be >= 0 and factor finite");
                }
            } else if constexpr (std::is_same_v<T, free_ride_attack>) {
                if (!(a.sigma >= 0.0)) {
                    throw parameter_error("free ride sigma must be >= 0");
                }
            } else {
                if (!(a.power >= 0.0) || !std::isfinite(a.power)) {
                    throw parameter_error("pue power must be >= 0");
                }
            }
        },
        spec);
}

// ---------------------------------------------------------------------------
// Data poisoning
// ---------------------------------------------------------------------------

/*
 * Rewrites floor(fraction * N) labels per example, where N is the number of
 * candidate RBs (all RBs for force_occupied_fraction). The selected subset is
 * uniform; energies are never touched.
 */
inline dataset ssdf_poison(const dataset& data, ssdf_mode mode, double fraction, std::uint64_t seed,
                           ssdf_variant variant = ssdf_variant::force_occupied_fraction) {
    if (!(fraction >= 0.0 && fraction <= 1.0)) {
        throw parameter_error("ssdf_poison: fraction must be in [0,1]");
    }
    dataset out = data;
    if (fraction == 0.0) {
        return out;
    }
    for (std::size_t e = 0; e < out.examples.size(); ++e) {
        auto& mask = out.examples[e].label.mask;
        rng r{derive_seed(seed, {stream::attack, e})};

        std::vector<std::size_t> candidates;
        if (variant == ssdf_variant::force_occupied_fraction || mode == ssdf_mode::confusing) {
            candidates.resize(mask.size());
            for (std::size_t i = 0; i < mask.size(); ++i) candidates[i] = i;
        } else {
            const std::uint8_t changes = mode == ssdf_mode::selfish ? 0 : 1;
            for (std::size_t i = 0; i < mask.size(); ++i) {
                if (mask[i] == changes) candidates.push_back(i);
            }
        }
        const auto k = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(candidates.size())));
        for (auto pick : r.sample_indices(candidates.size(), k)) {
            auto& v = mask[candidates[pick]];
            switch (mode) {
                case ssdf_mode::selfish: v = 1; break;
                case ssdf_mode::interference: v = 0; break;
                case ssdf_mode::confusing: v = r.bernoulli(0.5) ? 1 : 0; break;
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Update poisoning
// ---------------------------------------------------------------------------

inline model_params model_poison(const model_params& update, const model_poison_attack& attack,
                                 std::uint64_t seed) {
    model_params out = update;
    switch (attack.strategy) {
        case poison_strategy::sign_flip:
            out.for_each_value([](double& v) { v = -v; });
            break;
        case poison_strategy::scale:
            out.for_each_value([&](double& v) { v *= attack.factor; });
            break;
        case poison_strategy::random: {
            rng r{derive_seed(seed, {stream::attack})};
            out.for_each_value([&](double& v) { v = attack.sigma * r.normal(); });
            break;
        }
    }
    if (!out.all_finite()) {
        throw numeric_error("model_poison produced non-finite parameters");
    }
    return out;
}

/// A fabricated update: the received global model plus N(0, sigma^2) noise.
inline model_params free_ride(const model_params& global_model, double sigma, std::uint64_t seed) {
    if (!(sigma >= 0.0)) {
        throw parameter_error("free_ride: sigma must be >= 0");
    }
    model_params out = global_model;
    if (sigma == 0.0) {
        return out;
    }
    rng r{derive_seed(seed, {stream::attack})};
    out.for_each_value([&](double& v) { v += sigma * r.normal(); });
    return out;
}

// ---------------------------------------------------------------------------
// Primary-user emulation
// ---------------------------------------------------------------------------

inline energy_grid pue_inject(const energy_grid& grid, const binary_grid& region, double power) {
    require_same_dims(grid.dims(), region.dims(), "pue_inject");
    if (!(power >= 0.0)) {
        throw parameter_error("pue_inject: power must be >= 0");
    }
    energy_grid out = grid;
    if (power == 0.0) {
        return out;
    }
    for (std::size_t i = 0; i < out.energy.size(); ++i) {
        if (region[i]) {
            out.energy[i] += power;
        }
    }
    return out;
}

}  // namespace fedspectrum

#endif  // FEDSPECTRUM_ATTACKS_HPP
