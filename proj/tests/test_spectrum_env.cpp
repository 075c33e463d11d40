#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include <fedspectrum/fedspectrum.hpp>

using namespace fedspectrum;

namespace {

double mean_of(const real_grid& g) {
    return std::accumulate(g.begin(), g.end(), 0.0) / static_cast<double>(g.size());
}

channel_gains unit_gains(grid_dims d) { return channel_gains{real_grid{d, 1.0}}; }

}  // namespace

// --- occupancy -------------------------------------------------------------

TEST(Occupancy, ZeroDutyGivesEmptyMask) {
    traffic_params t;
    t.duty_target = 0.0;
    const auto p = gen_occupancy(t, {50, 100}, 3);
    EXPECT_EQ(count_ones(p.mask), 0u);
}

TEST(Occupancy, FullDutyGivesFullMask) {
    traffic_params t;
    t.duty_target = 1.0;
    const auto p = gen_occupancy(t, {50, 100}, 3);
    EXPECT_EQ(count_ones(p.mask), 5000u);
}

TEST(Occupancy, MaskHasOneEntryPerResourceBlock) {
    const auto p = gen_occupancy(traffic_params{}, {50, 100}, 11);
    EXPECT_EQ(p.mask.size(), 5000u);
    EXPECT_EQ(p.dims(), (grid_dims{50, 100}));
    for (auto v : p.mask) EXPECT_TRUE(v == 0 || v == 1);
}

TEST(Occupancy, EmpiricalDutyMatchesStationaryProbability) {
    // Two-state chain with P(on->off) = 1 - persist and the birth rate chosen
    // by the generator; the stationary law is birth / (birth + death).
    traffic_params t;
    t.duty_target = 0.5;
    t.persist_time = 0.9;
    const double death = 1.0 - t.persist_time;
    const double birth = t.duty_target * death / (1.0 - t.duty_target);
    const double stationary = birth / (birth + death);

    std::size_t ones = 0, total = 0;
    for (std::uint64_t s = 0; s < 24; ++s) {
        const auto p = gen_occupancy(t, {50, 1000}, 1000 + s);
        ones += count_ones(p.mask);
        total += p.mask.size();
    }
    const double empirical = static_cast<double>(ones) / static_cast<double>(total);
    EXPECT_NEAR(empirical, stationary, 0.05);
    EXPECT_NEAR(empirical, 0.5, 0.05);
}

TEST(Occupancy, LowDutyStationaryProperty) {
    traffic_params t;
    t.duty_target = 0.2;
    t.persist_time = 0.8;
    std::size_t ones = 0, total = 0;
    for (std::uint64_t s = 0; s < 20; ++s) {
        const auto p = gen_occupancy(t, {50, 1000}, 77 + s);
        ones += count_ones(p.mask);
        total += p.mask.size();
    }
    EXPECT_NEAR(static_cast<double>(ones) / static_cast<double>(total), 0.2, 0.03);
}

TEST(Occupancy, SaturatedBirthRateKeepsStationaryDuty) {
    traffic_params t;
    t.duty_target = 0.9;
    t.persist_time = 0.5;
    const auto r = chain_rates(t);
    EXPECT_LE(r.birth, 1.0);
    EXPECT_NEAR(r.birth / (r.birth + r.death), 0.9, 1e-12);
}

TEST(Occupancy, SameSeedSamePattern) {
    EXPECT_EQ(gen_occupancy({}, {20, 30}, 5), gen_occupancy({}, {20, 30}, 5));
    EXPECT_NE(gen_occupancy({}, {20, 30}, 5), gen_occupancy({}, {20, 30}, 6));
}

TEST(Occupancy, RejectsOutOfRangeParameters) {
    traffic_params t;
    t.duty_target = 1.5;
    EXPECT_THROW(gen_occupancy(t, {4, 4}, 1), parameter_error);
    t = {};
    t.persist_time = -0.1;
    EXPECT_THROW(gen_occupancy(t, {4, 4}, 1), parameter_error);
    t = {};
    t.block_height_mean = 0.5;
    EXPECT_THROW(gen_occupancy(t, {4, 4}, 1), parameter_error);
    EXPECT_THROW(gen_occupancy({}, {0, 4}, 1), parameter_error);
}

// --- channel ---------------------------------------------------------------

TEST(Channel, ZeroDopplerFreezesEachFrequencyRow) {
    channel_profile p{channel_kind::eva, 0.0};
    const auto g = gen_channel(p, {12, 40}, 9);
    for (std::size_t f = 0; f < 12; ++f) {
        for (std::size_t t = 1; t < 40; ++t) EXPECT_EQ(g.power_gain(f, t), g.power_gain(f, 0));
    }
}

TEST(Channel, FlatProfileHasIdenticalRowsAndUnitMeanPower) {
    channel_profile p{channel_kind::flat, 30.0};
    const auto g = gen_channel(p, {6, 8}, 4);
    for (std::size_t t = 0; t < 8; ++t) {
        for (std::size_t f = 1; f < 6; ++f) EXPECT_EQ(g.power_gain(f, t), g.power_gain(0, t));
    }
    double acc = 0.0;
    constexpr int n = 10000;
    for (int s = 0; s < n; ++s) acc += gen_channel(p, {1, 1}, 500 + s).power_gain(0, 0);
    EXPECT_NEAR(acc / n, 1.0, 0.02);
}

TEST(Channel, PedestrianProfileIsMoreFrequencyCoherentThanVehicular) {
    auto adjacent_corr = [](channel_kind k) {
        channel_profile p{k, 30.0};
        double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
        constexpr int n = 10000;
        for (int s = 0; s < n; ++s) {
            const auto g = gen_channel(p, {2, 1}, 90000 + s);
            const double x = g.power_gain(0, 0), y = g.power_gain(1, 0);
            sx += x, sy += y, sxx += x * x, syy += y * y, sxy += x * y;
        }
        const double cov = sxy / n - (sx / n) * (sy / n);
        return cov / std::sqrt((sxx / n - (sx / n) * (sx / n)) * (syy / n - (sy / n) * (sy / n)));
    };
    EXPECT_GT(adjacent_corr(channel_kind::epa), adjacent_corr(channel_kind::eva));
}

TEST(Channel, DelaySpreadsAndCorrelations) {
    // RMS delay spreads of the tabulated profiles: about 43 ns and 357 ns.
    EXPECT_NEAR(rms_delay_spread_s(channel_kind::epa) * 1e9, 43.1, 0.5);
    EXPECT_NEAR(rms_delay_spread_s(channel_kind::eva) * 1e9, 357.0, 1.0);
    channel_profile slow{channel_kind::eva, 5.0}, fast{channel_kind::eva, 70.0};
    EXPECT_GT(slow.time_correlation(), fast.time_correlation());
    EXPECT_DOUBLE_EQ(channel_profile{channel_kind::flat}.freq_correlation(), 1.0);
}

TEST(Channel, NegativeDopplerIsRejected) {
    channel_profile p{channel_kind::epa, -1.0};
    EXPECT_THROW(gen_channel(p, {2, 2}, 1), parameter_error);
}

// --- energy detection --------------------------------------------------------

TEST(Energy, FreeGridAveragesNoisePower) {
    const grid_dims d{50, 100};
    const occupancy_pattern free{binary_grid{d, 0}};
    const auto e = sense_energy(free, unit_gains(d), 10.0, 8, 21);
    EXPECT_NEAR(mean_of(e.energy), 1.0, 0.03);
}

TEST(Energy, NoiselessUnitGainAtZeroDbIsExactlyOne) {
    const grid_dims d{3, 3};
    const occupancy_pattern busy{binary_grid{d, 1}};
    const auto e = sense_energy(busy, unit_gains(d), 0.0, 42, sensing_options{8, 0.0});
    for (double v : e.energy) EXPECT_DOUBLE_EQ(v, 1.0);
}

TEST(Energy, TwentyDbOccupiedToFreeRatio) {
    const grid_dims d{50, 100};
    const auto pattern = gen_occupancy(traffic_params{0.5, 0.9, 4.0}, d, 8);
    const auto e = sense_energy(pattern, unit_gains(d), 20.0, 8, 13);
    double on = 0, off = 0;
    std::size_t n_on = 0, n_off = 0;
    for (std::size_t i = 0; i < e.energy.size(); ++i) {
        (pattern.mask[i] ? on : off) += e.energy[i];
        ++(pattern.mask[i] ? n_on : n_off);
    }
    const double ratio = (on / n_on) / (off / n_off);
    const double expected = 1.0 + std::pow(10.0, 2.0);
    EXPECT_NEAR(ratio, expected, 0.05 * expected);
}

TEST(Energy, ShapeMismatchIsRejected) {
    const occupancy_pattern p{binary_grid{{2, 3}, 0}};
    EXPECT_THROW(sense_energy(p, unit_gains({3, 2}), 0.0, 8, 1), shape_error);
}

TEST(Energy, ValuesAreNonNegative) {
    const grid_dims d{10, 10};
    const auto p = gen_occupancy({}, d, 2);
    const auto g = gen_channel({}, d, 2);
    for (double v : sense_energy(p, g, 5.0, 8, 2).energy) EXPECT_GE(v, 0.0);
}

// --- datasets ------------------------------------------------------------------

TEST(Dataset, SizeMatchesRequest) {
    const auto ds = make_dataset(5000, {}, {}, 10.0, {2, 2}, 1);
    EXPECT_EQ(ds.size(), 5000u);
}

TEST(Dataset, SinglePatternWithoutTrafficHasEmptyLabel) {
    traffic_params t;
    t.duty_target = 0.0;
    const auto ds = make_dataset(1, t, {}, 10.0, {50, 100}, 3);
    ASSERT_EQ(ds.size(), 1u);
    EXPECT_EQ(count_ones(ds.examples[0].label.mask), 0u);
}

TEST(Dataset, SameSeedIsReproducible) {
    const auto a = make_dataset(4, {}, {}, 5.0, {8, 12}, 99);
    const auto b = make_dataset(4, {}, {}, 5.0, {8, 12}, 99);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a.examples[i].label, b.examples[i].label);
        EXPECT_EQ(a.examples[i].input.energy, b.examples[i].input.energy);
    }
}

TEST(Dataset, ZeroPatternsIsRejected) {
    EXPECT_THROW(make_dataset(0, {}, {}, 5.0, {8, 12}, 1), parameter_error);
}

TEST(Dataset, ExampleDependsOnlyOnItsIndex) {
    const auto small = make_dataset(2, {}, {}, 5.0, {6, 6}, 4);
    const auto big = make_dataset(5, {}, {}, 5.0, {6, 6}, 4);
    EXPECT_EQ(small.examples[1].input.energy, big.examples[1].input.energy);
}

// --- random streams -------------------------------------------------------------

TEST(Rng, DerivedSeedsDependOnEveryKey) {
    EXPECT_NE(derive_seed(1, {2, 3}), derive_seed(1, {3, 2}));
    EXPECT_NE(derive_seed(1, {2}), derive_seed(2, {2}));
    EXPECT_EQ(derive_seed(7, {1, 2, 3}), derive_seed(7, {1, 2, 3}));
}

TEST(Rng, NormalMoments) {
    rng r{123};
    double s = 0, ss = 0;
    constexpr int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double x = r.normal();
        s += x;
        ss += x * x;
    }
    EXPECT_NEAR(s / n, 0.0, 0.01);
    EXPECT_NEAR(ss / n, 1.0, 0.02);
}

TEST(Rng, SampleIndicesAreDistinctAndInRange) {
    rng r{5};
    auto idx = r.sample_indices(100, 40);
    ASSERT_EQ(idx.size(), 40u);
    std::sort(idx.begin(), idx.end());
    EXPECT_EQ(std::adjacent_find(idx.begin(), idx.end()), idx.end());
    EXPECT_LT(idx.back(), 100u);
}
