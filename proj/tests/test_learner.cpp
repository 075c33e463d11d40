#include <gtest/gtest.h>

#include <cmath>

#include <fedspectrum/fedspectrum.hpp>

#include "oracles.hpp"

using namespace fedspectrum;

namespace {

energy_grid random_grid(grid_dims d, std::uint64_t seed, double snr = 5.0) {
    const auto p = gen_occupancy({}, d, seed);
    return sense_energy(p, gen_channel({}, d, seed), snr, 8, seed);
}

model_params perturbed_model(std::uint64_t seed) {
    auto m = init_model(model_arch{}, init_mode::random, seed);
    rng r{derive_seed(seed, {0xb1a5})};
    m.for_each_value([&](double& v) { v += 0.05 * r.normal(); });
    return m;
}

/// One hidden 1x1 layer of width 1 on raw input, with a fixed head.
model_params scalar_model(double w, double b, double head_w, double head_b) {
    model_arch a;
    a.hidden_layers = 1;
    a.channels_per_layer = {1};
    a.kernel_h = a.kernel_w = 1;
    a.input = input_transform::raw;
    auto m = init_model(a, init_mode::zero, 0);
    m.layers[0].weights[0] = w;
    m.layers[0].biases[0] = b;
    m.layers[1].weights[0] = head_w;
    m.layers[1].biases[0] = head_b;
    return m;
}

energy_grid scalar_grid(double e) { return energy_grid{real_grid{{1, 1}, e}, 0.0}; }

}  // namespace

// --- init ----------------------------------------------------------------------

TEST(Init, DefaultArchitectureHas193Parameters) {
    const model_arch a;
    EXPECT_EQ(oracle::parameter_count(a), 193u);
    EXPECT_EQ(init_model(a, init_mode::random, 1).parameter_count(), oracle::parameter_count(a));
}

TEST(Init, ParameterCountFollowsShapeFormula) {
    model_arch a;
    a.hidden_layers = 3;
    a.channels_per_layer = {2, 5, 3};
    a.kernel_h = 5;
    a.kernel_w = 3;
    EXPECT_EQ(init_model(a, init_mode::zero, 0).parameter_count(), oracle::parameter_count(a));
}

TEST(Init, ZeroModelPredictsOneHalfEverywhere) {
    const auto m = init_model(model_arch{}, init_mode::zero, 0);
    for (double p : forward(m, random_grid({9, 11}, 3)).prob) EXPECT_EQ(p, 0.5);
}

TEST(Init, SameSeedSameParameters) {
    EXPECT_EQ(init_model(model_arch{}, init_mode::random, 8), init_model(model_arch{}, init_mode::random, 8));
    EXPECT_NE(init_model(model_arch{}, init_mode::random, 8), init_model(model_arch{}, init_mode::random, 9));
}

TEST(Init, InvalidArchitecturesAreRejected) {
    model_arch a;
    a.kernel_h = 2;
    EXPECT_THROW(init_model(a, init_mode::zero, 0), parameter_error);
    a = {};
    a.channels_per_layer = {4};
    EXPECT_THROW(init_model(a, init_mode::zero, 0), parameter_error);
}

// --- forward ---------------------------------------------------------------

TEST(Forward, OutputsStayStrictlyInsideUnitInterval) {
    auto m = perturbed_model(4);
    m.for_each_value([](double& v) { v *= 500.0; });  // saturating logits
    for (double p : forward(m, random_grid({10, 12}, 4, 20.0)).prob) {
        EXPECT_GT(p, 0.0);
        EXPECT_LT(p, 1.0);
    }
}

TEST(Forward, ScalarCompositionMatchesHandValues) {
    // sigmoid(1.5 * relu(w e + b) - 0.25), evaluated by hand
    EXPECT_NEAR(forward(scalar_model(2.0, 0.5, 1.5, -0.25), scalar_grid(1.5)).prob[0], 0.9933071490757153, 1e-15);
    EXPECT_NEAR(forward(scalar_model(-1.0, 0.2, 1.5, -0.25), scalar_grid(3.0)).prob[0], 0.43782349911420193, 1e-15);
    EXPECT_NEAR(forward(scalar_model(0.5, -1.0, 1.5, -0.25), scalar_grid(4.0)).prob[0], 0.7772998611746911, 1e-15);
}

TEST(Forward, AgreesWithNaiveConvolution) {
    for (std::uint64_t s = 0; s < 5; ++s) {
        const auto m = perturbed_model(s);
        const auto g = random_grid({7, 13}, 50 + s);
        const auto fast = forward(m, g).prob;
        const auto slow = oracle::probabilities(m, g);
        for (std::size_t i = 0; i < slow.size(); ++i) EXPECT_NEAR(fast[i], slow[i], 1e-12);
    }
}

TEST(Forward, NonFiniteEnergyIsRejected) {
    auto g = random_grid({4, 4}, 1);
    g.energy[5] = std::numeric_limits<double>::quiet_NaN();
    EXPECT_THROW(forward(perturbed_model(1), g), input_error);
    g.energy[5] = std::numeric_limits<double>::infinity();
    EXPECT_THROW(forward(perturbed_model(1), g), input_error);
}

// --- loss ----------------------------------------------------------------------

TEST(Loss, UniformHalfGivesLnTwo) {
    const prob_grid p{real_grid{{5, 5}, 0.5}};
    const auto label = gen_occupancy({}, {5, 5}, 2);
    EXPECT_NEAR(bce_loss(p, label), std::log(2.0), 1e-15);
}

TEST(Loss, PerfectPredictionIsClampedNearZero) {
    const auto label = gen_occupancy(traffic_params{0.5, 0.9, 2.0}, {6, 6}, 3);
    prob_grid p{real_grid{{6, 6}}};
    for (std::size_t i = 0; i < p.prob.size(); ++i) p.prob[i] = label.mask[i] ? 1.0 : 0.0;
    const double loss = bce_loss(p, label);
    EXPECT_NEAR(loss, -std::log1p(-prob_epsilon), 1e-15);
    EXPECT_LT(loss, 1e-11);
}

TEST(Loss, TwoCellHandExample) {
    prob_grid p{real_grid{{1, 2}}};
    p.prob[0] = 0.9;
    p.prob[1] = 0.2;
    occupancy_pattern y{binary_grid{{1, 2}}};
    y.mask[0] = 1;
    EXPECT_NEAR(bce_loss(p, y), 0.1643, 5e-5);
    EXPECT_NEAR(bce_loss(p, y), 0.5 * (0.10536051565782628 + 0.2231435513142097), 1e-15);
}

TEST(Loss, ShapeMismatchIsRejected) {
    const prob_grid p{real_grid{{2, 2}, 0.5}};
    EXPECT_THROW(bce_loss(p, occupancy_pattern{binary_grid{{2, 3}}}), shape_error);
}

TEST(Loss, TrainingLossMatchesOracleBce) {
    const auto ds = make_dataset(3, {}, {}, 5.0, {6, 9}, 17);
    const auto m = perturbed_model(17);
    EXPECT_NEAR(batch_loss(m, ds.examples), oracle::mean_bce(m, ds.examples), 1e-13);
}

// --- gradients and training ----------------------------------------------------

TEST(Gradient, MatchesCentralDifferences) {
    for (std::uint64_t s = 0; s < 5; ++s) {
        const auto m = perturbed_model(s);
        const auto ds = make_dataset(1, {}, {}, 5.0, {8, 10}, 100 + s);
        const auto c = oracle::check_gradient(m, ds.examples);
        EXPECT_EQ(c.failures, 0u) << "seed " << s << " worst relative error " << c.worst_relative;
        EXPECT_EQ(c.checked, m.parameter_count());
    }
}

TEST(Gradient, ZeroLearningRateLeavesModelUnchanged) {
    const auto ds = make_dataset(4, {}, {}, 10.0, {6, 8}, 5);
    const auto m = perturbed_model(5);
    EXPECT_EQ(train_step(m, ds.examples, 0.0), m);
}

TEST(Gradient, NonFiniteStepRaisesNumericError) {
    const auto ds = make_dataset(2, {}, {}, 10.0, {6, 8}, 5);
    const auto m = perturbed_model(5);
    EXPECT_THROW(train_step(m, ds.examples, std::numeric_limits<double>::infinity()), numeric_error);
    auto lg = batch_gradient(m, ds.examples);
    lg.loss = std::numeric_limits<double>::quiet_NaN();
    EXPECT_THROW(apply_step(m, lg, 0.1), numeric_error);
}

TEST(Train, SingleFullBatchAtZeroRateIsIdentity) {
    const auto ds = make_dataset(6, {}, {}, 10.0, {6, 8}, 6);
    train_config cfg;
    cfg.local_epochs = 1;
    cfg.batch_size = ds.size();
    cfg.learning_rate = 0.0;
    const auto m = perturbed_model(6);
    EXPECT_EQ(train_local(m, ds, cfg, 1), m);
}

TEST(Train, IsDeterministic) {
    const auto ds = make_dataset(6, {}, {}, 10.0, {8, 8}, 7);
    const auto m = perturbed_model(7);
    EXPECT_EQ(train_local(m, ds, train_config{}, 3), train_local(m, ds, train_config{}, 3));
}

TEST(Train, FiveEpochsReduceLossOnCleanData) {
    const auto ds = make_dataset(16, {}, {}, 10.0, {20, 30}, 8);
    train_config cfg;
    cfg.local_epochs = 5;
    const auto m0 = init_model(model_arch{}, init_mode::random, 8);
    const auto m5 = train_local(m0, ds, cfg, 8);
    EXPECT_LT(batch_loss(m5, ds.examples), batch_loss(m0, ds.examples));
}

TEST(Train, EmptyDatasetIsRejected) {
    EXPECT_THROW(train_local(perturbed_model(1), dataset{}, train_config{}, 1), parameter_error);
}

// --- decisions ---------------------------------------------------------------------

TEST(Predict, ThresholdExtremes) {
    const auto m = perturbed_model(9);
    const auto g = random_grid({8, 8}, 9);
    EXPECT_EQ(count_ones(predict(m, g, 0.0).decision), 64u);
    EXPECT_EQ(count_ones(predict(m, g, 1.0).decision), 0u);
}

TEST(Predict, TieAtOneHalfCountsAsOccupied) {
    const auto m = init_model(model_arch{}, init_mode::zero, 0);
    EXPECT_EQ(count_ones(predict(m, random_grid({8, 8}, 1), 0.5).decision), 64u);
}

TEST(Predict, InvalidThresholdIsRejected) {
    const auto m = init_model(model_arch{}, init_mode::zero, 0);
    EXPECT_THROW(predict(m, random_grid({2, 2}, 1), 1.5), parameter_error);
}

TEST(EnergyDetector, LambdaExtremes) {
    const auto g = random_grid({10, 10}, 2);
    EXPECT_EQ(count_ones(energy_detector(g, 0.0).decision), 100u);
    const double top = *std::max_element(g.energy.begin(), g.energy.end());
    EXPECT_EQ(count_ones(energy_detector(g, std::nextafter(top, 1e300)).decision), 0u);
    EXPECT_THROW(energy_detector(g, -1.0), parameter_error);
}

TEST(EnergyDetector, NinetiethPercentileGivesTenPercentFalseAlarm) {
    const grid_dims d{100, 100};
    const occupancy_pattern free{binary_grid{d, 0}};
    const channel_gains flat{real_grid{d, 1.0}};
    const auto calib = sense_energy(free, flat, 0.0, 8, 1);
    const double lambda = calibrate_threshold(calib.energy.values(), 0.9);
    const auto fresh = sense_energy(free, flat, 0.0, 8, 2);
    const auto m = compute_pd_pfa(energy_detector(fresh, lambda), free);
    ASSERT_TRUE(m.p_fa);
    EXPECT_NEAR(*m.p_fa, 0.10, 0.02);
}

TEST(EnergyDetector, FalseAlarmAndDetectionFallAsLambdaRises) {
    const grid_dims d{40, 60};
    const auto truth = gen_occupancy(traffic_params{0.4, 0.9, 4.0}, d, 3);
    const auto e = sense_energy(truth, gen_channel({}, d, 3), 5.0, 8, 3);
    double last_pd = 2.0, last_pfa = 2.0;
    for (double lambda = 0.0; lambda < 20.0; lambda += 0.25) {
        const auto m = compute_pd_pfa(energy_detector(e, lambda), truth);
        EXPECT_LE(*m.p_d, last_pd);
        EXPECT_LE(*m.p_fa, last_pfa);
        last_pd = *m.p_d;
        last_pfa = *m.p_fa;
    }
}

// --- snapshots ---------------------------------------------------------------------

TEST(ModelIo, RoundTripIsExact) {
    auto m = perturbed_model(12);
    m.layers[0].weights[3] = -0.0;
    m.layers[1].biases[0] = 1e-310;  // subnormal survives
    const auto back = deserialize_model(serialize_model(m));
    EXPECT_EQ(back, m);
    EXPECT_EQ(serialize_model(back), serialize_model(m));
}

TEST(ModelIo, RoundTripNonDefaultArchitecture) {
    model_arch a;
    a.hidden_layers = 3;
    a.channels_per_layer = {3, 2, 6};
    a.kernel_h = 5;
    a.kernel_w = 1;
    a.input = input_transform::raw;
    const auto m = init_model(a, init_mode::random, 4);
    EXPECT_EQ(deserialize_model(serialize_model(m)), m);
}

TEST(ModelIo, EmptyInputIsFormatError) {
    EXPECT_THROW(deserialize_model(std::span<const std::uint8_t>{}), format_error);
}

TEST(ModelIo, CorruptedShapeHeaderNamesTheField) {
    const auto good = serialize_model(init_model(model_arch{}, init_mode::random, 1));
    std::string text(good.begin(), good.end());
    auto expect_error = [](const std::string& t, const std::string& needle) {
        const bytes::buffer b(t.begin(), t.end());
        try {
            deserialize_model(b);
            ADD_FAILURE() << "no error for corruption '" << needle << "'";
        } catch (const format_error& e) {
            EXPECT_NE(std::string(e.what()).find(needle), std::string::npos) << e.what();
        }
    };
    auto replace = [&](const std::string& from, const std::string& to) {
        auto t = text;
        t.replace(t.find(from), from.size(), to);
        return t;
    };
    expect_error(replace("arch 2 4,4 3 3", "arch 2 4,4 x 3"), "arch.kernel_h");
    expect_error(replace("arch 2 4,4 3 3", "arch 2 4,4 2 3"), "kernel");
    expect_error(replace("layer 1 4 4 3 3", "layer 1 5 4 3 3"), "layer 1 out_ch");
    expect_error(replace("fedspectrum-model v1", "fedspectrum-model v9"), "header");
    expect_error(replace("relu", "tanh"), "arch.activation");
}

TEST(ModelIo, TruncatedAndTrailingBytesAreRejected) {
    const auto good = serialize_model(perturbed_model(2));
    bytes::buffer cut(good.begin(), good.end() - 3);
    EXPECT_THROW(deserialize_model(cut), format_error);
    auto extra = good;
    extra.push_back(0);
    EXPECT_THROW(deserialize_model(extra), format_error);
}
