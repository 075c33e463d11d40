// fedspectrum command-line front end.
//
//   fedspectrum_cli gen  --config FILE [--seed N] [--out DIR] [--paper-scale]
//   fedspectrum_cli run  --config FILE [--seed N] [--out DIR] [--paper-scale] [--threads N]
//   fedspectrum_cli fig3 [--config FILE] [--seed N] [--out DIR] [--paper-scale] [--threads N]
//   fedspectrum_cli fig6 [--config FILE] [--seed N] [--out DIR] [--paper-scale] [--threads N]
//   fedspectrum_cli selftest

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <fedspectrum/fedspectrum.hpp>

using namespace fedspectrum;
namespace fs = std::filesystem;

namespace {

struct common_options {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string out;
    bool paper_scale = false;
    std::optional<std::size_t> threads;
};

void add_common(CLI::App* cmd, common_options& o, bool config_required, bool with_threads = true) {
    auto* c = cmd->add_option("--config", o.config, "experiment configuration file");
    if (config_required) c->required();
    c->check(CLI::ExistingFile);
    cmd->add_option("--seed", o.seed, "override master_seed");
    cmd->add_option("--out", o.out, "output directory (default: output_dir from the config)");
    cmd->add_flag("--paper-scale", o.paper_scale, "multiply per-node data volume by 25");
    if (with_threads) cmd->add_option("--threads", o.threads, "worker threads for node training")->check(CLI::PositiveNumber);
}

experiment_config load(const common_options& o, std::string_view preset = {}) {
    experiment_config cfg;
    if (!o.config.empty()) {
        const auto raw = bytes::read_file(o.config);
        cfg = parse_config(std::string(raw.begin(), raw.end()));
    } else {
        cfg = parse_config(preset);
    }
    if (o.seed) cfg.master_seed = *o.seed;
    if (o.threads) cfg.threads = *o.threads;
    if (o.paper_scale) apply_paper_scale(cfg);
    if (!o.out.empty()) cfg.output_dir = o.out;
    validate(cfg);
    return cfg;
}

std::string show(const std::optional<double>& v) { return v ? format_real(*v) : std::string("n/a"); }

// --- subcommands ----------------------------------------------------------------

int cmd_gen(const common_options& o) {
    const auto cfg = load(o);
    const auto s = settings_from(cfg);
    const fs::path dir = cfg.output_dir;
    fs::create_directories(dir);
    const auto nodes = resolve_nodes(cfg);
    for (const auto& n : nodes) {
        dataset all;
        std::string name;
        if (n.role == node_role::tester) {
            all = tester_dataset(n, s);
            name = "tester_" + std::to_string(n.id) + ".bin";
        } else {
            for (std::size_t r = 0; r < cfg.rounds; ++r) {
                auto part = node_dataset(n, s, round_seed(cfg.master_seed, r), cfg.patterns_for(n));
                for (auto& ex : part.examples) all.examples.push_back(std::move(ex));
            }
            name = "node_" + std::to_string(n.id) + ".bin";
        }
        write_dataset((dir / name).string(), all);
        std::cout << name << ": " << all.size() << " patterns, doppler " << format_real(n.channel.doppler_hz)
                  << " Hz\n";
    }
    write_text((dir / "config.resolved.cfg").string(), to_text(cfg));
    return 0;
}

int cmd_run(const common_options& o) {
    const auto cfg = load(o);
    const auto r = run_experiment(cfg);
    write_experiment_outputs(cfg, r, cfg.output_dir);
    if (!r.pooled.rows.empty()) {
        const auto& last = r.pooled.rows.back();
        std::cout << "final round " << last.round << ": node " << last.node << " P_d " << show(last.p_d) << " P_fa "
                  << show(last.p_fa) << "\n";
    }
    std::cout << "wrote " << cfg.output_dir << "\n";
    return 0;
}

int cmd_fig3(const common_options& o) {
    const auto cfg = load(o, fig3_preset);
    const auto r = run_fig3_scenario(cfg);
    write_fig3_outputs(cfg, r, cfg.output_dir);
    std::printf("%8s %12s %12s %12s %12s\n", "snr_db", "fl_p_d", "import_p_d", "fl_p_fa", "import_p_fa");
    for (double snr : cfg.snr_grid) {
        std::printf("%8s %12s %12s %12s %12s\n", format_real(snr).c_str(),
                    show(r.tester_mean(snr, fig3_arm::federated, false)).c_str(),
                    show(r.tester_mean(snr, fig3_arm::imported, false)).c_str(),
                    show(r.tester_mean(snr, fig3_arm::federated, true)).c_str(),
                    show(r.tester_mean(snr, fig3_arm::imported, true)).c_str());
    }
    std::cout << "wrote " << cfg.output_dir << "\n";
    return 0;
}

int cmd_fig6(const common_options& o) {
    const auto cfg = load(o, fig6_preset);
    const auto r = run_fig6_scenario(cfg);
    write_fig6_outputs(cfg, r, cfg.output_dir);
    for (const auto& run : r.runs) {
        std::cout << "threshold " << format_real(run.threshold_pct) << "%: attacker accepted in "
                  << run.attacker_accepted_rounds.size() << " of " << run.result.reports.size() << " rounds";
        if (!run.attacker_accepted_rounds.empty()) {
            std::cout << " (";
            for (std::size_t i = 0; i < run.attacker_accepted_rounds.size(); ++i) {
                std::cout << (i ? " " : "") << run.attacker_accepted_rounds[i];
            }
            std::cout << ")";
        }
        if (!run.result.pooled.rows.empty()) {
            const auto& last = run.result.pooled.rows.back();
            std::cout << "; final P_d " << show(last.p_d) << " P_fa " << show(last.p_fa);
        }
        std::cout << "\n";
    }
    std::cout << "wrote " << cfg.output_dir << "\n";
    return 0;
}

// A quick property sweep over the library. The full suites live in ctest.
int cmd_selftest() {
    int failures = 0;
    auto check = [&](const char* name, const std::function<bool()>& fn) {
        bool ok = false;
        std::string why;
        try {
            ok = fn();
        } catch (const std::exception& e) {
            why = e.what();
        }
        std::cout << (ok ? "ok   " : "FAIL ") << name << (why.empty() ? "" : ": " + why) << "\n";
        if (!ok) ++failures;
    };

    const auto model = [](std::uint64_t seed) {
        auto m = init_model(model_arch{}, init_mode::random, seed);
        rng r{seed};
        m.for_each_value([&](double& v) { v += 0.3 * r.normal(); });
        return m;
    };

    check("gradient matches central differences", [&] {
        const auto ds = make_dataset(2, traffic_params{0.3, 0.9, 4.0}, {}, 5.0, {8, 10}, 1);
        for (std::uint64_t seed = 1; seed <= 3; ++seed) {
            const auto m = model(seed);
            const auto g = batch_gradient(m, ds.examples).grad.flat();
            auto theta = m.flat();
            auto probe = m;
            for (std::size_t k = 0; k < theta.size(); k += 7) {
                const double orig = theta[k], h = 1e-5 * std::max(1.0, std::abs(orig));
                theta[k] = orig + h;
                probe.assign_flat(theta);
                const double up = batch_loss(probe, ds.examples);
                theta[k] = orig - h;
                probe.assign_flat(theta);
                const double down = batch_loss(probe, ds.examples);
                theta[k] = orig;
                const double fd = (up - down) / (2 * h);
                const double mag = std::max(std::abs(fd), std::abs(g[k]));
                if (mag >= 1e-8 ? std::abs(fd - g[k]) > 1e-4 * mag : std::abs(fd - g[k]) > 1e-7) return false;
            }
        }
        return true;
    });
    check("fedavg identities", [&] {
        const auto a = model(4);
        auto neg = a;
        neg.for_each_value([](double& v) { v = -v; });
        const std::vector<model_params> same{a, a}, pair{a, neg};
        bool zero = true;
        fedavg(pair).for_each_value([&](double v) { zero = zero && v == 0.0; });
        return fedavg(same) == a && zero;
    });
    check("median within coordinate range", [&] {
        const std::vector<model_params> ms{model(5), model(6), model(7)};
        const auto med = robust_aggregate(ms, aggregation_method::median).flat();
        const auto a = ms[0].flat(), b = ms[1].flat(), c = ms[2].flat();
        for (std::size_t i = 0; i < med.size(); ++i) {
            if (med[i] < std::min({a[i], b[i], c[i]}) || med[i] > std::max({a[i], b[i], c[i]})) return false;
        }
        return true;
    });
    check("energy detector calibration", [&] {
        const grid_dims d{100, 100};
        const occupancy_pattern free{binary_grid{d, 0}};
        const channel_gains unit{real_grid{d, 1.0}};
        const double lambda = calibrate_threshold(sense_energy(free, unit, 0.0, 8, 1).energy.values(), 0.9);
        const auto pfa = compute_pd_pfa(energy_detector(sense_energy(free, unit, 0.0, 8, 2), lambda), free).p_fa;
        return pfa && std::abs(*pfa - 0.1) <= 0.02;
    });
    check("attack identities", [&] {
        const auto ds = make_dataset(2, {}, {}, 10.0, {8, 8}, 3);
        const auto m = model(8);
        const model_poison_attack flip{poison_strategy::sign_flip};
        return ssdf_poison(ds, ssdf_mode::selfish, 0.0, 1).examples[1].label == ds.examples[1].label &&
               model_poison(model_poison(m, flip, 1), flip, 2) == m && free_ride(m, 0.0, 1) == m &&
               pue_inject(ds.examples[0].input, binary_grid{{8, 8}, 1}, 0.0).energy == ds.examples[0].input.energy;
    });
    check("filter monotone in threshold", [&] {
        const auto validation = make_dataset(2, {}, {}, 10.0, {8, 8}, 4);
        for (std::uint64_t t = 0; t < 10; ++t) {
            std::vector<std::pair<node_id, model_params>> ups;
            for (node_id i = 1; i <= 4; ++i) ups.emplace_back(i, model(t * 10 + i));
            const auto strict = accordance_filter(ups, validation, 65.0, 0.5).report.accepted;
            const auto loose = accordance_filter(ups, validation, 55.0, 0.5).report.accepted;
            if (!std::includes(loose.begin(), loose.end(), strict.begin(), strict.end())) return false;
        }
        return true;
    });
    check("model snapshot round trip", [&] {
        const auto m = model(9);
        return deserialize_model(serialize_model(m)) == m;
    });
    check("presets parse and reprint", [&] {
        for (auto p : {fig3_preset, fig6_preset}) {
            const auto text = to_text(parse_config(p));
            if (to_text(parse_config(text)) != text) return false;
        }
        return true;
    });
    check("experiment is deterministic", [&] {
        auto cfg = parse_config(
            "master_seed = 2\nrounds = 2\nn_freq = 6\nn_time = 8\npatterns_per_round = 2\neval_patterns = 2\n"
            "[node.1]\nrole = honest\n[node.2]\nrole = honest\n[node.9]\nrole = tester\n");
        const auto a = to_csv(run_experiment(cfg).pooled);
        cfg.threads = 2;
        return a == to_csv(run_experiment(cfg).pooled) && a.find('\n') != a.size() - 1;
    });

    std::cout << (failures ? "selftest failed\n" : "selftest passed\n");
    return failures ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Federated spectrum-sensing simulator"};
    app.require_subcommand(1);

    common_options gen_o, run_o, fig3_o, fig6_o;
    auto* gen = app.add_subcommand("gen", "write each node's sensed data with true labels as dataset snapshots");
    add_common(gen, gen_o, true, false);
    auto* run = app.add_subcommand("run", "run a federation from a configuration file");
    add_common(run, run_o, true);
    auto* fig3 = app.add_subcommand("fig3", "heterogeneous-channel comparison (federated vs imported models)");
    add_common(fig3, fig3_o, false);
    auto* fig6 = app.add_subcommand("fig6", "accordance-filter defense against a label-poisoning node");
    add_common(fig6, fig6_o, false);
    auto* self = app.add_subcommand("selftest", "quick property checks");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*gen) return cmd_gen(gen_o);
        if (*run) return cmd_run(run_o);
        if (*fig3) return cmd_fig3(fig3_o);
        if (*fig6) return cmd_fig6(fig6_o);
        if (*self) return cmd_selftest();
    } catch (const fedspectrum::error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
