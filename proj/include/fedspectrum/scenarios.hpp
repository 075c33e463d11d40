#ifndef FEDSPECTRUM_SCENARIOS_HPP
#define FEDSPECTRUM_SCENARIOS_HPP
#pragma once

#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "config.hpp"
#include "csv.hpp"
#include "federation.hpp"

namespace fedspectrum {

// ---------------------------------------------------------------------------
// Preset configurations (identical to configs/fig3.cfg and configs/fig6.cfg)
// ---------------------------------------------------------------------------

inline constexpr std::string_view fig3_preset = R"(# Heterogeneous channels: 8 sensing nodes, 3 testers that never train.
master_seed = 1
rounds = 20
snr_grid = 0, 5, 10, 15, 20
patterns_per_round = 10
eval_patterns = 20
output_dir = out/fig3

[traffic]
duty_target = 0.2
persist_time = 0.9
block_height_mean = 4

[model]
head_bias_prior = true

[train]
learning_rate = 0.3
local_epochs = 2
batch_size = 8

[fig3]
imports_per_tester = 8

[node.1]
role = honest
channel = epa
doppler_range = 2.5:55

[node.2]
role = honest
channel = eva
doppler_range = 2.5:55

[node.3]
role = honest
channel = epa
doppler_range = 2.5:55

[node.4]
role = honest
channel = eva
doppler_range = 2.5:55

[node.5]
role = honest
channel = epa
doppler_range = 2.5:55

[node.6]
role = honest
channel = eva
doppler_range = 2.5:55

[node.7]
role = honest
channel = epa
doppler_range = 2.5:55

[node.8]
role = honest
channel = eva
doppler_range = 2.5:55

[node.101]
role = tester
channel = eva
doppler_range = 0.5:2.5, 60:70

[node.102]
role = tester
channel = epa
doppler_range = 0.5:2.5, 60:70

[node.103]
role = tester
channel = eva
doppler_range = 0.5:2.5, 60:70
)";

inline constexpr std::string_view fig6_preset = R"(# Two honest nodes, one label-poisoning attacker, accordance filter on.
master_seed = 1
rounds = 20
patterns_per_round = 10
eval_patterns = 20
output_dir = out/fig6

[traffic]
duty_target = 0.2
persist_time = 0.9
block_height_mean = 4

[model]
head_bias_prior = true

[train]
learning_rate = 0.3
local_epochs = 5
batch_size = 4
decision_threshold = 0.35

[defense]
enabled = true
accordance_threshold_pct = 65
validation_patterns = 50
server_channel = eva
server_doppler_hz = 40
server_snr_db = 10
include_global_reference = true

[fig6]
thresholds = 65, 55

[node.1]
role = honest
channel = eva
doppler_range = 30:55
snr_db = 10

[node.2]
role = honest
channel = eva
doppler_range = 30:55
snr_db = 10

[node.3]
role = attacker
channel = eva
doppler_range = 30:55
snr_db = 10
attack = ssdf
ssdf_mode = selfish
ssdf_fraction = 0.5

[node.101]
role = tester
channel = eva
doppler_range = 30:55
snr_db = 10
)";

// ---------------------------------------------------------------------------
// Heterogeneous-channel comparison
// ---------------------------------------------------------------------------

enum class fig3_arm { federated, imported };

inline const char* to_string(fig3_arm a) { return a == fig3_arm::federated ? "federated" : "imported"; }

struct fig3_row {
    double snr_db = 0.0;
    node_id tester = 0;
    fig3_arm arm = fig3_arm::federated;
    std::optional<double> p_d;  // pooled counts
    std::optional<double> p_fa;
    std::optional<double> p_d_averaged;  // mean of per-pattern ratios
    std::optional<double> p_fa_averaged;
};

struct fig3_result {
    std::vector<fig3_row> rows;
    std::vector<std::pair<double, metrics_series>> series;  // per SNR, federated arm by round
    std::vector<node_config> nodes;

    /// Tester-averaged value of one column for one arm at one SNR.
    std::optional<double> tester_mean(double snr, fig3_arm arm, bool pfa) const {
        double acc = 0.0;
        std::size_t n = 0;
        for (const auto& r : rows) {
            if (r.snr_db != snr || r.arm != arm) continue;
            const auto& v = pfa ? r.p_fa : r.p_d;
            if (v) {
                acc += *v;
                ++n;
            }
        }
        return n ? std::optional<double>{acc / static_cast<double>(n)} : std::nullopt;
    }
};

namespace detail {

inline void accumulate(std::optional<double> v, double& acc, std::size_t& n) {
    if (v) {
        acc += *v;
        ++n;
    }
}

inline std::optional<double> mean_of(double acc, std::size_t n) {
    return n ? std::optional<double>{acc / static_cast<double>(n)} : std::nullopt;
}

}  // namespace detail

/*
 * For every SNR point: train the federation for cfg.rounds, and in parallel
 * let every sensing node train purely locally on the same data. Each tester
 * then scores the final global model and imports_per_tester local models
 * picked uniformly at random (with replacement).
 */
inline fig3_result run_fig3_scenario(const experiment_config& cfg) {
    validate(cfg);
    if (cfg.count(node_role::tester) == 0) {
        throw config_error("fig3: at least one tester node is required");
    }
    fig3_result out;
    for (std::size_t si = 0; si < cfg.snr_grid.size(); ++si) {
        const double snr = cfg.snr_grid[si];
        auto point = cfg;
        for (auto& n : point.nodes) n.mean_snr_db = snr;

        const auto fed = run_experiment(point);
        out.series.emplace_back(snr, fed.pooled);
        if (si == 0) out.nodes = fed.nodes;

        const auto s = settings_from(point);
        std::vector<const node_config*> crs;
        std::vector<const node_config*> testers;
        for (const auto& n : fed.nodes) (n.role == node_role::tester ? testers : crs).push_back(&n);

        std::vector<model_params> local(crs.size(), fed.initial);
        for (std::size_t r = 0; r < point.rounds; ++r) {
            const auto rs = round_seed(point.master_seed, r);
            parallel_for(crs.size(), s.threads, [&](std::size_t i) {
                local[i] = node_update(local[i], *crs[i], std::nullopt, s, rs, point.patterns_for(*crs[i]));
            });
        }

        for (const auto* t : testers) {
            const auto data = tester_dataset(*t, s);
            const auto fm = evaluate_on(fed.final_model, data, t->id, s.train.decision_threshold);
            out.rows.push_back({snr, t->id, fig3_arm::federated, fm.pooled.p_d, fm.pooled.p_fa, fm.averaged.p_d,
                                fm.averaged.p_fa});

            rng pick{derive_seed(point.master_seed, {stream::imports, t->id, si})};
            double pd = 0, pfa = 0, apd = 0, apfa = 0;
            std::size_t npd = 0, npfa = 0, napd = 0, napfa = 0;
            for (std::size_t k = 0; k < point.imports_per_tester; ++k) {
                const auto src = pick.below(crs.size());
                const auto im = evaluate_on(local[src], data, t->id, s.train.decision_threshold);
                detail::accumulate(im.pooled.p_d, pd, npd);
                detail::accumulate(im.pooled.p_fa, pfa, npfa);
                detail::accumulate(im.averaged.p_d, apd, napd);
                detail::accumulate(im.averaged.p_fa, apfa, napfa);
            }
            out.rows.push_back({snr, t->id, fig3_arm::imported, detail::mean_of(pd, npd), detail::mean_of(pfa, npfa),
                                detail::mean_of(apd, napd), detail::mean_of(apfa, napfa)});
        }
    }
    return out;
}

inline std::string fig3_table(const fig3_result& r) {
    std::string out = "snr_db,tester,arm,p_d,p_fa,p_d_averaged,p_fa_averaged\n";
    for (const auto& row : r.rows) {
        out += format_real(row.snr_db) + "," + std::to_string(row.tester) + "," + to_string(row.arm) + "," +
               format_optional(row.p_d) + "," + format_optional(row.p_fa) + "," +
               format_optional(row.p_d_averaged) + "," + format_optional(row.p_fa_averaged) + "\n";
    }
    return out;
}

// ---------------------------------------------------------------------------
// Accordance-filter defense
// ---------------------------------------------------------------------------

struct fig6_run {
    double threshold_pct = 0.0;
    experiment_result result;
    std::vector<std::size_t> attacker_accepted_rounds;  // 1-based round indices
};

struct fig6_result {
    std::vector<node_id> attackers;
    std::vector<fig6_run> runs;
};

/// Runs the same federation once per configured threshold.
inline fig6_result run_fig6_scenario(const experiment_config& cfg) {
    validate(cfg);
    fig6_result out;
    for (const auto& n : cfg.nodes) {
        if (n.role == node_role::attacker) out.attackers.push_back(n.id);
    }
    if (out.attackers.empty()) {
        throw config_error("fig6: at least one attacker node is required");
    }
    const auto thresholds =
        cfg.thresholds_pct.empty()
            ? std::vector<double>{cfg.defense ? cfg.defense->accordance_threshold_pct : defense_config{}.accordance_threshold_pct}
            : cfg.thresholds_pct;
    for (double t : thresholds) {
        auto run_cfg = cfg;
        if (!run_cfg.defense) run_cfg.defense = defense_config{};
        run_cfg.defense->enabled = true;
        run_cfg.defense->accordance_threshold_pct = t;
        fig6_run run{t, run_experiment(run_cfg), {}};
        for (const auto& rep : run.result.reports) {
            const bool hit = std::any_of(rep.accepted.begin(), rep.accepted.end(), [&](node_id id) {
                return std::find(out.attackers.begin(), out.attackers.end(), id) != out.attackers.end();
            });
            if (hit) run.attacker_accepted_rounds.push_back(rep.round_index);
        }
        out.runs.push_back(std::move(run));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Output files
// ---------------------------------------------------------------------------

namespace detail {

inline std::string threshold_tag(double t) {
    auto s = format_real(t);
    for (auto& c : s) {
        if (c == '.') c = 'p';
    }
    return s;
}

/// Resolved config plus the drawn Doppler values as comments.
inline std::string config_echo(const experiment_config& cfg, std::span<const node_config> resolved) {
    std::string out = to_text(cfg);
    out += "\n# drawn doppler_hz per node\n";
    for (const auto& n : resolved) out += "#   node." + std::to_string(n.id) + " = " + format_real(n.channel.doppler_hz) + "\n";
    return out;
}

}  // namespace detail

inline void write_experiment_outputs(const experiment_config& cfg, const experiment_result& r,
                                     const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    write_text((dir / "config.resolved.cfg").string(), detail::config_echo(cfg, r.nodes));
    emit_csv(r.pooled, (dir / "metrics.csv").string());
    emit_csv(r.averaged, (dir / "metrics_averaged.csv").string());
    write_text((dir / "filter.csv").string(), filter_csv(r.reports));
}

inline void write_fig3_outputs(const experiment_config& cfg, const fig3_result& r, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    write_text((dir / "config.resolved.cfg").string(), detail::config_echo(cfg, r.nodes));
    write_text((dir / "fig3_table.csv").string(), fig3_table(r));
    for (const auto& [snr, series] : r.series) {
        emit_csv(series, (dir / ("metrics_snr" + detail::threshold_tag(snr) + ".csv")).string());
    }
    for (auto arm : {fig3_arm::federated, fig3_arm::imported}) {
        for (bool pfa : {false, true}) {
            std::vector<std::pair<double, double>> pts;
            for (double snr : cfg.snr_grid) {
                if (auto v = r.tester_mean(snr, arm, pfa)) pts.emplace_back(snr, *v);
            }
            const auto name = std::string("fig3_") + to_string(arm) + (pfa ? "_pfa" : "_pd") + ".dat";
            write_text((dir / name).string(), plot_data(pts));
        }
    }
}

inline void write_fig6_outputs(const experiment_config& cfg, const fig6_result& r, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    if (!r.runs.empty()) {
        write_text((dir / "config.resolved.cfg").string(), detail::config_echo(cfg, r.runs.front().result.nodes));
    }
    for (const auto& run : r.runs) {
        const auto tag = "_t" + detail::threshold_tag(run.threshold_pct);
        emit_csv(run.result.pooled, (dir / ("metrics" + tag + ".csv")).string());
        emit_csv(run.result.averaged, (dir / ("metrics_averaged" + tag + ".csv")).string());
        write_text((dir / ("filter" + tag + ".csv")).string(), filter_csv(run.result.reports));
        std::vector<std::pair<double, double>> pd, pfa;
        for (const auto& row : run.result.pooled.rows) {
            if (row.p_d) pd.emplace_back(static_cast<double>(row.round), *row.p_d);
            if (row.p_fa) pfa.emplace_back(static_cast<double>(row.round), *row.p_fa);
        }
        write_text((dir / ("fig6_pd" + tag + ".dat")).string(), plot_data(pd));
        write_text((dir / ("fig6_pfa" + tag + ".dat")).string(), plot_data(pfa));
    }
}

}  // namespace fedspectrum

#endif  // FEDSPECTRUM_SCENARIOS_HPP
