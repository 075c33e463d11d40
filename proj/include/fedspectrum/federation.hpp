#ifndef FEDSPECTRUM_FEDERATION_HPP
#define FEDSPECTRUM_FEDERATION_HPP
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "aggregation.hpp"
#include "attacks.hpp"
#include "config.hpp"
#include "defense.hpp"
#include "learner.hpp"
#include "metrics.hpp"
#include "model_io.hpp"
#include "parallel.hpp"
#include "rng.hpp"
#include "spectrum_env.hpp"

namespace fedspectrum {

/// Everything a round needs besides the node list and the defense.
struct federation_settings {
    std::uint64_t master_seed = 0;
    grid_dims dims{50, 100};
    traffic_params traffic;
    sensing_options sensing;
    train_config train;
    std::size_t patterns_per_round = 10;
    std::size_t eval_patterns = 20;
    bool static_datasets = false;
    aggregation_weighting weighting = aggregation_weighting::equal;
    std::size_t threads = 1;
};

inline federation_settings settings_from(const experiment_config& cfg) {
    federation_settings s;
    s.master_seed = cfg.master_seed;
    s.dims = cfg.dims;
    s.traffic = cfg.traffic;
    s.sensing.k_samples = cfg.k_samples;
    s.train = cfg.train;
    s.patterns_per_round = cfg.patterns_per_round;
    s.eval_patterns = cfg.eval_patterns;
    s.static_datasets = cfg.static_datasets;
    s.weighting = cfg.weighting;
    s.threads = cfg.threads;
    return s;
}

struct tester_result {
    node_id tester = 0;
    metrics pooled;
    averaged_rates averaged;
};

struct round_report {
    std::size_t round_index = 0;  // 1-based: the round that produced this report
    std::vector<node_id> submitted;
    std::vector<node_id> accepted;
    std::vector<std::vector<double>> accordance;  // empty without an active defense
    std::vector<double> mean_accordance;
    std::vector<tester_result> testers;
};

struct server_state {
    model_params global_model;
    std::size_t round_index = 0;
    std::optional<dataset> validation;
    std::vector<round_report> history;
};

// ---------------------------------------------------------------------------
// Node side
// ---------------------------------------------------------------------------

/// Seed of node `id` within the round whose seed is `round_seed`.
inline std::uint64_t node_seed(std::uint64_t round_seed, node_id id) {
    return derive_seed(round_seed, {stream::node, id});
}

/// The node's sensing data for one round, before any attack is applied.
inline dataset node_dataset(const node_config& node, const federation_settings& s, std::uint64_t round_seed,
                            std::size_t patterns) {
    const auto seed = s.static_datasets ? derive_seed(s.master_seed, {stream::node, node.id, stream::example})
                                        : derive_seed(node_seed(round_seed, node.id), {stream::example});
    return make_dataset(patterns, s.traffic, node.channel, node.mean_snr_db, s.dims, seed, s.sensing);
}

/*
 * One participant's contribution for a round: fresh local data, then honest
 * training or the configured attack. DP noise from the defense is applied
 * last, to the energies or to the finished model.
 */
inline model_params node_update(const model_params& global, const node_config& node,
                                const std::optional<defense_config>& defense, const federation_settings& s,
                                std::uint64_t round_seed, std::size_t patterns) {
    if (node.role == node_role::tester) {
        throw parameter_error("node_update: tester nodes never submit updates");
    }
    const auto seed = node_seed(round_seed, node.id);
    const bool dp_on = defense && defense->enabled && defense->dp_sigma > 0.0;

    auto finish = [&](model_params m) {
        if (dp_on && defense->dp_on == dp_target::model) {
            m = dp_noise(m, defense->dp_sigma, derive_seed(seed, {stream::noise}));
        }
        return m;
    };

    if (node.attack && std::holds_alternative<free_ride_attack>(*node.attack)) {
        return finish(free_ride(global, std::get<free_ride_attack>(*node.attack).sigma, seed));
    }

    auto data = node_dataset(node, s, round_seed, patterns);
    if (node.attack) {
        if (const auto* a = std::get_if<ssdf_attack>(&*node.attack)) {
            data = ssdf_poison(data, a->mode, a->fraction, seed, a->variant);
        } else if (const auto* a = std::get_if<pue_attack>(&*node.attack)) {
            const auto region = a->region.size() > 0 ? a->region : binary_grid{s.dims, 1};
            for (auto& ex : data.examples) ex.input = pue_inject(ex.input, region, a->power);
        }
    }
    if (dp_on && defense->dp_on == dp_target::energy) {
        for (std::size_t i = 0; i < data.size(); ++i) {
            data.examples[i].input =
                dp_noise(data.examples[i].input, defense->dp_sigma, derive_seed(seed, {stream::noise, i}));
        }
    }
    auto trained = train_local(global, data, s.train, derive_seed(seed, {stream::shuffle}));
    if (node.attack) {
        if (const auto* a = std::get_if<model_poison_attack>(&*node.attack)) {
            trained = model_poison(trained, *a, seed);
        }
    }
    return finish(std::move(trained));
}

// ---------------------------------------------------------------------------
// Tester evaluation
// ---------------------------------------------------------------------------

/// A tester's fixed evaluation set; it depends only on the master seed.
inline dataset tester_dataset(const node_config& tester, const federation_settings& s) {
    return make_dataset(s.eval_patterns, s.traffic, tester.channel, tester.mean_snr_db, s.dims,
                        derive_seed(s.master_seed, {stream::tester, tester.id}), s.sensing);
}

inline tester_result evaluate_on(const model_params& model, const dataset& data, node_id tester,
                                 double decision_threshold) {
    std::vector<decision_grid> decisions;
    std::vector<occupancy_pattern> truths;
    decisions.reserve(data.size());
    truths.reserve(data.size());
    for (const auto& ex : data.examples) {
        decisions.push_back(predict(model, ex.input, decision_threshold));
        truths.push_back(ex.label);
    }
    return {tester, compute_pd_pfa(decisions, truths), average_pd_pfa(decisions, truths)};
}

/// Runs an imported model on the tester's own data.
inline tester_result import_model_eval(const model_params& model, const node_config& tester,
                                       const federation_settings& s) {
    if (tester.role != node_role::tester) {
        throw parameter_error("import_model_eval: node " + std::to_string(tester.id) + " is not a tester");
    }
    return evaluate_on(model, tester_dataset(tester, s), tester.id, s.train.decision_threshold);
}

// ---------------------------------------------------------------------------
// Server side
// ---------------------------------------------------------------------------

/*
 * One federation round. Updates are computed independently per node (in
 * parallel when s.threads > 1), pass through the wire format, and are
 * ordered by node id before filtering and aggregation. If the filter rejects
 * every update the previous global model is kept.
 */
inline std::pair<server_state, round_report> run_round(const server_state& server,
                                                       std::span<const node_config> nodes,
                                                       const std::optional<defense_config>& defense,
                                                       std::uint64_t round_seed, const federation_settings& s) {
    std::vector<const node_config*> participants;
    std::vector<const node_config*> testers;
    for (const auto& n : nodes) {
        (n.role == node_role::tester ? testers : participants).push_back(&n);
    }
    if (participants.empty()) {
        throw config_error("run_round: at least one non-tester node is required");
    }
    std::sort(participants.begin(), participants.end(),
              [](const node_config* a, const node_config* b) { return a->id < b->id; });
    std::sort(testers.begin(), testers.end(),
              [](const node_config* a, const node_config* b) { return a->id < b->id; });

    std::vector<bytes::buffer> wire(participants.size());
    parallel_for(participants.size(), s.threads, [&](std::size_t i) {
        const auto& node = *participants[i];
        const auto patterns = node.patterns.value_or(s.patterns_per_round);
        wire[i] = serialize_model(node_update(server.global_model, node, defense, s, round_seed, patterns));
    });

    std::vector<std::pair<node_id, model_params>> updates;
    updates.reserve(participants.size());
    for (std::size_t i = 0; i < participants.size(); ++i) {
        updates.emplace_back(participants[i]->id, deserialize_model(wire[i]));
    }

    round_report report;
    report.round_index = server.round_index + 1;
    for (const auto& u : updates) report.submitted.push_back(u.first);

    std::vector<std::pair<node_id, model_params>> accepted;
    const bool filtering = defense && defense->enabled;
    if (filtering) {
        if (!server.validation) {
            throw config_error("run_round: defense enabled but the server has no validation dataset");
        }
        filter_options opts;
        opts.peers = defense->peers;
        if (defense->include_global_reference) opts.global_reference = &server.global_model;
        auto fr = accordance_filter(updates, *server.validation, defense->accordance_threshold_pct,
                                    s.train.decision_threshold, opts);
        accepted = std::move(fr.accepted);
        report.accordance = std::move(fr.report.accordance);
        report.mean_accordance = std::move(fr.report.mean_accordance);
    } else {
        accepted = std::move(updates);
    }
    for (const auto& a : accepted) report.accepted.push_back(a.first);

    server_state next;
    next.round_index = server.round_index + 1;
    next.validation = server.validation;
    next.history = server.history;
    if (accepted.empty()) {
        next.global_model = server.global_model;
    } else {
        std::vector<model_params> models;
        std::vector<double> weights;
        for (auto& [id, m] : accepted) {
            models.push_back(std::move(m));
            const auto it = std::find_if(participants.begin(), participants.end(),
                                         [&](const node_config* n) { return n->id == id; });
            weights.push_back(static_cast<double>((*it)->patterns.value_or(s.patterns_per_round)));
        }
        const auto method = filtering ? defense->aggregation : aggregation_method::mean;
        if (method == aggregation_method::mean && s.weighting == aggregation_weighting::dataset_size) {
            next.global_model = fedavg(models, std::span<const double>{weights});
        } else {
            next.global_model =
                robust_aggregate(models, method, filtering ? defense->trim_fraction : 0.0);
        }
    }

    std::vector<tester_result> results(testers.size());
    parallel_for(testers.size(), s.threads, [&](std::size_t i) {
        results[i] = import_model_eval(next.global_model, *testers[i], s);
    });
    report.testers = std::move(results);
    next.history.push_back(report);
    return {std::move(next), std::move(report)};
}

// ---------------------------------------------------------------------------
// Whole experiments
// ---------------------------------------------------------------------------

/// Draws each node's Doppler from its configured ranges, once per experiment.
inline std::vector<node_config> resolve_nodes(const experiment_config& cfg) {
    auto nodes = cfg.nodes;
    for (auto& n : nodes) {
        if (n.doppler_ranges.empty()) continue;
        double total = 0.0;
        for (const auto& r : n.doppler_ranges) total += r.hi - r.lo;
        rng r{derive_seed(cfg.master_seed, {stream::doppler, n.id})};
        double u = r.uniform() * total;
        n.channel.doppler_hz = n.doppler_ranges.back().hi;
        for (const auto& range : n.doppler_ranges) {
            const double w = range.hi - range.lo;
            if (u < w || total == 0.0) {
                n.channel.doppler_hz = range.lo + u;
                break;
            }
            u -= w;
        }
    }
    return nodes;
}

inline model_params initial_model(const experiment_config& cfg) {
    auto m = init_model(cfg.arch, cfg.init, cfg.master_seed);
    if (cfg.head_bias_prior) {
        const double d = cfg.traffic.duty_target;
        m.layers.back().biases[0] = std::log(d / (1.0 - d));
    }
    return m;
}

inline dataset server_validation(const experiment_config& cfg) {
    const std::size_t n = cfg.defense ? cfg.defense->validation_patterns : 0;
    return make_dataset(n, cfg.traffic, cfg.server_channel, cfg.server_snr_db, cfg.dims,
                        derive_seed(cfg.master_seed, {stream::validation}),
                        sensing_options{cfg.k_samples, 1.0});
}

/// One row per tester per round; node is the tester the global model ran on.
struct metrics_row {
    std::size_t round = 0;
    node_id node = 0;
    std::optional<double> p_d;
    std::optional<double> p_fa;
    std::size_t accepted_count = 0;

    friend bool operator==(const metrics_row&, const metrics_row&) = default;
};

struct metrics_series {
    std::vector<metrics_row> rows;
};

struct experiment_result {
    std::vector<node_config> nodes;  // with drawn Doppler values
    std::vector<round_report> reports;
    metrics_series pooled;
    metrics_series averaged;
    model_params initial;
    model_params final_model;
};

inline std::uint64_t round_seed(std::uint64_t master, std::size_t round_index) {
    return derive_seed(master, {stream::round, round_index});
}

inline experiment_result run_experiment(const experiment_config& cfg) {
    validate(cfg);
    const auto s = settings_from(cfg);
    experiment_result out;
    out.nodes = resolve_nodes(cfg);
    out.initial = initial_model(cfg);

    server_state server;
    server.global_model = out.initial;
    if (cfg.defense && cfg.defense->enabled) server.validation = server_validation(cfg);

    for (std::size_t r = 0; r < cfg.rounds; ++r) {
        auto [next, report] = run_round(server, out.nodes, cfg.defense, round_seed(cfg.master_seed, r), s);
        server = std::move(next);
        for (const auto& t : report.testers) {
            out.pooled.rows.push_back({report.round_index, t.tester, t.pooled.p_d, t.pooled.p_fa,
                                       report.accepted.size()});
            out.averaged.rows.push_back({report.round_index, t.tester, t.averaged.p_d, t.averaged.p_fa,
                                         report.accepted.size()});
        }
        out.reports.push_back(std::move(report));
    }
    out.final_model = server.global_model;
    return out;
}

}  // namespace fedspectrum

#endif  // FEDSPECTRUM_FEDERATION_HPP
