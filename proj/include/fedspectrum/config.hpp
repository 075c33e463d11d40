#ifndef FEDSPECTRUM_CONFIG_HPP
#define FEDSPECTRUM_CONFIG_HPP
#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "attacks.hpp"
#include "defense.hpp"
#include "error.hpp"
#include "learner.hpp"
#include "spectrum_env.hpp"

namespace fedspectrum {

enum class node_role { honest, attacker, tester };

inline const char* to_string(node_role r) {
    switch (r) {
        case node_role::honest: return "honest";
        case node_role::attacker: return "attacker";
        case node_role::tester: return "tester";
    }
    return "?";
}

struct doppler_interval {
    double lo = 0.0;
    double hi = 0.0;
    friend bool operator==(const doppler_interval&, const doppler_interval&) = default;
};

struct node_config {
    node_id id = 0;
    node_role role = node_role::honest;
    channel_profile channel;
    /// When non-empty, channel.doppler_hz is drawn uniformly from the union
    /// of these intervals once per experiment.
    std::vector<doppler_interval> doppler_ranges;
    double mean_snr_db = 10.0;
    std::optional<std::size_t> patterns;  // per round; falls back to the experiment default
    std::optional<attack_spec> attack;
};

enum class aggregation_weighting { equal, dataset_size };

struct experiment_config {
    std::uint64_t master_seed = 0;
    std::size_t rounds = 0;
    grid_dims dims{50, 100};
    std::size_t k_samples = 8;
    traffic_params traffic;
    model_arch arch;
    init_mode init = init_mode::random;
    /// Start the head bias at logit(duty_target) instead of 0.
    bool head_bias_prior = false;
    train_config train;
    std::vector<node_config> nodes;
    std::optional<defense_config> defense;
    channel_profile server_channel{channel_kind::eva, 40.0};
    double server_snr_db = 10.0;
    std::vector<double> snr_grid{0.0, 5.0, 10.0, 15.0, 20.0};
    std::size_t patterns_per_round = 10;
    std::size_t eval_patterns = 20;
    bool static_datasets = false;
    aggregation_weighting weighting = aggregation_weighting::equal;
    std::size_t threads = 1;
    std::size_t imports_per_tester = 8;
    std::vector<double> thresholds_pct{65.0, 55.0};
    std::string output_dir = "out";

    std::size_t patterns_for(const node_config& n) const { return n.patterns.value_or(patterns_per_round); }

    std::size_t count(node_role r) const {
        return static_cast<std::size_t>(
            std::count_if(nodes.begin(), nodes.end(), [&](const node_config& n) { return n.role == r; }));
    }
};

/// Raises config_error naming every violated constraint.
inline void validate(const experiment_config& cfg) {
    std::vector<std::string> problems;
    auto check = [&](bool ok, std::string msg) {
        if (!ok) problems.push_back(std::move(msg));
    };
    check(cfg.dims.valid(), "n_freq/n_time: must be >= 1");
    check(cfg.k_samples >= 1, "k_samples: must be >= 1");
    check(cfg.patterns_per_round >= 1, "patterns_per_round: must be >= 1");
    check(cfg.eval_patterns >= 1, "eval_patterns: must be >= 1");
    check(cfg.threads >= 1, "threads: must be >= 1");
    check(cfg.train.learning_rate > 0.0, "train.learning_rate: must be > 0");
    auto wrap = [&](const char* key, auto&& fn) {
        try {
            fn();
        } catch (const error& e) {
            problems.push_back(std::string(key) + ": " + e.what());
        }
    };
    wrap("traffic", [&] { cfg.traffic.validate(); });
    wrap("model", [&] { cfg.arch.validate(); });
    wrap("train", [&] { cfg.train.validate(); });
    wrap("defense.server_channel", [&] { cfg.server_channel.validate(); });
    if (cfg.defense) {
        wrap("defense", [&] { cfg.defense->validate(); });
        check(cfg.defense->validation_patterns >= 1, "defense.validation_patterns: must be >= 1");
    }
    for (double t : cfg.thresholds_pct) {
        check(t >= 0.0 && t <= 100.0, "fig6.thresholds: entries must be in [0,100]");
    }
    std::set<node_id> ids;
    for (const auto& n : cfg.nodes) {
        const auto key = "node." + std::to_string(n.id);
        check(ids.insert(n.id).second, key + ": duplicate node id");
        wrap(key.c_str(), [&] { n.channel.validate(); });
        for (const auto& r : n.doppler_ranges) {
            check(r.lo >= 0.0 && r.hi >= r.lo, key + ".doppler_range: need 0 <= lo <= hi");
        }
        check(!n.patterns || *n.patterns >= 1, key + ".patterns: must be >= 1");
        check(n.role == node_role::attacker || !n.attack, key + ": attack keys require role = attacker");
        check(n.role != node_role::attacker || n.attack.has_value(), key + ": attacker needs an attack kind");
        if (n.attack) wrap(key.c_str(), [&] { validate(*n.attack); });
    }
    check(cfg.count(node_role::honest) + cfg.count(node_role::attacker) >= 1,
          "nodes: at least one non-tester node is required");
    if (!problems.empty()) {
        std::string msg = "invalid configuration:";
        for (const auto& p : problems) msg += "\n  " + p;
        throw config_error(msg);
    }
}

// ---------------------------------------------------------------------------
// Text format
// ---------------------------------------------------------------------------

namespace detail {

inline std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto p = s.find(sep, start);
        out.push_back(trim(s.substr(start, p == std::string_view::npos ? std::string_view::npos : p - start)));
        if (p == std::string_view::npos) break;
        start = p + 1;
    }
    return out;
}

inline std::string fmt(double v) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, p);
}

struct entry {
    std::string value;
    int line = 0;
};

class value_reader {
public:
    value_reader(std::string key, entry e) : key_{std::move(key)}, e_{std::move(e)} {}

    [[noreturn]] void fail(const std::string& why) const {
        throw config_error("line " + std::to_string(e_.line) + ": " + key_ + ": " + why + " (got '" +
                           e_.value + "')");
    }

    double real() const { return parse_real(e_.value); }

    long long integer() const {
        long long v = 0;
        const auto& s = e_.value;
        auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || p != s.data() + s.size()) fail("expected an integer");
        return v;
    }

    std::size_t count(long long min = 0) const {
        const auto v = integer();
        if (v < min) fail("must be >= " + std::to_string(min));
        return static_cast<std::size_t>(v);
    }

    std::uint64_t u64() const {
        std::uint64_t v = 0;
        const auto& s = e_.value;
        auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || p != s.data() + s.size()) fail("expected a non-negative integer");
        return v;
    }

    bool boolean() const {
        if (e_.value == "true") return true;
        if (e_.value == "false") return false;
        fail("expected true or false");
    }

    const std::string& text() const { return e_.value; }

    std::vector<double> reals() const {
        std::vector<double> out;
        if (e_.value.empty()) return out;
        for (const auto& part : split(e_.value, ',')) out.push_back(parse_real(part));
        return out;
    }

    std::vector<doppler_interval> intervals() const {
        std::vector<doppler_interval> out;
        for (const auto& part : split(e_.value, ',')) {
            const auto ends = split(part, ':');
            if (ends.size() != 2) fail("expected lo:hi intervals separated by commas");
            out.push_back({parse_real(ends[0]), parse_real(ends[1])});
        }
        return out;
    }

    template <typename E>
    E choice(std::initializer_list<std::pair<const char*, E>> options) const {
        std::string names;
        for (const auto& [name, v] : options) {
            if (e_.value == name) return v;
            names += names.empty() ? name : std::string(", ") + name;
        }
        fail("expected one of " + names);
    }

private:
    double parse_real(const std::string& s) const {
        double v = 0.0;
        auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || p != s.data() + s.size() || s.empty()) fail("expected a number");
        return v;
    }

    std::string key_;
    entry e_;
};

}  // namespace detail

/*
 * Flat key = value text. Top-level keys come first; [traffic], [model],
 * [train], [defense], [fig3], [fig6] and [node.N] open sections. '#' starts a
 * comment. Unknown keys, duplicates and malformed values are errors naming the
 * key and the line.
 */
inline experiment_config parse_config(std::string_view text) {
    using detail::entry;
    using detail::value_reader;

    std::map<std::string, std::map<std::string, entry>> sections;
    std::vector<std::string> section_order;
    std::string current;
    sections[current];

    std::istringstream in{std::string(text)};
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        const auto line = detail::trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw config_error("line " + std::to_string(line_no) + ": unterminated section header");
            }
            current = detail::trim(std::string_view(line).substr(1, line.size() - 2));
            if (sections.contains(current)) {
                throw config_error("line " + std::to_string(line_no) + ": duplicate section [" + current + "]");
            }
            sections[current];
            section_order.push_back(current);
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw config_error("line " + std::to_string(line_no) + ": expected 'key = value'");
        }
        const auto key = detail::trim(std::string_view(line).substr(0, eq));
        const auto value = detail::trim(std::string_view(line).substr(eq + 1));
        if (key.empty()) {
            throw config_error("line " + std::to_string(line_no) + ": missing key");
        }
        auto& sec = sections[current];
        if (sec.contains(key)) {
            throw config_error("line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
        }
        sec[key] = entry{value, line_no};
    }

    experiment_config cfg;
    using setter = std::function<void(const value_reader&)>;

    auto apply = [](const std::string& section, std::map<std::string, entry>& entries,
                    const std::map<std::string, setter>& table) {
        for (auto& [key, e] : entries) {
            const auto full = section.empty() ? key : section + "." + key;
            auto it = table.find(key);
            if (it == table.end()) {
                throw config_error("line " + std::to_string(e.line) + ": unknown key '" + full + "'");
            }
            it->second(value_reader{full, e});
        }
    };

    // Required top-level keys.
    std::vector<std::string> missing;
    for (const char* k : {"master_seed", "rounds"}) {
        if (!sections[""].contains(k)) missing.push_back(k);
    }
    bool has_node = false;
    for (const auto& name : section_order) has_node = has_node || name.rfind("node.", 0) == 0;
    if (!missing.empty() || !has_node) {
        std::string msg = "missing required configuration:";
        for (const auto& k : missing) msg += " " + k;
        if (!has_node) msg += " [node.N] (at least one node section)";
        throw config_error(msg);
    }

    apply("", sections[""],
          {
              {"master_seed", [&](const value_reader& v) { cfg.master_seed = v.u64(); }},
              {"rounds", [&](const value_reader& v) { cfg.rounds = v.count(0); }},
              {"n_freq", [&](const value_reader& v) { cfg.dims.n_freq = v.count(1); }},
              {"n_time", [&](const value_reader& v) { cfg.dims.n_time = v.count(1); }},
              {"k_samples", [&](const value_reader& v) { cfg.k_samples = v.count(1); }},
              {"snr_grid", [&](const value_reader& v) { cfg.snr_grid = v.reals(); }},
              {"patterns_per_round", [&](const value_reader& v) { cfg.patterns_per_round = v.count(1); }},
              {"eval_patterns", [&](const value_reader& v) { cfg.eval_patterns = v.count(1); }},
              {"static_datasets", [&](const value_reader& v) { cfg.static_datasets = v.boolean(); }},
              {"aggregation_weights",
               [&](const value_reader& v) {
                   cfg.weighting = v.choice<aggregation_weighting>(
                       {{"equal", aggregation_weighting::equal},
                        {"dataset_size", aggregation_weighting::dataset_size}});
               }},
              {"threads", [&](const value_reader& v) { cfg.threads = v.count(1); }},
              {"output_dir", [&](const value_reader& v) { cfg.output_dir = v.text(); }},
          });

    for (const auto& name : section_order) {
        auto& entries = sections[name];
        if (name == "traffic") {
            apply(name, entries,
                  {
                      {"duty_target", [&](const value_reader& v) { cfg.traffic.duty_target = v.real(); }},
                      {"persist_time", [&](const value_reader& v) { cfg.traffic.persist_time = v.real(); }},
                      {"block_height_mean",
                       [&](const value_reader& v) { cfg.traffic.block_height_mean = v.real(); }},
                  });
        } else if (name == "model") {
            apply(name, entries,
                  {
                      {"hidden_layers", [&](const value_reader& v) { cfg.arch.hidden_layers = v.count(1); }},
                      {"channels",
                       [&](const value_reader& v) {
                           cfg.arch.channels_per_layer.clear();
                           for (double c : v.reals()) {
                               if (c < 1 || c != static_cast<double>(static_cast<std::size_t>(c))) {
                                   v.fail("channel counts must be positive integers");
                               }
                               cfg.arch.channels_per_layer.push_back(static_cast<std::size_t>(c));
                           }
                       }},
                      {"kernel_h", [&](const value_reader& v) { cfg.arch.kernel_h = v.count(1); }},
                      {"kernel_w", [&](const value_reader& v) { cfg.arch.kernel_w = v.count(1); }},
                      {"input",
                       [&](const value_reader& v) {
                           cfg.arch.input = v.choice<input_transform>(
                               {{"log_standardize", input_transform::log_standardize},
                                {"raw", input_transform::raw}});
                       }},
                      {"init",
                       [&](const value_reader& v) {
                           cfg.init = v.choice<init_mode>({{"random", init_mode::random}, {"zero", init_mode::zero}});
                       }},
                      {"head_bias_prior", [&](const value_reader& v) { cfg.head_bias_prior = v.boolean(); }},
                  });
        } else if (name == "train") {
            apply(name, entries,
                  {
                      {"learning_rate",
                       [&](const value_reader& v) {
                           cfg.train.learning_rate = v.real();
                           if (!(cfg.train.learning_rate > 0.0)) v.fail("must be > 0");
                       }},
                      {"local_epochs", [&](const value_reader& v) { cfg.train.local_epochs = v.count(1); }},
                      {"batch_size", [&](const value_reader& v) { cfg.train.batch_size = v.count(1); }},
                      {"decision_threshold",
                       [&](const value_reader& v) { cfg.train.decision_threshold = v.real(); }},
                  });
        } else if (name == "defense") {
            defense_config d;
            apply(name, entries,
                  {
                      {"enabled", [&](const value_reader& v) { d.enabled = v.boolean(); }},
                      {"accordance_threshold_pct",
                       [&](const value_reader& v) { d.accordance_threshold_pct = v.real(); }},
                      {"validation_patterns", [&](const value_reader& v) { d.validation_patterns = v.count(1); }},
                      {"aggregation",
                       [&](const value_reader& v) {
                           d.aggregation = v.choice<aggregation_method>(
                               {{"mean", aggregation_method::mean},
                                {"median", aggregation_method::median},
                                {"trimmed_mean", aggregation_method::trimmed_mean}});
                       }},
                      {"trim_fraction", [&](const value_reader& v) { d.trim_fraction = v.real(); }},
                      {"dp_sigma", [&](const value_reader& v) { d.dp_sigma = v.real(); }},
                      {"dp_target",
                       [&](const value_reader& v) {
                           d.dp_on = v.choice<dp_target>({{"energy", dp_target::energy}, {"model", dp_target::model}});
                       }},
                      {"peer_reduction",
                       [&](const value_reader& v) {
                           d.peers = v.choice<peer_reduction>({{"mean", peer_reduction::mean}, {"min", peer_reduction::min}});
                       }},
                      {"include_global_reference",
                       [&](const value_reader& v) { d.include_global_reference = v.boolean(); }},
                      {"server_channel",
                       [&](const value_reader& v) {
                           cfg.server_channel.kind = v.choice<channel_kind>(
                               {{"flat", channel_kind::flat}, {"epa", channel_kind::epa}, {"eva", channel_kind::eva}});
                       }},
                      {"server_doppler_hz", [&](const value_reader& v) { cfg.server_channel.doppler_hz = v.real(); }},
                      {"server_snr_db", [&](const value_reader& v) { cfg.server_snr_db = v.real(); }},
                  });
            cfg.defense = d;
        } else if (name == "fig3") {
            apply(name, entries,
                  {
                      {"imports_per_tester", [&](const value_reader& v) { cfg.imports_per_tester = v.count(1); }},
                  });
        } else if (name == "fig6") {
            apply(name, entries,
                  {
                      {"thresholds", [&](const value_reader& v) { cfg.thresholds_pct = v.reals(); }},
                  });
        } else if (name.rfind("node.", 0) == 0) {
            node_config n;
            const auto id_text = name.substr(5);
            std::uint32_t id = 0;
            auto [p, ec] = std::from_chars(id_text.data(), id_text.data() + id_text.size(), id);
            if (ec != std::errc{} || p != id_text.data() + id_text.size()) {
                throw config_error("section [" + name + "]: node id must be a non-negative integer");
            }
            n.id = id;
            if (!entries.contains("role")) {
                throw config_error("section [" + name + "]: missing required key 'role'");
            }
            // Attack keys are collected first and assembled once the kind is known.
            std::optional<std::string> kind;
            ssdf_attack ssdf;
            model_poison_attack poison;
            free_ride_attack ride;
            pue_attack pue;
            std::optional<std::pair<double, double>> pue_rows;
            std::set<std::string> attack_keys_seen;
            auto attack_key = [&](const char* k, std::function<void(const value_reader&)> f) {
                return std::pair<const std::string, setter>{
                    k, [k, f, &attack_keys_seen](const value_reader& v) {
                        attack_keys_seen.insert(k);
                        f(v);
                    }};
            };
            apply(name, entries,
                  {
                      {"role",
                       [&](const value_reader& v) {
                           n.role = v.choice<node_role>({{"honest", node_role::honest},
                                                         {"attacker", node_role::attacker},
                                                         {"tester", node_role::tester}});
                       }},
                      {"channel",
                       [&](const value_reader& v) {
                           n.channel.kind = v.choice<channel_kind>(
                               {{"flat", channel_kind::flat}, {"epa", channel_kind::epa}, {"eva", channel_kind::eva}});
                       }},
                      {"doppler_hz", [&](const value_reader& v) { n.channel.doppler_hz = v.real(); }},
                      {"doppler_range", [&](const value_reader& v) { n.doppler_ranges = v.intervals(); }},
                      {"snr_db", [&](const value_reader& v) { n.mean_snr_db = v.real(); }},
                      {"patterns", [&](const value_reader& v) { n.patterns = v.count(1); }},
                      {"attack", [&](const value_reader& v) {
                           v.choice<int>({{"ssdf", 0}, {"model_poison", 1}, {"free_ride", 2}, {"pue", 3}});
                           kind = v.text();
                       }},
                      attack_key("ssdf_mode",
                                 [&](const value_reader& v) {
                                     ssdf.mode = v.choice<ssdf_mode>({{"selfish", ssdf_mode::selfish},
                                                                      {"interference", ssdf_mode::interference},
                                                                      {"confusing", ssdf_mode::confusing}});
                                 }),
                      attack_key("ssdf_fraction", [&](const value_reader& v) { ssdf.fraction = v.real(); }),
                      attack_key("ssdf_variant",
                                 [&](const value_reader& v) {
                                     ssdf.variant = v.choice<ssdf_variant>(
                                         {{"force_occupied_fraction", ssdf_variant::force_occupied_fraction},
                                          {"flip_free_fraction", ssdf_variant::flip_free_fraction}});
                                 }),
                      attack_key("poison_strategy",
                                 [&](const value_reader& v) {
                                     poison.strategy = v.choice<poison_strategy>(
                                         {{"sign_flip", poison_strategy::sign_flip},
                                          {"scale", poison_strategy::scale},
                                          {"random", poison_strategy::random}});
                                 }),
                      attack_key("poison_factor", [&](const value_reader& v) { poison.factor = v.real(); }),
                      attack_key("poison_sigma", [&](const value_reader& v) { poison.sigma = v.real(); }),
                      attack_key("free_ride_sigma", [&](const value_reader& v) { ride.sigma = v.real(); }),
                      attack_key("pue_power", [&](const value_reader& v) { pue.power = v.real(); }),
                      attack_key("pue_freq_rows",
                                 [&](const value_reader& v) {
                                     const auto r = v.reals();
                                     if (r.size() != 2 || r[0] < 0 || r[1] < r[0]) {
                                         v.fail("expected 'first, last' frequency rows");
                                     }
                                     pue_rows = std::pair{r[0], r[1]};
                                 }),
                  });
            if (kind) {
                auto allowed = [&](std::initializer_list<const char*> keys) {
                    for (const auto& k : attack_keys_seen) {
                        if (std::none_of(keys.begin(), keys.end(), [&](const char* a) { return k == a; })) {
                            throw config_error("line " + std::to_string(entries[k].line) + ": " + name + "." + k +
                                               ": not valid for attack = " + *kind);
                        }
                    }
                };
                if (*kind == "ssdf") {
                    allowed({"ssdf_mode", "ssdf_fraction", "ssdf_variant"});
                    n.attack = ssdf;
                } else if (*kind == "model_poison") {
                    allowed({"poison_strategy", "poison_factor", "poison_sigma"});
                    n.attack = poison;
                } else if (*kind == "free_ride") {
                    allowed({"free_ride_sigma"});
                    n.attack = ride;
                } else {
                    allowed({"pue_power", "pue_freq_rows"});
                    if (pue_rows) {
                        pue.region = binary_grid{cfg.dims, 0};
                        const auto first = static_cast<std::size_t>(pue_rows->first);
                        const auto last = std::min(cfg.dims.n_freq - 1, static_cast<std::size_t>(pue_rows->second));
                        for (std::size_t f = first; f <= last && f < cfg.dims.n_freq; ++f) {
                            for (std::size_t t = 0; t < cfg.dims.n_time; ++t) pue.region(f, t) = 1;
                        }
                    }
                    n.attack = pue;
                }
            } else if (!attack_keys_seen.empty()) {
                const auto& k = *attack_keys_seen.begin();
                throw config_error("line " + std::to_string(entries[k].line) + ": " + name + "." + k +
                                   ": requires an 'attack' key");
            }
            cfg.nodes.push_back(std::move(n));
        } else {
            throw config_error("unknown section [" + name + "]");
        }
    }
    std::sort(cfg.nodes.begin(), cfg.nodes.end(),
              [](const node_config& a, const node_config& b) { return a.id < b.id; });
    validate(cfg);
    return cfg;
}

/// Canonical text of a configuration with every default spelled out.
inline std::string to_text(const experiment_config& cfg) {
    using detail::fmt;
    std::ostringstream o;
    auto list = [](const std::vector<double>& v) {
        std::string s;
        for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + fmt(v[i]);
        return s;
    };
    o << "master_seed = " << cfg.master_seed << "\n"
      << "rounds = " << cfg.rounds << "\n"
      << "n_freq = " << cfg.dims.n_freq << "\n"
      << "n_time = " << cfg.dims.n_time << "\n"
      << "k_samples = " << cfg.k_samples << "\n"
      << "snr_grid = " << list(cfg.snr_grid) << "\n"
      << "patterns_per_round = " << cfg.patterns_per_round << "\n"
      << "eval_patterns = " << cfg.eval_patterns << "\n"
      << "static_datasets = " << (cfg.static_datasets ? "true" : "false") << "\n"
      << "aggregation_weights = " << (cfg.weighting == aggregation_weighting::equal ? "equal" : "dataset_size")
      << "\n"
      << "threads = " << cfg.threads << "\n"
      << "output_dir = " << cfg.output_dir << "\n";

    o << "\n[traffic]\n"
      << "duty_target = " << fmt(cfg.traffic.duty_target) << "\n"
      << "persist_time = " << fmt(cfg.traffic.persist_time) << "\n"
      << "block_height_mean = " << fmt(cfg.traffic.block_height_mean) << "\n";

    std::vector<double> ch(cfg.arch.channels_per_layer.begin(), cfg.arch.channels_per_layer.end());
    o << "\n[model]\n"
      << "hidden_layers = " << cfg.arch.hidden_layers << "\n"
      << "channels = " << list(ch) << "\n"
      << "kernel_h = " << cfg.arch.kernel_h << "\n"
      << "kernel_w = " << cfg.arch.kernel_w << "\n"
      << "input = " << to_string(cfg.arch.input) << "\n"
      << "init = " << (cfg.init == init_mode::zero ? "zero" : "random") << "\n"
      << "head_bias_prior = " << (cfg.head_bias_prior ? "true" : "false") << "\n";

    o << "\n[train]\n"
      << "learning_rate = " << fmt(cfg.train.learning_rate) << "\n"
      << "local_epochs = " << cfg.train.local_epochs << "\n"
      << "batch_size = " << cfg.train.batch_size << "\n"
      << "decision_threshold = " << fmt(cfg.train.decision_threshold) << "\n";

    if (cfg.defense) {
        const auto& d = *cfg.defense;
        o << "\n[defense]\n"
          << "enabled = " << (d.enabled ? "true" : "false") << "\n"
          << "accordance_threshold_pct = " << fmt(d.accordance_threshold_pct) << "\n"
          << "validation_patterns = " << d.validation_patterns << "\n"
          << "aggregation = " << to_string(d.aggregation) << "\n"
          << "trim_fraction = " << fmt(d.trim_fraction) << "\n"
          << "dp_sigma = " << fmt(d.dp_sigma) << "\n"
          << "dp_target = " << (d.dp_on == dp_target::energy ? "energy" : "model") << "\n"
          << "peer_reduction = " << (d.peers == peer_reduction::mean ? "mean" : "min") << "\n"
          << "include_global_reference = " << (d.include_global_reference ? "true" : "false") << "\n"
          << "server_channel = " << to_string(cfg.server_channel.kind) << "\n"
          << "server_doppler_hz = " << fmt(cfg.server_channel.doppler_hz) << "\n"
          << "server_snr_db = " << fmt(cfg.server_snr_db) << "\n";
    }

    o << "\n[fig3]\nimports_per_tester = " << cfg.imports_per_tester << "\n";
    o << "\n[fig6]\nthresholds = " << list(cfg.thresholds_pct) << "\n";

    for (const auto& n : cfg.nodes) {
        o << "\n[node." << n.id << "]\n"
          << "role = " << to_string(n.role) << "\n"
          << "channel = " << to_string(n.channel.kind) << "\n";
        if (n.doppler_ranges.empty()) {
            o << "doppler_hz = " << fmt(n.channel.doppler_hz) << "\n";
        } else {
            o << "doppler_range = ";
            for (std::size_t i = 0; i < n.doppler_ranges.size(); ++i) {
                o << (i ? ", " : "") << fmt(n.doppler_ranges[i].lo) << ":" << fmt(n.doppler_ranges[i].hi);
            }
            o << "\n";
        }
        o << "snr_db = " << fmt(n.mean_snr_db) << "\n";
        if (n.patterns) o << "patterns = " << *n.patterns << "\n";
        if (n.attack) {
            std::visit(
                [&](const auto& a) {
                    using T = std::decay_t<decltype(a)>;
                    if constexpr (std::is_same_v<T, ssdf_attack>) {
                        const char* mode = a.mode == ssdf_mode::selfish        ? "selfish"
                                           : a.mode == ssdf_mode::interference ? "interference"
                                                                               : "confusing";
                        o << "attack = ssdf\nssdf_mode = " << mode << "\nssdf_fraction = " << fmt(a.fraction)
                          << "\nssdf_variant = "
                          << (a.variant == ssdf_variant::force_occupied_fraction ? "force_occupied_fraction"
                                                                                 : "flip_free_fraction")
                          << "\n";
                    } else if constexpr (std::is_same_v<T, model_poison_attack>) {
                        const char* s = a.strategy == poison_strategy::sign_flip ? "sign_flip"
                                        : a.strategy == poison_strategy::scale   ? "scale"
                                                                                 : "random";
                        o << "attack = model_poison\npoison_strategy = " << s << "\npoison_factor = " << fmt(a.factor)
                          << "\npoison_sigma = " << fmt(a.sigma) << "\n";
                    } else if constexpr (std::is_same_v<T, free_ride_attack>) {
                        o << "attack = free_ride\nfree_ride_sigma = " << fmt(a.sigma) << "\n";
                    } else {
                        o << "attack = pue\npue_power = " << fmt(a.power) << "\n";
                        if (a.region.size() > 0) {
                            std::size_t first = a.region.dims().n_freq, last = 0;
                            for (std::size_t f = 0; f < a.region.dims().n_freq; ++f) {
                                if (a.region(f, 0)) {
                                    first = std::min(first, f);
                                    last = std::max(last, f);
                                }
                            }
                            if (first <= last) o << "pue_freq_rows = " << first << ", " << last << "\n";
                        }
                    }
                },
                *n.attack);
        }
    }
    return o.str();
}

/// Scales the per-node data volume up by 25x (5000 patterns
/// per SNR instead of 200).
inline void apply_paper_scale(experiment_config& cfg) {
    cfg.patterns_per_round *= 25;
    cfg.eval_patterns *= 25;
    for (auto& n : cfg.nodes) {
        if (n.patterns) *n.patterns *= 25;
    }
}

}  // namespace fedspectrum

#endif  // FEDSPECTRUM_CONFIG_HPP
