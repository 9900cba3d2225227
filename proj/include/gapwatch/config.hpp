#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "gapwatch/simulator.hpp"

namespace gapwatch {

/// Typed view of every configuration key. Field defaults are the shipped
/// defaults (an empty config file yields exactly these).
struct Settings {
    // sim.*
    double dt = 0.1;
    double duration = 250.0;
    int n_followers = 5;
    std::uint64_t seed = 1;
    bool noise_enabled = true;
    double noise_var = 0.01;
    int window_len = 50;
    std::string initial = "equilibrium";  // or "explicit"
    std::string init_states;              // "x,v,a; x,v,a; ..." when explicit

    // controller.*
    double tau_star = 1.6;
    double s0 = 5.0;
    double T = 0.45;
    double K = 1.0;
    double k1 = 0.45;
    double k2 = 1.5;
    double k3 = -0.3;
    double kf = 0.6;
    double theta = 0.2;
    double u_min = -5.0;
    double u_max = 3.0;

    // prior.*
    double prior_mean_s0 = 1.0;
    double prior_mean_tau = 1.6;
    double prior_var_s0 = 1e-4;
    double prior_var_tau = 0.125;
    double prior_cov_s0_tau = -1e-5;

    // chart.* (center line always tracks controller.tau_star)
    double chart_sigma = 0.125;
    double chart_L = 2.0;

    // trigger.*
    int trigger_k = 3;
    double trigger_window = 35.0;
    std::string trigger_count_mode = "excursions";  // or "samples"

    // retune.*
    double retune_target = 1.0;
    std::string retune_scope = "vehicle";  // or "platoon"
    int retune_max_changes = 1;

    // lead.*
    std::string lead_source = "synth";  // or "csv"
    std::string lead_csv_path;
    double lead_v_low = 8.9408;    // 20 mph
    double lead_v_high = 35.7632;  // 80 mph
    double lead_a_mag = 3.2;
    int lead_cycles = 15;
    double lead_v0 = 8.9408;
    double lead_x0 = 0.0;

    /// Keys that were explicitly assigned (file or override).
    std::set<std::string> explicitly_set;
};

/// Parse `key = value` lines ('#' starts a comment). Throws UnknownKey /
/// TypeMismatch with the offending key named.
Settings parse_settings(const std::string& text);

/// Apply "key=value" override strings on top of existing settings.
void apply_overrides(Settings& settings, const std::vector<std::string>& overrides);

/// File values over defaults, overrides over file values.
Settings load_settings(const std::string& path, const std::vector<std::string>& overrides);

/// Canonical form: every key, sorted, one `key = value` per line, shortest
/// round-trip float formatting. dump(parse(dump(s))) == dump(s).
std::string dump_settings(const Settings& settings);

/// Build and validate the runnable configuration (loads or synthesizes the
/// lead profile). Throws InvalidConfig / InvariantViolation on bad settings.
SimConfig build_sim_config(const Settings& settings);

/// load_settings + build_sim_config.
SimConfig load_config(const std::string& path, const std::vector<std::string>& overrides);

}  // namespace gapwatch
