#include "gapwatch/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "gapwatch/errors.hpp"
#include "gapwatch/trajectory.hpp"

namespace gapwatch {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string format_double(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

double parse_double_or_throw(const std::string& key, const std::string& value) {
    const char* begin = value.c_str();
    char* end = nullptr;
    const double parsed = std::strtod(begin, &end);
    if (end == begin || *end != '\0' || !std::isfinite(parsed)) {
        throw TypeMismatch(key + ": expected a finite number, got '" + value + "'");
    }
    return parsed;
}

long long parse_int_or_throw(const std::string& key, const std::string& value) {
    long long parsed = 0;
    const auto res = std::from_chars(value.data(), value.data() + value.size(), parsed);
    if (res.ec != std::errc{} || res.ptr != value.data() + value.size()) {
        throw TypeMismatch(key + ": expected an integer, got '" + value + "'");
    }
    return parsed;
}

bool parse_bool_or_throw(const std::string& key, const std::string& value) {
    if (value == "true") return true;
    if (value == "false") return false;
    throw TypeMismatch(key + ": expected true or false, got '" + value + "'");
}

struct KeyHandler {
    std::function<void(Settings&, const std::string&, const std::string&)> set;
    std::function<std::string(const Settings&)> get;
};

using HandlerMap = std::map<std::string, KeyHandler>;

void add_double(HandlerMap& m, const std::string& key, double Settings::* field) {
    m[key] = {[field](Settings& s, const std::string& k, const std::string& v) {
                  s.*field = parse_double_or_throw(k, v);
              },
              [field](const Settings& s) { return format_double(s.*field); }};
}

void add_int(HandlerMap& m, const std::string& key, int Settings::* field) {
    m[key] = {[field](Settings& s, const std::string& k, const std::string& v) {
                  const long long parsed = parse_int_or_throw(k, v);
                  s.*field = static_cast<int>(parsed);
              },
              [field](const Settings& s) { return std::to_string(s.*field); }};
}

void add_bool(HandlerMap& m, const std::string& key, bool Settings::* field) {
    m[key] = {[field](Settings& s, const std::string& k, const std::string& v) {
                  s.*field = parse_bool_or_throw(k, v);
              },
              [field](const Settings& s) { return (s.*field) ? "true" : "false"; }};
}

void add_string(HandlerMap& m, const std::string& key, std::string Settings::* field) {
    m[key] = {[field](Settings& s, const std::string&, const std::string& v) { s.*field = v; },
              [field](const Settings& s) { return s.*field; }};
}

const HandlerMap& handlers() {
    static const HandlerMap map = [] {
        HandlerMap m;
        add_double(m, "sim.dt", &Settings::dt);
        add_double(m, "sim.duration", &Settings::duration);
        add_int(m, "sim.n_followers", &Settings::n_followers);
        m["sim.seed"] = {[](Settings& s, const std::string& k, const std::string& v) {
                             const long long parsed = parse_int_or_throw(k, v);
                             s.seed = static_cast<std::uint64_t>(parsed);
                         },
                         [](const Settings& s) { return std::to_string(s.seed); }};
        add_bool(m, "sim.noise_enabled", &Settings::noise_enabled);
        add_double(m, "sim.noise_var", &Settings::noise_var);
        add_int(m, "sim.window_len", &Settings::window_len);
        add_string(m, "sim.initial", &Settings::initial);
        add_string(m, "sim.init_states", &Settings::init_states);

        add_double(m, "controller.tau_star", &Settings::tau_star);
        add_double(m, "controller.s0", &Settings::s0);
        add_double(m, "controller.T", &Settings::T);
        add_double(m, "controller.K", &Settings::K);
        add_double(m, "controller.k1", &Settings::k1);
        add_double(m, "controller.k2", &Settings::k2);
        add_double(m, "controller.k3", &Settings::k3);
        add_double(m, "controller.kf", &Settings::kf);
        add_double(m, "controller.theta", &Settings::theta);
        add_double(m, "controller.u_min", &Settings::u_min);
        add_double(m, "controller.u_max", &Settings::u_max);

        add_double(m, "prior.mean_s0", &Settings::prior_mean_s0);
        add_double(m, "prior.mean_tau", &Settings::prior_mean_tau);
        add_double(m, "prior.var_s0", &Settings::prior_var_s0);
        add_double(m, "prior.var_tau", &Settings::prior_var_tau);
        add_double(m, "prior.cov_s0_tau", &Settings::prior_cov_s0_tau);

        add_double(m, "chart.sigma", &Settings::chart_sigma);
        add_double(m, "chart.L", &Settings::chart_L);

        add_int(m, "trigger.k", &Settings::trigger_k);
        add_double(m, "trigger.window", &Settings::trigger_window);
        add_string(m, "trigger.count_mode", &Settings::trigger_count_mode);

        add_double(m, "retune.target", &Settings::retune_target);
        add_string(m, "retune.scope", &Settings::retune_scope);
        add_int(m, "retune.max_changes", &Settings::retune_max_changes);

        add_string(m, "lead.source", &Settings::lead_source);
        add_string(m, "lead.csv_path", &Settings::lead_csv_path);
        add_double(m, "lead.v_low", &Settings::lead_v_low);
        add_double(m, "lead.v_high", &Settings::lead_v_high);
        add_double(m, "lead.a_mag", &Settings::lead_a_mag);
        add_int(m, "lead.cycles", &Settings::lead_cycles);
        add_double(m, "lead.v0", &Settings::lead_v0);
        add_double(m, "lead.x0", &Settings::lead_x0);
        return m;
    }();
    return map;
}

void assign(Settings& settings, const std::string& key, const std::string& value) {
    const auto& map = handlers();
    const auto it = map.find(key);
    if (it == map.end()) throw UnknownKey("unknown configuration key '" + key + "'");
    it->second.set(settings, key, value);
    settings.explicitly_set.insert(key);
}

std::vector<VehicleState> parse_explicit_states(const std::string& text) {
    std::vector<VehicleState> states;
    std::istringstream stream(text);
    std::string triple;
    while (std::getline(stream, triple, ';')) {
        triple = trim(triple);
        if (triple.empty()) continue;
        std::istringstream fields(triple);
        std::string cell;
        std::vector<double> values;
        while (std::getline(fields, cell, ',')) {
            values.push_back(parse_double_or_throw("sim.init_states", trim(cell)));
        }
        if (values.size() != 3) {
            throw TypeMismatch("sim.init_states: each state needs 'x,v,a', got '" + triple + "'");
        }
        states.push_back(VehicleState{values[0], values[1], values[2], 0.0});
    }
    return states;
}

}  // namespace

Settings parse_settings(const std::string& text) {
    Settings settings;
    std::istringstream stream(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(stream, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw TypeMismatch("line " + std::to_string(line_no) + ": expected 'key = value'");
        }
        assign(settings, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return settings;
}

void apply_overrides(Settings& settings, const std::vector<std::string>& overrides) {
    for (const auto& entry : overrides) {
        const auto eq = entry.find('=');
        if (eq == std::string::npos) {
            throw TypeMismatch("override '" + entry + "': expected KEY=VALUE");
        }
        assign(settings, trim(entry.substr(0, eq)), trim(entry.substr(eq + 1)));
    }
}

Settings load_settings(const std::string& path, const std::vector<std::string>& overrides) {
    std::ifstream file(path, std::ios::binary);
    if (!file) throw InvalidConfig("cannot open config file: " + path);
    std::ostringstream buf;
    buf << file.rdbuf();
    Settings settings = parse_settings(buf.str());
    apply_overrides(settings, overrides);
    return settings;
}

std::string dump_settings(const Settings& settings) {
    std::string out;
    for (const auto& [key, handler] : handlers()) {  // std::map: sorted keys
        out += key;
        out += " = ";
        out += handler.get(settings);
        out += '\n';
    }
    return out;
}

SimConfig build_sim_config(const Settings& settings) {
    SimConfig config;
    config.dt = settings.dt;
    config.duration = settings.duration;
    config.n_followers = settings.n_followers;
    config.rng_seed = settings.seed;
    config.noise_enabled = settings.noise_enabled;
    config.noise_var = settings.noise_var;
    if (settings.window_len < 1) throw InvariantViolation("sim.window_len must be >= 1");
    config.window_len = static_cast<std::size_t>(settings.window_len);

    config.controller.tau_star = settings.tau_star;
    config.controller.s0 = settings.s0;
    config.controller.T = settings.T;
    config.controller.K = settings.K;
    config.controller.k = {settings.k1, settings.k2, settings.k3};
    config.controller.kf = settings.kf;
    config.controller.theta = settings.theta;
    config.controller.u_min = settings.u_min;
    config.controller.u_max = settings.u_max;

    config.prior.mean = {settings.prior_mean_s0, settings.prior_mean_tau};
    config.prior.cov = {settings.prior_var_s0, settings.prior_cov_s0_tau,
                        settings.prior_cov_s0_tau, settings.prior_var_tau};

    config.chart = ChartSpec{settings.tau_star, settings.chart_sigma, settings.chart_L};
    config.trigger = TriggerRule{settings.trigger_k, settings.trigger_window};
    if (settings.trigger_count_mode == "excursions") {
        config.counting = ViolationCounting::excursions;
    } else if (settings.trigger_count_mode == "samples") {
        config.counting = ViolationCounting::samples;
    } else {
        throw TypeMismatch("trigger.count_mode must be 'excursions' or 'samples'");
    }

    config.retune_target = settings.retune_target;
    if (settings.retune_scope == "vehicle") {
        config.retune_scope = RetuneScope::vehicle;
    } else if (settings.retune_scope == "platoon") {
        config.retune_scope = RetuneScope::platoon;
    } else {
        throw TypeMismatch("retune.scope must be 'vehicle' or 'platoon'");
    }
    config.max_retunes = settings.retune_max_changes;

    if (!(settings.dt > 0.0)) throw InvariantViolation("sim.dt must be > 0");
    if (settings.lead_source == "synth") {
        config.lead_profile =
            synth_oscillation_profile(settings.lead_v_low, settings.lead_v_high,
                                      settings.lead_a_mag, settings.lead_cycles, settings.dt);
    } else if (settings.lead_source == "csv") {
        if (settings.lead_csv_path.empty()) {
            throw InvalidConfig("lead.csv_path must be set when lead.source = csv");
        }
        // An externally recorded profile carries no start state; require both
        // to be given rather than guessing.
        if (!settings.explicitly_set.count("lead.v0") || !settings.explicitly_set.count("lead.x0")) {
            throw InvalidConfig("lead.v0 and lead.x0 must be set explicitly when lead.source = csv");
        }
        config.lead_profile = load_accel_profile(settings.lead_csv_path, settings.dt);
    } else {
        throw TypeMismatch("lead.source must be 'synth' or 'csv'");
    }
    config.lead_v0 = settings.lead_v0;
    config.lead_x0 = settings.lead_x0;

    if (settings.initial == "equilibrium") {
        config.init_mode = InitMode::equilibrium;
    } else if (settings.initial == "explicit") {
        config.init_mode = InitMode::explicit_states;
        config.explicit_states = parse_explicit_states(settings.init_states);
    } else {
        throw TypeMismatch("sim.initial must be 'equilibrium' or 'explicit'");
    }

    config.validate();
    return config;
}

SimConfig load_config(const std::string& path, const std::vector<std::string>& overrides) {
    return build_sim_config(load_settings(path, overrides));
}

}  // namespace gapwatch
