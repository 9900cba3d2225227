#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gapwatch/config.hpp"
#include "gapwatch/errors.hpp"
#include "gapwatch/io.hpp"
#include "gapwatch/simulator.hpp"
#include "gapwatch/trajectory.hpp"
#include "quadrature_oracle.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;

struct CommonOptions {
    std::string config_path;
    std::vector<std::string> overrides;
    std::string out_dir;
    long long seed = -1;
    bool seed_set = false;
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
    cmd->add_option("--config", opts.config_path, "Configuration file (dotted-key format)");
    cmd->add_option("--set", opts.overrides, "Override KEY=VALUE (repeatable, wins over the file)");
    cmd->add_option("--out", opts.out_dir, "Output directory (fallback: $GAPWATCH_OUT, then '.')");
    cmd->add_option("--seed", opts.seed, "Shorthand for --set sim.seed=N (wins over --set)")
        ->each([&opts](const std::string&) { opts.seed_set = true; });
}

gapwatch::Settings resolve_settings(const CommonOptions& opts) {
    std::vector<std::string> overrides = opts.overrides;
    if (opts.seed_set) overrides.push_back("sim.seed=" + std::to_string(opts.seed));
    if (opts.config_path.empty()) {
        gapwatch::Settings settings;
        gapwatch::apply_overrides(settings, overrides);
        return settings;
    }
    return gapwatch::load_settings(opts.config_path, overrides);
}

std::filesystem::path resolve_out_dir(const CommonOptions& opts) {
    if (!opts.out_dir.empty()) return opts.out_dir;
    if (const char* env = std::getenv("GAPWATCH_OUT"); env != nullptr && *env != '\0') return env;
    return ".";
}

void write_file(const std::filesystem::path& path, const auto& writer) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw gapwatch::InvalidConfig("cannot write " + path.string());
    writer(out);
}

int cmd_run(const CommonOptions& opts) {
    const gapwatch::SimConfig config = gapwatch::build_sim_config(resolve_settings(opts));
    const auto out_dir = resolve_out_dir(opts);
    std::filesystem::create_directories(out_dir);

    const gapwatch::RunResult result = gapwatch::run(config);

    write_file(out_dir / "records.csv",
               [&](std::ostream& s) { gapwatch::write_records_csv(s, result.records); });
    write_file(out_dir / "events.jsonl",
               [&](std::ostream& s) { gapwatch::write_events_jsonl(s, result.events); });
    write_file(out_dir / "summary.json",
               [&](std::ostream& s) { gapwatch::write_summary_json(s, result.summary); });

    if (result.collided) {
        std::cerr << "ERROR CollisionDetected: spacing reached zero at t = " << result.collision_time
                  << " s; partial output written to " << out_dir.string() << '\n';
        return kExitRuntime;
    }
    std::cout << "wrote " << (out_dir / "records.csv").string() << ", events.jsonl, summary.json ("
              << result.records.size() << " rows, " << result.events.size() << " events)\n";
    return kExitOk;
}

int cmd_synth_profile(const CommonOptions& opts) {
    const gapwatch::Settings settings = resolve_settings(opts);
    const gapwatch::AccelProfile profile = gapwatch::synth_oscillation_profile(
        settings.lead_v_low, settings.lead_v_high, settings.lead_a_mag, settings.lead_cycles,
        settings.dt);
    const auto out_dir = resolve_out_dir(opts);
    std::filesystem::create_directories(out_dir);
    const auto path = out_dir / "profile.csv";
    write_file(path, [&](std::ostream& s) {
        s << "t,a\n";
        char buf[96];
        for (std::size_t i = 0; i < profile.size(); ++i) {
            std::snprintf(buf, sizeof(buf), "%.9g,%.9g\n", profile.t[i], profile.a[i]);
            s << buf;
        }
    });
    std::cout << "wrote " << path.string() << " (" << profile.size() << " samples)\n";
    return kExitOk;
}

int cmd_check_config(const CommonOptions& opts) {
    const gapwatch::Settings settings = resolve_settings(opts);
    gapwatch::build_sim_config(settings);  // full validation, including stability
    std::cout << "configuration ok\n" << gapwatch::dump_settings(settings);
    return kExitOk;
}

int cmd_oracle(const CommonOptions& opts) {
    const gapwatch::Settings settings = resolve_settings(opts);
    const auto cases = gapwatch::oracle::random_cases(settings.seed, 100);
    double worst = 0.0;
    for (const auto& c : cases) {
        const auto closed = gapwatch::posterior_update(c.prior, c.batch);
        const auto quad = gapwatch::oracle::posterior_by_quadrature(c.prior, c.batch);
        worst = std::max(worst, gapwatch::oracle::relative_deviation(closed, quad));
    }
    std::cout << "max relative deviation over " << cases.size() << " cases: " << worst << '\n';
    if (worst > 1e-5) {
        std::cerr << "ERROR OracleMismatch: deviation " << worst << " exceeds 1e-5\n";
        return kExitValidation;
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Platoon simulator with real-time time-gap monitoring"};
    app.require_subcommand(1);

    CommonOptions run_opts, synth_opts, check_opts, oracle_opts;
    CLI::App* run_cmd = app.add_subcommand("run", "Run a scenario and write records/events/summary");
    add_common(run_cmd, run_opts);
    CLI::App* synth_cmd =
        app.add_subcommand("synth-profile", "Write the synthetic oscillation profile as CSV");
    add_common(synth_cmd, synth_opts);
    CLI::App* check_cmd =
        app.add_subcommand("check-config", "Validate a configuration without running");
    add_common(check_cmd, check_opts);
    CLI::App* oracle_cmd = app.add_subcommand(
        "oracle", "Cross-check the closed-form posterior against grid quadrature");
    add_common(oracle_cmd, oracle_opts);

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) return cmd_run(run_opts);
        if (synth_cmd->parsed()) return cmd_synth_profile(synth_opts);
        if (check_cmd->parsed()) return cmd_check_config(check_opts);
        if (oracle_cmd->parsed()) return cmd_oracle(oracle_opts);
    } catch (const gapwatch::CollisionDetected& e) {
        std::cerr << "ERROR " << e.code() << ": " << e.what() << '\n';
        return kExitRuntime;
    } catch (const gapwatch::Error& e) {
        std::cerr << "ERROR " << e.code() << ": " << e.what() << '\n';
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "ERROR Internal: " << e.what() << '\n';
        return kExitRuntime;
    }
    return kExitValidation;
}
