#include "gapwatch/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "gapwatch/errors.hpp"

namespace gapwatch {

namespace {

bool parse_double(const std::string& cell, double& out) {
    const char* begin = cell.c_str();
    char* end = nullptr;
    out = std::strtod(begin, &end);
    if (end == begin) return false;
    while (*end == ' ' || *end == '\t' || *end == '\r') ++end;
    return *end == '\0';
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

// True when the sample times already sit on the t0 + k*dt grid.
bool on_grid(const std::vector<double>& t, double dt) {
    const double t0 = t.front();
    for (std::size_t k = 0; k < t.size(); ++k) {
        const double expected = t0 + static_cast<double>(k) * dt;
        if (std::abs(t[k] - expected) > 1e-9 * std::max(1.0, std::abs(expected))) return false;
    }
    return true;
}

}  // namespace

AccelProfile parse_accel_csv(const std::string& text, double expected_dt) {
    if (expected_dt <= 0.0) throw InvalidRange("expected_dt must be > 0");

    std::vector<double> times;
    std::vector<double> accels;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    bool first_data_line = true;

    while (std::getline(in, line)) {
        ++line_no;
        line = trim(line);
        if (line.empty()) continue;

        std::vector<std::string> cells;
        std::size_t pos = 0;
        while (true) {
            const auto comma = line.find(',', pos);
            cells.push_back(trim(line.substr(pos, comma - pos)));
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }

        double tv = 0.0;
        if (first_data_line && !parse_double(cells[0], tv)) {
            // Header row; skip it.
            first_data_line = false;
            continue;
        }
        first_data_line = false;

        if (cells.size() != 2) {
            throw MalformedRow("line " + std::to_string(line_no) + ": expected 2 columns, got " +
                               std::to_string(cells.size()));
        }
        double av = 0.0;
        if (!parse_double(cells[0], tv) || !parse_double(cells[1], av)) {
            throw MalformedRow("line " + std::to_string(line_no) + ": non-numeric cell");
        }
        if (!std::isfinite(tv) || !std::isfinite(av)) {
            throw MalformedRow("line " + std::to_string(line_no) + ": non-finite value");
        }
        if (!times.empty() && tv <= times.back()) {
            throw NonMonotonicTime("line " + std::to_string(line_no) + ": t = " + std::to_string(tv) +
                                   " does not increase past " + std::to_string(times.back()));
        }
        times.push_back(tv);
        accels.push_back(av);
    }

    if (times.empty()) throw EmptyProfile("no data rows");

    AccelProfile profile;
    profile.dt = expected_dt;

    if (times.size() == 1 || on_grid(times, expected_dt)) {
        profile.t = std::move(times);
        profile.a = std::move(accels);
        return profile;
    }

    // Resample by linear interpolation onto t0 + k*expected_dt, covering the
    // input span up to the last grid point inside it.
    const double t0 = times.front();
    const double span = times.back() - t0;
    const auto n_out = static_cast<std::size_t>(std::floor(span / expected_dt + 1e-9)) + 1;
    profile.t.reserve(n_out);
    profile.a.reserve(n_out);
    std::size_t j = 0;
    for (std::size_t k = 0; k < n_out; ++k) {
        const double tg = t0 + static_cast<double>(k) * expected_dt;
        while (j + 2 < times.size() && times[j + 1] <= tg) ++j;
        const double w = (tg - times[j]) / (times[j + 1] - times[j]);
        profile.t.push_back(tg);
        profile.a.push_back(accels[j] + w * (accels[j + 1] - accels[j]));
    }
    return profile;
}

AccelProfile load_accel_profile(const std::string& path, double expected_dt) {
    std::ifstream file(path, std::ios::binary);
    if (!file) throw EmptyProfile("cannot open file: " + path);
    std::ostringstream buf;
    buf << file.rdbuf();
    return parse_accel_csv(buf.str(), expected_dt);
}

AccelProfile synth_oscillation_profile(double v_low, double v_high, double a_mag,
                                       int n_cycles, double dt) {
    if (!(v_low >= 0.0) || !(v_low < v_high) || !(a_mag > 0.0)) {
        throw InvalidRange("require 0 <= v_low < v_high and a_mag > 0");
    }
    if (n_cycles < 1) throw InvalidRange("n_cycles must be >= 1");
    if (!(dt > 0.0)) throw InvalidRange("dt must be > 0");

    const double ramp_duration = (v_high - v_low) / a_mag;
    const auto ramp_steps = std::max<long long>(1, std::llround(ramp_duration / dt));

    AccelProfile profile;
    profile.dt = dt;
    const std::size_t total = static_cast<std::size_t>(n_cycles) * 2u * static_cast<std::size_t>(ramp_steps);
    profile.t.reserve(total);
    profile.a.reserve(total);
    std::size_t k = 0;
    for (int c = 0; c < n_cycles; ++c) {
        for (int phase = 0; phase < 2; ++phase) {
            const double a = phase == 0 ? a_mag : -a_mag;
            for (long long s = 0; s < ramp_steps; ++s, ++k) {
                profile.t.push_back(static_cast<double>(k) * dt);
                profile.a.push_back(a);
            }
        }
    }
    return profile;
}

LeadTrajectory integrate_lead(const AccelProfile& profile, double v0, double x0) {
    if (!(v0 >= 0.0)) throw InvalidRange("v0 must be >= 0");

    LeadTrajectory traj;
    const std::size_t n = profile.size();
    traj.t = profile.t;
    traj.x.resize(n);
    traj.v.resize(n);
    traj.a.resize(n);

    double v = v0;
    double x = x0;
    for (std::size_t k = 0; k < n; ++k) {
        const double v_next = std::max(0.0, v + profile.a[k] * profile.dt);
        traj.x[k] = x;
        traj.v[k] = v;
        traj.a[k] = (v_next - v) / profile.dt;  // realized acceleration under the clamp
        x += v * profile.dt;
        v = v_next;
    }
    return traj;
}

}  // namespace gapwatch
