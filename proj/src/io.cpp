#include "gapwatch/io.hpp"

#include <cstdio>
#include <ostream>

#include <json.hpp>

namespace gapwatch {

namespace {

// 9 significant digits, shortest form (%g), locale-independent.
void append_float(std::string& line, double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", value);
    line += buf;
}

}  // namespace

std::string records_csv_header() {
    return "t,vehicle_id,x,v,a,u,spacing_true,spacing_measured,tau_hat,tau_var,lcl,ucl,violation,"
           "active_tau_star";
}

void write_records_csv(std::ostream& out, const std::vector<SimRecord>& records) {
    out << records_csv_header() << '\n';
    std::string line;
    for (const auto& r : records) {
        line.clear();
        append_float(line, r.t);
        line += ',';
        line += std::to_string(r.vehicle_id);
        for (const double value : {r.x, r.v, r.a, r.u, r.spacing_true, r.spacing_measured,
                                   r.tau_hat, r.tau_var, r.lcl, r.ucl}) {
            line += ',';
            append_float(line, value);
        }
        line += ',';
        line += r.violation ? '1' : '0';
        line += ',';
        append_float(line, r.active_tau_star);
        line += '\n';
        out << line;
    }
}

void write_events_jsonl(std::ostream& out, const std::vector<LogEvent>& events) {
    for (const auto& e : events) {
        nlohmann::json obj{{"t", e.t},
                           {"vehicle_id", e.vehicle_id},
                           {"kind", e.kind},
                           {"value", e.value},
                           {"limits", {{"lcl", e.lcl}, {"ucl", e.ucl}}}};
        out << obj.dump() << '\n';
    }
}

void write_summary_json(std::ostream& out, const Summary& summary) {
    nlohmann::json root;
    root["collided"] = summary.collided;
    if (summary.collided) root["collision_time"] = summary.collision_time;
    root["duration"] = summary.duration;
    root["vehicles"] = nlohmann::json::array();
    for (const auto& v : summary.vehicles) {
        nlohmann::json regimes = nlohmann::json::array();
        for (const auto& r : v.regimes) {
            regimes.push_back({{"tau_star", r.tau_star},
                               {"t_start", r.t_start},
                               {"t_end", r.t_end},
                               {"samples", r.samples},
                               {"max_abs_dev", r.max_abs_dev},
                               {"max_abs_dev_settled", r.max_abs_dev_settled},
                               {"settled_samples", r.settled_samples}});
        }
        root["vehicles"].push_back({{"id", v.vehicle_id},
                                    {"tau_hat_max", v.tau_hat_max},
                                    {"tau_hat_min", v.tau_hat_min},
                                    {"tau_hat_std", v.tau_hat_std},
                                    {"violations", v.violation_count},
                                    {"trigger_times", v.trigger_times},
                                    {"regimes", regimes}});
    }
    out << root.dump(2) << '\n';
}

}  // namespace gapwatch
