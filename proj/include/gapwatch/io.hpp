#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "gapwatch/simulator.hpp"

namespace gapwatch {

/// records.csv: fixed header, floats with 9 significant digits, one row per
/// (step, vehicle). Byte-stable for identical inputs.
void write_records_csv(std::ostream& out, const std::vector<SimRecord>& records);

/// events.jsonl: one JSON object per line, in emission order.
void write_events_jsonl(std::ostream& out, const std::vector<LogEvent>& events);

/// summary.json: schema documented in the README.
void write_summary_json(std::ostream& out, const Summary& summary);

std::string records_csv_header();

}  // namespace gapwatch
