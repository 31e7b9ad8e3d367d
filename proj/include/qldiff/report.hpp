#pragma once

#include <string>

#include "qldiff/experiment.hpp"
#include "qldiff/hardy.hpp"

namespace qldiff {

// Deterministic JSON for the run report: fixed key order, no timestamps
// (wall-clock metadata goes to a separate file so reports stay byte-stable
// across runs with equal config and seed).
std::string report_json(const RunReport& report);
std::string hardy_json(const std::vector<LatticeEntry>& entries);

struct EmitOptions {
  std::string out_dir = ".";
  bool json = true;
  bool csv = true;
};

// Writes report.json, meta.json (timing only), per-run series CSVs when the
// series are supplied, and bc-residual plot data.
void emit(const RunReport& report, const std::vector<FieldSeries>& series,
          const EmitOptions& opts, double elapsed_seconds);

} // namespace qldiff
