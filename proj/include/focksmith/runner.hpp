#pragma once

#include <optional>
#include <string>
#include <vector>

#include "focksmith/io.hpp"
#include "focksmith/plan.hpp"
#include "focksmith/state.hpp"

namespace focksmith {

struct RunArtifact {
  std::string name;     // plain relative file name from the plan
  std::string content;  // full text payload
};

// Everything a plan run produces, kept in memory so callers can inspect it
// before (or instead of) writing files.  All numbers are rendered with
// format_double, so a report is byte-stable for a given plan and seed.
struct RunReport {
  CircuitPlan plan;
  std::vector<std::string> stage_lines;  // "stage 0 beam_splitter", ...
  Metrics metrics;
  std::vector<RunArtifact> artifacts;
  std::optional<State> final_state;

  // Canonical report text: plan echo, stage outcomes, metrics, artifact list.
  std::string to_text() const;
};

// Runs every stage and measurement of a validated plan.
RunReport execute_plan(const CircuitPlan& plan);

// Writes report.txt, metrics.txt, and the artifacts into out_dir (created if
// missing).  Throws IoError on filesystem trouble.
void export_report(const RunReport& report, const std::string& out_dir);

}  // namespace focksmith
