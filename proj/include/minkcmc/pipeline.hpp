#pragma once

// End-to-end orchestration of a run configuration: Björling data ->
// singular potential -> one surface grid per lambda0 angle -> exports
// and report.

#include <string>
#include <vector>

#include "minkcmc/config.hpp"
#include "minkcmc/exports.hpp"

namespace minkcmc {

BjorlingData bjorling_from_config(const RunConfig& cfg);

// True when theta' vanishes identically on J, in which case the
// construction admits no non-degenerate singular surface and the
// pipeline writes a report only.
bool degenerate_data(const BjorlingData& data);

struct PipelineResult {
  std::vector<SurfaceGrid> grids;  // one per lambda0 angle; empty when degenerate
  Report report;
  std::vector<std::string> written;  // file paths, in write order
};

// Full run.  Relative output paths are resolved against out_dir (created
// if missing); a lambda0 sweep appends _<index> before each extension
// except for the shared report.  threads > 1 parallelizes per-sample
// work without changing any output byte.
PipelineResult run_pipeline(const RunConfig& cfg, const std::string& out_dir,
                            int threads = 1);

// Classification only: no integration, no mesh/cellmap/curve; writes
// just the report (records and degeneracy, no grid statistics).
PipelineResult classify_only(const RunConfig& cfg, const std::string& out_dir);

}  // namespace minkcmc
