#pragma once

// Flat-file exports for computed surface grids: Wavefront OBJ mesh, PGM
// cell map, singular-band CSV, and a JSON report, plus the report
// assembly itself.  All writers are deterministic: fixed ordering, fixed
// number rendering (shortest round-trip), no timestamps.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "minkcmc/bjorling.hpp"
#include "minkcmc/surface.hpp"

namespace minkcmc {

struct SingularPointRecord {
  double x0 = 0.0;
  SingularityType type = SingularityType::Unclassified;
  double s = 0.0;
  double t = 0.0;
  double s_prime = 0.0;
  double t_prime = 0.0;
  double theta_prime = 0.0;
};

struct GridStats {
  double lambda0_degrees = 0.0;
  int count_big_plus = 0;
  int count_big_minus = 0;
  int count_p1 = 0;
  int count_p2 = 0;
  int count_higher = 0;
  int count_unknown = 0;
  double max_residual = 0.0;
  // Mean curvature-oracle error over the regular subgrid |y| > 0.05;
  // absent when the grid has no usable regular window there.
  std::optional<double> curvature_mean_err;
};

struct Report {
  std::vector<SingularPointRecord> records;  // sorted by x0
  std::vector<GridStats> stats;              // one entry per lambda0 angle
  bool degenerate = false;
  std::uint64_t config_hash = 0;
  std::string version = "0.0.0";
};

// Classification record for the curve point x, from the data alone.
SingularPointRecord classify_record(const BjorlingData& data, double x);

// One record per grid column whose x lies in J and which meets the
// singular band, classified from the Björling data; grid statistics for
// each surface of the lambda0 sweep.
Report build_report(const BjorlingData& data, const std::vector<const SurfaceGrid*>& grids,
                    const std::vector<double>& lambda0_degrees, std::uint64_t config_hash,
                    const std::string& version);

// Wavefront OBJ: one `v` line per valid sample; each grid cell becomes
// two triangles when all four corners are valid and one triangle when
// exactly three are.  rescale stretches along (e2+e3)/sqrt(2) at write
// time (1 = identity).
void export_obj(const SurfaceGrid& grid, std::ostream& os, double rescale = 1.0);
void export_obj(const SurfaceGrid& grid, const std::string& path, double rescale = 1.0);

// ASCII PGM (P2), one pixel per sample, top row = largest y:
// BigCell+ 255, BigCell- 200, P1 128, P2 64, Higher/Unknown 0.
void export_cellmap(const SurfaceGrid& grid, std::ostream& os);
void export_cellmap(const SurfaceGrid& grid, const std::string& path);

// CSV (x,y,f1,f2,f3) of the valid samples inside the singular band.
void export_curve_csv(const SurfaceGrid& grid, std::ostream& os);
void export_curve_csv(const SurfaceGrid& grid, const std::string& path);

void export_report(const Report& report, std::ostream& os);
void export_report(const Report& report, const std::string& path);

}  // namespace minkcmc
