#include "minkcmc/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <filesystem>

#include "minkcmc/log.hpp"
#include "minkcmc/surface.hpp"

namespace minkcmc {

namespace fs = std::filesystem;

namespace {

constexpr double kPi = 3.14159265358979323846;

GridSpec grid_from_config(const RunConfig& cfg) {
  GridSpec gs;
  gs.x_lo = cfg.grid.x_range[0];
  gs.x_hi = cfg.grid.x_range[1];
  gs.y_lo = cfg.grid.y_range[0];
  gs.y_hi = cfg.grid.y_range[1];
  gs.nx = cfg.grid.nx;
  gs.ny = cfg.grid.ny;
  return gs;
}

// Resolves a configured output path against out_dir (absolute paths are
// kept) and makes sure the parent directory exists.
std::string resolved(const std::string& name, const std::string& out_dir) {
  fs::path p(name);
  if (!p.is_absolute() && !out_dir.empty()) p = fs::path(out_dir) / p;
  if (!p.parent_path().empty()) fs::create_directories(p.parent_path());
  return p.string();
}

// surface.obj -> surface_1.obj for the second lambda0 entry, and so on.
std::string indexed(const std::string& name, std::size_t k) {
  if (k == 0) return name;
  const fs::path p(name);
  const fs::path renamed = p.parent_path() /
      (p.stem().string() + "_" + std::to_string(k) + p.extension().string());
  return renamed.string();
}

std::vector<SingularPointRecord> data_records(const BjorlingData& data, const GridSpec& gs) {
  std::vector<SingularPointRecord> recs;
  for (int ix = 0; ix < gs.nx; ++ix) {
    const double x = gs.x(ix);
    if (!data.J.contains(x)) continue;
    recs.push_back(classify_record(data, x));
  }
  return recs;
}

}  // namespace

BjorlingData bjorling_from_config(const RunConfig& cfg) {
  const Interval J{cfg.bjorling.J[0], cfg.bjorling.J[1]};
  return BjorlingData::make(cfg.bjorling.s_coeffs, cfg.bjorling.t_coeffs,
                            cfg.bjorling.theta_coeffs, cfg.H, J);
}

bool degenerate_data(const BjorlingData& data) {
  // Same probe scale as the surface builder: theta'/2 below 1e-12 in sup
  // norm over a fixed sample grid counts as identically zero.
  const AnalyticFunction dtheta = data.theta.derivative();
  double sup = 0.0;
  for (int k = 0; k <= 64; ++k) {
    const double x = data.J.lo + data.J.length() * k / 64.0;
    sup = std::max(sup, std::abs(dtheta(cplx(x, 0.0)).real()));
  }
  return sup <= 2e-12;
}

PipelineResult run_pipeline(const RunConfig& cfg, const std::string& out_dir, int threads) {
  PipelineResult result;
  const BjorlingData data = bjorling_from_config(cfg);
  const GridSpec gs = grid_from_config(cfg);
  const std::uint64_t hash = config_hash(cfg);

  if (degenerate_data(data)) {
    logging::info("theta' vanishes identically on J; writing report only");
    result.report.degenerate = true;
    result.report.config_hash = hash;
    result.report.version = kToolVersion;
    result.report.records = data_records(data, gs);
    const std::string report_path = resolved(cfg.outputs.report, out_dir);
    export_report(result.report, report_path);
    result.written.push_back(report_path);
    return result;
  }

  const SingularPotential xi = data_to_singular_potential(data);

  BuildOptions opt;
  opt.H = cfg.H;
  opt.trunc = cfg.numerics.N;
  opt.circle_samples = cfg.numerics.M;
  opt.h_step = cfg.numerics.h_step;
  opt.eps_iwa = cfg.numerics.eps_iwa;
  opt.delta_cell = cfg.numerics.delta_cell;
  opt.threads = std::max(1, threads);
  opt.rotation_angle = data.frame_rotation_angle();

  result.grids.reserve(cfg.lambda0.size());
  for (double deg : cfg.lambda0) {
    opt.lambda0 = std::polar(1.0, kPi * deg / 180.0);
    logging::info("building %dx%d grid at lambda0 angle %g deg", gs.nx, gs.ny, deg);
    result.grids.push_back(build_surface(xi, gs, opt));
  }

  std::vector<const SurfaceGrid*> grid_ptrs;
  grid_ptrs.reserve(result.grids.size());
  for (const SurfaceGrid& g : result.grids) grid_ptrs.push_back(&g);
  result.report = build_report(data, grid_ptrs, cfg.lambda0, hash, kToolVersion);

  for (std::size_t k = 0; k < result.grids.size(); ++k) {
    const SurfaceGrid& g = result.grids[k];
    const std::string mesh = resolved(indexed(cfg.outputs.mesh, k), out_dir);
    export_obj(g, mesh, cfg.rescale_e2e3);
    result.written.push_back(mesh);
    const std::string cellmap = resolved(indexed(cfg.outputs.cellmap, k), out_dir);
    export_cellmap(g, cellmap);
    result.written.push_back(cellmap);
    const std::string curve = resolved(indexed(cfg.outputs.curve, k), out_dir);
    export_curve_csv(g, curve);
    result.written.push_back(curve);
  }
  const std::string report_path = resolved(cfg.outputs.report, out_dir);
  export_report(result.report, report_path);
  result.written.push_back(report_path);
  return result;
}

PipelineResult classify_only(const RunConfig& cfg, const std::string& out_dir) {
  PipelineResult result;
  const BjorlingData data = bjorling_from_config(cfg);
  result.report.degenerate = degenerate_data(data);
  result.report.config_hash = config_hash(cfg);
  result.report.version = kToolVersion;
  result.report.records = data_records(data, grid_from_config(cfg));
  const std::string report_path = resolved(cfg.outputs.report, out_dir);
  export_report(result.report, report_path);
  result.written.push_back(report_path);
  return result;
}

}  // namespace minkcmc
