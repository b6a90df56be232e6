#include "minkcmc/exports.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

namespace minkcmc {

namespace {

// Shortest round-trip decimal rendering; deterministic across platforms
// using the same IEEE doubles.
std::string num(double x) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

bool in_band(const SurfaceSample& s) { return s.valid && s.tag == CellTag::P1; }

Vec3 stretched(const Vec3& v, double rescale) {
  if (rescale == 1.0) return v;
  // v + (c - 1) <v, d> d with d the unit vector along e2 + e3.
  const double proj = (v[1] + v[2]) / 2.0;
  Vec3 out = v;
  out[1] += (rescale - 1.0) * proj;
  out[2] += (rescale - 1.0) * proj;
  return out;
}

}  // namespace

SingularPointRecord classify_record(const BjorlingData& data, double x) {
  SingularPointRecord rec;
  rec.x0 = x;
  rec.type = classify_singularity(data, x);
  rec.s = data.s(x).real();
  rec.t = data.t(x).real();
  rec.s_prime = data.s.derivative()(x).real();
  rec.t_prime = data.t.derivative()(x).real();
  rec.theta_prime = data.theta.derivative()(x).real();
  return rec;
}

Report build_report(const BjorlingData& data, const std::vector<const SurfaceGrid*>& grids,
                    const std::vector<double>& lambda0_degrees, std::uint64_t config_hash,
                    const std::string& version) {
  Report rep;
  rep.config_hash = config_hash;
  rep.version = version;

  if (!grids.empty()) {
    const SurfaceGrid& g0 = *grids.front();
    rep.degenerate = g0.degenerate;
    // One record per column whose x lies in J: classification comes from
    // the curve data alone, so every singular sample is reported even when
    // the grid sample at that column failed to assemble.  Columns are
    // visited in increasing x, so records come out sorted.
    for (int ix = 0; ix < g0.spec.nx; ++ix) {
      const double x = g0.spec.x(ix);
      if (!data.J.contains(x)) continue;
      rep.records.push_back(classify_record(data, x));
    }
  }

  for (std::size_t k = 0; k < grids.size(); ++k) {
    const SurfaceGrid& g = *grids[k];
    GridStats st;
    st.lambda0_degrees = k < lambda0_degrees.size() ? lambda0_degrees[k] : 0.0;
    for (const SurfaceSample& s : g.samples) {
      switch (s.tag) {
        case CellTag::BigCellPlus: ++st.count_big_plus; break;
        case CellTag::BigCellMinus: ++st.count_big_minus; break;
        case CellTag::P1: ++st.count_p1; break;
        case CellTag::P2: ++st.count_p2; break;
        case CellTag::Higher: ++st.count_higher; break;
        case CellTag::Unknown: ++st.count_unknown; break;
      }
      st.max_residual = std::max(st.max_residual, s.residual);
    }
    try {
      st.curvature_mean_err = mean_curvature_oracle(g, 0.05).h_mean_err;
    } catch (const std::exception&) {
      st.curvature_mean_err.reset();
    }
    rep.stats.push_back(st);
  }
  return rep;
}

void export_obj(const SurfaceGrid& grid, std::ostream& os, double rescale) {
  const GridSpec& gs = grid.spec;
  std::vector<int> vertex_id(grid.samples.size(), 0);
  int next = 1;
  for (std::size_t i = 0; i < grid.samples.size(); ++i) {
    if (!grid.samples[i].valid) continue;
    vertex_id[i] = next++;
    const Vec3 v = stretched(grid.samples[i].f, rescale);
    os << "v " << num(v[0]) << ' ' << num(v[1]) << ' ' << num(v[2]) << '\n';
  }
  auto id = [&](int ix, int iy) {
    return vertex_id[static_cast<std::size_t>(ix) + static_cast<std::size_t>(iy) * gs.nx];
  };
  auto tri = [&](int a, int b, int c) { os << "f " << a << ' ' << b << ' ' << c << '\n'; };
  for (int iy = 0; iy + 1 < gs.ny; ++iy) {
    for (int ix = 0; ix + 1 < gs.nx; ++ix) {
      const int v00 = id(ix, iy), v10 = id(ix + 1, iy);
      const int v01 = id(ix, iy + 1), v11 = id(ix + 1, iy + 1);
      const int present = (v00 > 0) + (v10 > 0) + (v01 > 0) + (v11 > 0);
      if (present == 4) {
        tri(v00, v10, v11);
        tri(v00, v11, v01);
      } else if (present == 3) {
        if (v00 == 0) tri(v10, v11, v01);
        else if (v10 == 0) tri(v00, v11, v01);
        else if (v11 == 0) tri(v00, v10, v01);
        else tri(v00, v10, v11);
      }
    }
  }
}

void export_cellmap(const SurfaceGrid& grid, std::ostream& os) {
  const GridSpec& gs = grid.spec;
  os << "P2\n" << gs.nx << ' ' << gs.ny << "\n255\n";
  for (int iy = gs.ny - 1; iy >= 0; --iy) {
    for (int ix = 0; ix < gs.nx; ++ix) {
      int value = 0;
      switch (grid.at(ix, iy).tag) {
        case CellTag::BigCellPlus: value = 255; break;
        case CellTag::BigCellMinus: value = 200; break;
        case CellTag::P1: value = 128; break;
        case CellTag::P2: value = 64; break;
        case CellTag::Higher:
        case CellTag::Unknown: value = 0; break;
      }
      os << value << (ix + 1 < gs.nx ? ' ' : '\n');
    }
  }
}

void export_curve_csv(const SurfaceGrid& grid, std::ostream& os) {
  const GridSpec& gs = grid.spec;
  os << "x,y,f1,f2,f3\n";
  for (int iy = 0; iy < gs.ny; ++iy) {
    for (int ix = 0; ix < gs.nx; ++ix) {
      const SurfaceSample& s = grid.at(ix, iy);
      if (!in_band(s)) continue;
      os << num(gs.x(ix)) << ',' << num(gs.y(iy)) << ',' << num(s.f[0]) << ','
         << num(s.f[1]) << ',' << num(s.f[2]) << '\n';
    }
  }
}

void export_report(const Report& report, std::ostream& os) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["version"] = report.version;
  char hash[19];
  std::snprintf(hash, sizeof(hash), "0x%016llx",
                static_cast<unsigned long long>(report.config_hash));
  j["config_hash"] = hash;
  j["degenerate"] = report.degenerate;
  j["singular_points"] = ordered_json::array();
  for (const SingularPointRecord& r : report.records) {
    j["singular_points"].push_back({{"x0", r.x0},
                                    {"type", std::string(to_string(r.type))},
                                    {"s", r.s},
                                    {"t", r.t},
                                    {"s_prime", r.s_prime},
                                    {"t_prime", r.t_prime},
                                    {"theta_prime", r.theta_prime}});
  }
  j["grid_stats"] = ordered_json::array();
  for (const GridStats& st : report.stats) {
    ordered_json cells = {{"big_cell_plus", st.count_big_plus},
                          {"big_cell_minus", st.count_big_minus},
                          {"p1", st.count_p1},
                          {"p2", st.count_p2},
                          {"higher", st.count_higher},
                          {"unknown", st.count_unknown}};
    ordered_json entry = {{"lambda0_degrees", st.lambda0_degrees},
                          {"cells", cells},
                          {"max_iwasawa_residual", st.max_residual}};
    if (st.curvature_mean_err)
      entry["curvature_mean_error"] = *st.curvature_mean_err;
    else
      entry["curvature_mean_error"] = nullptr;
    j["grid_stats"].push_back(entry);
  }
  os << j.dump(2) << '\n';
}

void export_obj(const SurfaceGrid& grid, const std::string& path, double rescale) {
  auto os = open_out(path);
  export_obj(grid, os, rescale);
}
void export_cellmap(const SurfaceGrid& grid, const std::string& path) {
  auto os = open_out(path);
  export_cellmap(grid, os);
}
void export_curve_csv(const SurfaceGrid& grid, const std::string& path) {
  auto os = open_out(path);
  export_curve_csv(grid, os);
}
void export_report(const Report& report, const std::string& path) {
  auto os = open_out(path);
  export_report(report, os);
}

}  // namespace minkcmc
