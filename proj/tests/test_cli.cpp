#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "minkcmc/config.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Path of the command-line binary, injected by the build.
const std::string kTool = MINKCMC_CLI_PATH;

int run_cmd(const std::string& args) {
  const std::string cmd = kTool + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  REQUIRE(WIFEXITED(status));
  return WEXITSTATUS(status);
}

fs::path scratch() {
  const fs::path dir = "cli_scratch";
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

fs::path write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
  return path;
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

const char* kHelixConfig =
    "{\n"
    "  \"H\": 1.0,\n"
    "  \"bjorling\": {\"s_coeffs\": [1], \"t_coeffs\": [1], \"theta_coeffs\": [0, 1],"
    " \"J\": [-1, 1]},\n"
    "  \"grid\": {\"x_range\": [-1, 1], \"y_range\": [-0.2, 0.2], \"nx\": 11, \"ny\": 5},\n"
    "  \"numerics\": {\"N\": 12, \"h_step\": 0.01}\n"
    "}\n";

}  // namespace

TEST_CASE("usage and config errors exit with code 2") {
  CHECK(run_cmd("") == 2);
  CHECK(run_cmd("frobnicate") == 2);
  CHECK(run_cmd("run") == 2);  // --config is required
  CHECK(run_cmd("--help") == 0);

  const fs::path dir = scratch();
  const fs::path bad = write_text(dir / "bad.json", "{\"H\": -1}\n");
  const fs::path dup = write_text(dir / "dup.json", "{\"H\": 1, \"H\": 2}\n");
  const fs::path unknown = write_text(dir / "unknown.json", "{\"frob\": 1}\n");
  CHECK(run_cmd("run --config " + bad.string()) == 2);
  CHECK(run_cmd("validate --config " + bad.string()) == 2);
  CHECK(run_cmd("run --config " + dup.string()) == 2);
  CHECK(run_cmd("validate --config " + unknown.string()) == 2);
  CHECK(run_cmd("run --config " + (dir / "missing.json").string()) == 2);
  // Björling data whose s and t share a zero is a config-level error too.
  const fs::path shared = write_text(
      dir / "shared_zero.json",
      "{\"bjorling\": {\"s_coeffs\": [0, 1], \"t_coeffs\": [0, 1], \"theta_coeffs\": [0, 1]}}\n");
  CHECK(run_cmd("run --config " + shared.string()) == 2);
  CHECK(run_cmd("classify --config " + shared.string()) == 2);
}

TEST_CASE("validate accepts a good config and exits 0") {
  const fs::path dir = scratch();
  const fs::path cfg = write_text(dir / "helix.json", kHelixConfig);
  CHECK(run_cmd("validate --config " + cfg.string()) == 0);
  // Nothing is written by validate.
  CHECK_FALSE(fs::exists(dir / "surface.obj"));
  CHECK_FALSE(fs::exists(dir / "report.json"));
}

TEST_CASE("run writes the four outputs and they are deterministic") {
  const fs::path dir = scratch();
  const fs::path cfg = write_text(dir / "helix.json", kHelixConfig);
  REQUIRE(run_cmd("run --config " + cfg.string() + " --out-dir " + (dir / "a").string()) == 0);
  for (const char* name : {"surface.obj", "cellmap.pgm", "curve.csv", "report.json"})
    CHECK(fs::exists(dir / "a" / name));

  const json rep = json::parse(read_text(dir / "a" / "report.json"));
  CHECK(rep.at("degenerate") == false);
  CHECK(rep.at("singular_points").size() == 11);
  for (const auto& r : rep.at("singular_points")) CHECK(r.at("type") == "CuspidalEdge");
  const auto& cells = rep.at("grid_stats")[0].at("cells");
  const int valid_count = int(cells.at("big_cell_plus")) + int(cells.at("big_cell_minus")) +
                          int(cells.at("p1"));
  CHECK(cells.at("p1") == 11);
  CHECK(cells.at("unknown") == 0);

  // One OBJ vertex per valid sample.
  int v_lines = 0;
  std::istringstream obj(read_text(dir / "a" / "surface.obj"));
  std::string line;
  while (std::getline(obj, line))
    if (line.rfind("v ", 0) == 0) ++v_lines;
  CHECK(v_lines == valid_count);

  // The cellmap marks the singular row and nothing else.
  std::istringstream pgm(read_text(dir / "a" / "cellmap.pgm"));
  std::string l1, l2, l3;
  std::getline(pgm, l1);
  std::getline(pgm, l2);
  std::getline(pgm, l3);
  CHECK(l1 == "P2");
  CHECK(l2 == "11 5");
  std::vector<std::string> rows;
  while (std::getline(pgm, line)) rows.push_back(line);
  REQUIRE(rows.size() == 5);
  CHECK(rows[2] == "128 128 128 128 128 128 128 128 128 128 128");  // y = 0, middle row
  for (int i : {0, 1, 3, 4}) CHECK(rows[i].find("128") == std::string::npos);

  // Byte determinism across repeat runs and thread counts.
  REQUIRE(run_cmd("run --config " + cfg.string() + " --out-dir " + (dir / "b").string()) == 0);
  REQUIRE(run_cmd("run --config " + cfg.string() + " --out-dir " + (dir / "c").string() +
                  " --threads 3") == 0);
  for (const char* name : {"surface.obj", "cellmap.pgm", "curve.csv", "report.json"}) {
    CHECK(read_text(dir / "a" / name) == read_text(dir / "b" / name));
    CHECK(read_text(dir / "a" / name) == read_text(dir / "c" / name));
  }
}

TEST_CASE("a too-coarse default step degrades gracefully, never fatally") {
  // Without an explicit h_step the default min(dx,dy)/4 = 0.025 leaves more
  // integration error in the frame than eps_iwa tolerates at the far end of
  // the singular row.  Those samples must come out invalid/Unknown — not
  // crash the run — and the classification report must still cover all of J.
  const fs::path dir = scratch();
  std::string text(kHelixConfig);
  const auto pos = text.find(", \"h_step\": 0.01");
  REQUIRE(pos != std::string::npos);
  text.erase(pos, std::string(", \"h_step\": 0.01").size());
  const fs::path cfg = write_text(dir / "coarse.json", text);
  REQUIRE(run_cmd("run --config " + cfg.string() + " --out-dir " + dir.string()) == 0);
  for (const char* name : {"surface.obj", "cellmap.pgm", "curve.csv", "report.json"})
    CHECK(fs::exists(dir / name));

  const json rep = json::parse(read_text(dir / "report.json"));
  REQUIRE(rep.at("singular_points").size() == 11);
  for (const auto& r : rep.at("singular_points")) CHECK(r.at("type") == "CuspidalEdge");
  const auto& cells = rep.at("grid_stats")[0].at("cells");
  // The y = 0 row resolves to P1 where the data quality allows and Unknown
  // where it does not; off-row samples are far from the cell boundary and
  // stay robust.
  CHECK(int(cells.at("p1")) + int(cells.at("unknown")) == 11);
  CHECK(cells.at("big_cell_plus") == 22);
  CHECK(cells.at("big_cell_minus") == 22);
  CHECK(cells.at("p2") == 0);
  CHECK(cells.at("higher") == 0);

  std::istringstream pgm(read_text(dir / "cellmap.pgm"));
  std::string line;
  std::vector<std::string> rows;
  while (std::getline(pgm, line)) rows.push_back(line);
  REQUIRE(rows.size() == 8);  // P2 header, dims, maxval, 5 pixel rows
  std::istringstream mid(rows[5]);
  for (std::string tok; mid >> tok;) CHECK((tok == "128" || tok == "0"));
}

TEST_CASE("classify writes only the report") {
  const fs::path dir = scratch();
  const fs::path cfg = write_text(
      dir / "swallow.json",
      "{\"bjorling\": {\"s_coeffs\": [0, 1], \"t_coeffs\": [1], \"theta_coeffs\": [0, 0.0001]},\n"
      " \"grid\": {\"nx\": 5, \"ny\": 3},\n"
      " \"outputs\": {\"report\": \"" + (dir / "swallow_report.json").string() + "\"}}\n");
  REQUIRE(run_cmd("classify --config " + cfg.string()) == 0);
  CHECK_FALSE(fs::exists("surface.obj"));
  const json rep = json::parse(read_text(dir / "swallow_report.json"));
  CHECK(rep.at("grid_stats").empty());
  bool saw_swallowtail_at_zero = false;
  for (const auto& r : rep.at("singular_points")) {
    if (r.at("x0") == 0.0) {
      saw_swallowtail_at_zero = true;
      CHECK(r.at("type") == "Swallowtail");
    } else {
      CHECK(r.at("type") == "CuspidalEdge");
    }
  }
  CHECK(saw_swallowtail_at_zero);
}

TEST_CASE("a degenerate angle function produces a report and no mesh") {
  const fs::path dir = scratch();
  const fs::path cfg = write_text(
      dir / "degen.json",
      "{\"bjorling\": {\"theta_coeffs\": [0.5]}, \"grid\": {\"nx\": 5, \"ny\": 3}}\n");
  REQUIRE(run_cmd("run --config " + cfg.string() + " --out-dir " + (dir / "out").string()) == 0);
  CHECK_FALSE(fs::exists(dir / "out" / "surface.obj"));
  CHECK_FALSE(fs::exists(dir / "out" / "cellmap.pgm"));
  const json rep = json::parse(read_text(dir / "out" / "report.json"));
  CHECK(rep.at("degenerate") == true);
  CHECK(rep.at("singular_points").size() == 5);
  for (const auto& r : rep.at("singular_points")) CHECK(r.at("type") == "Degenerate");
}

TEST_CASE("an unwritable output path exits with code 3") {
  const fs::path dir = scratch();
  const fs::path cfg = write_text(dir / "helix.json", kHelixConfig);
  // /dev/null/x can never be created: the parent is not a directory.
  CHECK(run_cmd("run --config " + cfg.string() + " --out-dir /dev/null/x") == 3);
}

TEST_CASE("a lambda0 sweep writes indexed outputs and one shared report") {
  const fs::path dir = scratch();
  const fs::path cfg = write_text(
      dir / "sweep.json",
      "{\"lambda0\": [0, 90],\n"
      " \"bjorling\": {\"s_coeffs\": [1], \"t_coeffs\": [1], \"theta_coeffs\": [0, 1]},\n"
      " \"grid\": {\"x_range\": [-0.5, 0.5], \"y_range\": [-0.2, 0.2], \"nx\": 5, \"ny\": 5},\n"
      " \"numerics\": {\"N\": 10}}\n");
  REQUIRE(run_cmd("run --config " + cfg.string() + " --out-dir " + (dir / "out").string()) == 0);
  for (const char* name : {"surface.obj", "surface_1.obj", "cellmap.pgm", "cellmap_1.pgm",
                           "curve.csv", "curve_1.csv", "report.json"})
    CHECK(fs::exists(dir / "out" / name));
  CHECK_FALSE(fs::exists(dir / "out" / "report_1.json"));
  const json rep = json::parse(read_text(dir / "out" / "report.json"));
  REQUIRE(rep.at("grid_stats").size() == 2);
  CHECK(rep.at("grid_stats")[0].at("lambda0_degrees") == 0.0);
  CHECK(rep.at("grid_stats")[1].at("lambda0_degrees") == 90.0);
}
