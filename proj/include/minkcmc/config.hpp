#pragma once

// Run configuration for the command-line tool: a strict JSON schema with
// defaults, rejection of unknown and duplicate keys, and a canonical
// serialization used for provenance hashing and round-trip checks.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "minkcmc/types.hpp"

namespace minkcmc {

inline constexpr const char* kToolVersion = "0.1.0";

struct RunConfig {
  double H = 1.0;
  // Evaluation points of the associated family, as angles in degrees:
  // lambda0 = exp(i * pi * deg / 180).  One surface is built per entry.
  std::vector<double> lambda0 = {0.0};

  struct Bjorling {
    std::vector<double> s_coeffs = {1.0};
    std::vector<double> t_coeffs = {1.0};
    std::vector<double> theta_coeffs = {0.0, 1.0};
    std::array<double, 2> J = {-1.0, 1.0};
    friend bool operator==(const Bjorling&, const Bjorling&) = default;
  } bjorling;

  struct Grid {
    std::array<double, 2> x_range = {-1.0, 1.0};
    std::array<double, 2> y_range = {-0.3, 0.3};
    int nx = 101;
    int ny = 31;
    friend bool operator==(const Grid&, const Grid&) = default;
  } grid;

  struct Numerics {
    int N = 24;          // Laurent truncation degree
    int M = 100;         // circle samples for factorization residuals
    double h_step = 0.0; // integration step; 0 selects min(dx, dy)/4
    double eps_iwa = 1e-9;
    double delta_cell = 1e-7;
    friend bool operator==(const Numerics&, const Numerics&) = default;
  } numerics;

  struct Outputs {
    std::string mesh = "surface.obj";
    std::string cellmap = "cellmap.pgm";
    std::string curve = "curve.csv";
    std::string report = "report.json";
    friend bool operator==(const Outputs&, const Outputs&) = default;
  } outputs;

  // Figure-style stretch along (e2+e3)/sqrt(2), applied at mesh export
  // only; 1 is the identity.
  double rescale_e2e3 = 1.0;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

// Parsing throws ConfigError (types.hpp) on any schema violation:
// unreadable file, malformed JSON, duplicate or unknown key, wrong type,
// or out-of-range value.  what() names the offending key path.
RunConfig parse_config_text(const std::string& text);
RunConfig parse_config(const std::string& path);

// Canonical JSON rendering with a fixed key order and shortest
// round-trip numbers; parse_config_text(serialize_config(c)) == c.
std::string serialize_config(const RunConfig& c);

// FNV-1a (64-bit) over the canonical serialization.
std::uint64_t config_hash(const RunConfig& c);

}  // namespace minkcmc
