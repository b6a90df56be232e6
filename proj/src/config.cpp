#include "minkcmc/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace minkcmc {

namespace {

using nlohmann::ordered_json;

// SAX pass that only detects duplicate object keys (the DOM parser would
// silently keep one of them).  Tracks a key path for the error message.
class DuplicateKeyCheck : public nlohmann::json_sax<ordered_json> {
 public:
  std::string duplicate_path;

  bool null() override { return true; }
  bool boolean(bool) override { return true; }
  bool number_integer(number_integer_t) override { return true; }
  bool number_unsigned(number_unsigned_t) override { return true; }
  bool number_float(number_float_t, const string_t&) override { return true; }
  bool string(string_t&) override { return true; }
  bool binary(binary_t&) override { return true; }

  bool start_object(std::size_t) override {
    seen_.emplace_back();
    path_.push_back(last_key_);
    return true;
  }
  bool key(string_t& val) override {
    last_key_ = val;
    if (!seen_.back().insert(val).second) {
      duplicate_path = path_string() + val;
      return false;
    }
    return true;
  }
  bool end_object() override {
    seen_.pop_back();
    path_.pop_back();
    return true;
  }
  bool start_array(std::size_t) override { return true; }
  bool end_array() override { return true; }
  bool parse_error(std::size_t, const std::string&,
                   const nlohmann::detail::exception&) override {
    return false;
  }

 private:
  std::string path_string() const {
    std::string out;
    for (std::size_t i = 1; i < path_.size(); ++i) out += path_[i] + ".";
    return out;
  }
  std::vector<std::set<std::string>> seen_;
  std::vector<std::string> path_;
  std::string last_key_;
};

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError("config: " + path + ": " + what);
}

void expect_object(const ordered_json& v, const std::string& path) {
  if (!v.is_object()) fail(path, "expected an object");
}

void reject_unknown(const ordered_json& obj, const std::string& path,
                    std::initializer_list<const char*> allowed) {
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* k : allowed)
      if (item.key() == k) known = true;
    if (!known) fail(path.empty() ? item.key() : path + "." + item.key(), "unknown key");
  }
}

double get_finite(const ordered_json& v, const std::string& path) {
  if (!v.is_number()) fail(path, "expected a number");
  double x = v.get<double>();
  if (!std::isfinite(x)) fail(path, "must be finite");
  return x;
}

double get_number(const ordered_json& obj, const std::string& parent, const char* key,
                  double fallback) {
  if (!obj.contains(key)) return fallback;
  return get_finite(obj.at(key), parent + key);
}

int get_int(const ordered_json& obj, const std::string& parent, const char* key,
            int fallback) {
  if (!obj.contains(key)) return fallback;
  const ordered_json& v = obj.at(key);
  if (!v.is_number_integer() && !v.is_number_unsigned())
    fail(parent + key, "expected an integer");
  return v.get<int>();
}

std::vector<double> get_number_list(const ordered_json& obj, const std::string& parent,
                                    const char* key, std::vector<double> fallback) {
  if (!obj.contains(key)) return fallback;
  const ordered_json& v = obj.at(key);
  const std::string path = parent + key;
  if (!v.is_array() || v.empty()) fail(path, "expected a non-empty array of numbers");
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& e : v) out.push_back(get_finite(e, path));
  return out;
}

std::array<double, 2> get_pair(const ordered_json& obj, const std::string& parent,
                               const char* key, std::array<double, 2> fallback) {
  if (!obj.contains(key)) return fallback;
  const ordered_json& v = obj.at(key);
  const std::string path = parent + key;
  if (!v.is_array() || v.size() != 2) fail(path, "expected [lo, hi]");
  std::array<double, 2> out{get_finite(v[0], path), get_finite(v[1], path)};
  if (!(out[0] < out[1])) fail(path, "requires lo < hi");
  return out;
}

std::string get_string(const ordered_json& obj, const std::string& parent, const char* key,
                       std::string fallback) {
  if (!obj.contains(key)) return fallback;
  const ordered_json& v = obj.at(key);
  if (!v.is_string()) fail(parent + key, "expected a string");
  std::string s = v.get<std::string>();
  if (s.empty()) fail(parent + key, "must not be empty");
  return s;
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
  {
    DuplicateKeyCheck dup;
    if (!ordered_json::sax_parse(text, &dup) && !dup.duplicate_path.empty())
      fail(dup.duplicate_path, "duplicate key");
  }
  ordered_json root;
  try {
    root = ordered_json::parse(text);
  } catch (const nlohmann::detail::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  expect_object(root, "<root>");
  reject_unknown(root, "", {"H", "lambda0", "bjorling", "grid", "numerics", "outputs",
                            "rescale_e2e3"});

  RunConfig cfg;
  cfg.H = get_number(root, "", "H", cfg.H);
  if (!(cfg.H > 0.0)) fail("H", "must be positive");
  cfg.lambda0 = get_number_list(root, "", "lambda0", cfg.lambda0);
  cfg.rescale_e2e3 = get_number(root, "", "rescale_e2e3", cfg.rescale_e2e3);
  if (!(cfg.rescale_e2e3 > 0.0)) fail("rescale_e2e3", "must be positive");

  if (root.contains("bjorling")) {
    const ordered_json& b = root.at("bjorling");
    expect_object(b, "bjorling");
    reject_unknown(b, "bjorling", {"s_coeffs", "t_coeffs", "theta_coeffs", "J"});
    cfg.bjorling.s_coeffs = get_number_list(b, "bjorling.", "s_coeffs", cfg.bjorling.s_coeffs);
    cfg.bjorling.t_coeffs = get_number_list(b, "bjorling.", "t_coeffs", cfg.bjorling.t_coeffs);
    cfg.bjorling.theta_coeffs =
        get_number_list(b, "bjorling.", "theta_coeffs", cfg.bjorling.theta_coeffs);
    cfg.bjorling.J = get_pair(b, "bjorling.", "J", cfg.bjorling.J);
  }

  if (root.contains("grid")) {
    const ordered_json& g = root.at("grid");
    expect_object(g, "grid");
    reject_unknown(g, "grid", {"x_range", "y_range", "nx", "ny"});
    cfg.grid.x_range = get_pair(g, "grid.", "x_range", cfg.grid.x_range);
    cfg.grid.y_range = get_pair(g, "grid.", "y_range", cfg.grid.y_range);
    cfg.grid.nx = get_int(g, "grid.", "nx", cfg.grid.nx);
    cfg.grid.ny = get_int(g, "grid.", "ny", cfg.grid.ny);
    if (cfg.grid.nx < 2) fail("grid.nx", "must be at least 2");
    if (cfg.grid.ny < 2) fail("grid.ny", "must be at least 2");
  }

  if (root.contains("numerics")) {
    const ordered_json& n = root.at("numerics");
    expect_object(n, "numerics");
    reject_unknown(n, "numerics", {"N", "M", "h_step", "eps_iwa", "delta_cell"});
    cfg.numerics.N = get_int(n, "numerics.", "N", cfg.numerics.N);
    if (cfg.numerics.N < 4) fail("numerics.N", "must be at least 4");
    cfg.numerics.M = get_int(n, "numerics.", "M", 4 * cfg.numerics.N + 4);
    if (cfg.numerics.M < 2 * cfg.numerics.N + 2)
      fail("numerics.M", "must be at least 2N + 2");
    cfg.numerics.h_step = get_number(n, "numerics.", "h_step", cfg.numerics.h_step);
    if (cfg.numerics.h_step < 0.0) fail("numerics.h_step", "must be non-negative");
    cfg.numerics.eps_iwa = get_number(n, "numerics.", "eps_iwa", cfg.numerics.eps_iwa);
    if (!(cfg.numerics.eps_iwa > 0.0)) fail("numerics.eps_iwa", "must be positive");
    cfg.numerics.delta_cell = get_number(n, "numerics.", "delta_cell", cfg.numerics.delta_cell);
    if (!(cfg.numerics.delta_cell > 0.0)) fail("numerics.delta_cell", "must be positive");
  } else {
    cfg.numerics.M = 4 * cfg.numerics.N + 4;
  }

  if (root.contains("outputs")) {
    const ordered_json& o = root.at("outputs");
    expect_object(o, "outputs");
    reject_unknown(o, "outputs", {"mesh", "cellmap", "curve", "report"});
    cfg.outputs.mesh = get_string(o, "outputs.", "mesh", cfg.outputs.mesh);
    cfg.outputs.cellmap = get_string(o, "outputs.", "cellmap", cfg.outputs.cellmap);
    cfg.outputs.curve = get_string(o, "outputs.", "curve", cfg.outputs.curve);
    cfg.outputs.report = get_string(o, "outputs.", "report", cfg.outputs.report);
  }
  return cfg;
}

RunConfig parse_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("config: cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

std::string serialize_config(const RunConfig& c) {
  ordered_json j;
  j["H"] = c.H;
  j["lambda0"] = c.lambda0;
  j["bjorling"] = {{"s_coeffs", c.bjorling.s_coeffs},
                   {"t_coeffs", c.bjorling.t_coeffs},
                   {"theta_coeffs", c.bjorling.theta_coeffs},
                   {"J", c.bjorling.J}};
  j["grid"] = {{"x_range", c.grid.x_range},
               {"y_range", c.grid.y_range},
               {"nx", c.grid.nx},
               {"ny", c.grid.ny}};
  j["numerics"] = {{"N", c.numerics.N},
                   {"M", c.numerics.M},
                   {"h_step", c.numerics.h_step},
                   {"eps_iwa", c.numerics.eps_iwa},
                   {"delta_cell", c.numerics.delta_cell}};
  j["outputs"] = {{"mesh", c.outputs.mesh},
                  {"cellmap", c.outputs.cellmap},
                  {"curve", c.outputs.curve},
                  {"report", c.outputs.report}};
  j["rescale_e2e3"] = c.rescale_e2e3;
  return j.dump(2) + "\n";
}

std::uint64_t config_hash(const RunConfig& c) {
  const std::string s = serialize_config(c);
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  return h;
}

}  // namespace minkcmc
