#pragma once

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pwb/biphoton.hpp"
#include "pwb/dispersion.hpp"
#include "pwb/fiber_prop.hpp"
#include "pwb/sellmeier_fit.hpp"

namespace pwb::io {

using json = nlohmann::json;
namespace fs = std::filesystem;

inline std::string fmt9(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

// Round every floating value to 9 significant digits.
inline json round9(const json& j) {
  if (j.is_number_float()) {
    const double v = j.get<double>();
    if (!std::isfinite(v)) return nullptr;
    return std::stod(fmt9(v));
  }
  if (j.is_array() || j.is_object()) {
    json out = j;
    for (auto it = out.begin(); it != out.end(); ++it) *it = round9(*it);
    return out;
  }
  return j;
}

inline std::string read_text(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw error(errc::io_error, "cannot open " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline json read_json(const fs::path& p) {
  const std::string text = read_text(p);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1;
    for (std::size_t i = 0; i < std::min(e.byte, text.size()); ++i)
      if (text[i] == '\n') ++line;
    throw error(errc::parse_error, p.string() + ":" + std::to_string(line) + ": " + e.what());
  }
}

inline void write_text(const fs::path& p, const std::string& s) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw error(errc::io_error, "cannot write " + p.string());
  out << s;
}

inline json to_json(const sellmeier_set& s) {
  return {{"a0", s.a0}, {"a1", s.a1}, {"a2", s.a2}, {"a3", s.a3}, {"a4", s.a4}};
}

inline sellmeier_set sellmeier_from_json(const json& j) {
  return {j.at("a0").get<double>(), j.at("a1").get<double>(), j.at("a2").get<double>(), j.at("a3").get<double>(),
          j.at("a4").get<double>()};
}

struct diagnostic {
  std::string path, message;
};

inline void check_crystal_json(const json& j, const std::string& base, std::vector<diagnostic>& d) {
  auto num = [&](const char* key, bool required, auto pred, const char* msg) {
    if (!j.contains(key)) {
      if (required) d.push_back({base + "/" + key, "missing"});
      return;
    }
    if (!j[key].is_number()) {
      d.push_back({base + "/" + key, "must be a number"});
      return;
    }
    if (!pred(j[key].get<double>())) d.push_back({base + "/" + key, msg});
  };
  if (!j.is_object()) {
    d.push_back({base.empty() ? "/" : base, "crystal must be an object"});
    return;
  }
  num("length_um", true, [](double v) { return v > 0; }, "must be > 0");
  num("poling_period_um", true, [](double v) { return v >= 0; }, "must be >= 0");
  num("t0_kelvin", false, [](double v) { return v > 0; }, "must be > 0");
  num("alpha_per_kelvin", false, [](double v) { return std::isfinite(v); }, "must be finite");
  if (!j.contains("axes") || !j["axes"].is_object()) {
    d.push_back({base + "/axes", "missing"});
    return;
  }
  bool any = false;
  for (const char* ax : {"x", "y", "z"}) {
    if (!j["axes"].contains(ax) || j["axes"][ax].is_null()) continue;
    any = true;
    const auto& a = j["axes"][ax];
    const std::string p = base + "/axes/" + ax;
    bool ok = true;
    for (const char* k : {"a0", "a1", "a2", "a3", "a4"})
      if (!a.contains(k) || !a[k].is_number()) {
        d.push_back({p + "/" + k, "missing or not a number"});
        ok = false;
      }
    if (!ok) continue;
    const auto s = sellmeier_from_json(a);
    if (!(s.a0 > 0)) d.push_back({p + "/a0", "must be > 0"});
    if (!(s.a2 >= 0)) d.push_back({p + "/a2", "must be >= 0"});
    if (!(s.a4 >= 0)) d.push_back({p + "/a4", "must be >= 0"});
    if (s.a2 == s.a4 && s.a2 != 0) d.push_back({p + "/a4", "must differ from a2"});
  }
  if (!any) d.push_back({base + "/axes", "no axis coefficients supplied"});
}

inline crystal_spec crystal_from_json(const json& j) {
  std::vector<diagnostic> d;
  check_crystal_json(j, "", d);
  if (!d.empty()) throw error(errc::validation, d.front().path + ": " + d.front().message);
  crystal_spec c;
  c.name = j.value("name", std::string("crystal"));
  const auto& ax = j["axes"];
  if (ax.contains("x") && !ax["x"].is_null()) c.x = sellmeier_from_json(ax["x"]);
  if (ax.contains("y") && !ax["y"].is_null()) c.y = sellmeier_from_json(ax["y"]);
  if (ax.contains("z") && !ax["z"].is_null()) c.z = sellmeier_from_json(ax["z"]);
  c.length_um = j.at("length_um").get<double>();
  c.poling_period_um = j.at("poling_period_um").get<double>();
  c.t0_kelvin = j.value("t0_kelvin", 298.0);
  c.alpha_per_kelvin = j.value("alpha_per_kelvin", 0.0);
  return c;
}

inline json to_json(const crystal_spec& c) {
  json axes = json::object();
  axes["x"] = c.x ? to_json(*c.x) : json(nullptr);
  axes["y"] = c.y ? to_json(*c.y) : json(nullptr);
  axes["z"] = c.z ? to_json(*c.z) : json(nullptr);
  return {{"name", c.name},
          {"axes", axes},
          {"poling_period_um", c.poling_period_um},
          {"length_um", c.length_um},
          {"t0_kelvin", c.t0_kelvin},
          {"alpha_per_kelvin", c.alpha_per_kelvin}};
}

inline crystal_spec load_crystal(const fs::path& p) { return crystal_from_json(read_json(p)); }

inline std::vector<measurement_point> parse_measurements_csv(const std::string& text, const std::string& name = "data") {
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  std::vector<measurement_point> out;
  bool header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      if (line != "lambda_pump_nm,lambda_vis_nm,sigma_nm")
        throw error(errc::parse_error, name + ":" + std::to_string(lineno) + ": expected header lambda_pump_nm,lambda_vis_nm,sigma_nm");
      header = true;
      continue;
    }
    std::istringstream ls(line);
    std::string a, b, c;
    if (!std::getline(ls, a, ',') || !std::getline(ls, b, ',') || !std::getline(ls, c))
      throw error(errc::parse_error, name + ":" + std::to_string(lineno) + ": expected three columns");
    try {
      measurement_point p{std::stod(a), std::stod(b), std::stod(c)};
      if (!(p.pump_nm > 0 && p.signal_nm > 0 && p.sigma_nm > 0))
        throw error(errc::validation, name + ":" + std::to_string(lineno) + ": values must be positive");
      out.push_back(p);
    } catch (const std::logic_error&) {
      throw error(errc::parse_error, name + ":" + std::to_string(lineno) + ": not a number");
    }
  }
  if (!header) throw error(errc::parse_error, name + ": empty dataset");
  return out;
}

inline std::vector<measurement_point> load_measurements(const fs::path& p) {
  return parse_measurements_csv(read_text(p), p.string());
}

inline std::string measurements_csv(const std::vector<measurement_point>& pts) {
  std::string s = "lambda_pump_nm,lambda_vis_nm,sigma_nm\n";
  for (const auto& p : pts) s += fmt9(p.pump_nm) + "," + fmt9(p.signal_nm) + "," + fmt9(p.sigma_nm) + "\n";
  return s;
}

inline std::string grid_csv(const jsa_grid& g) {
  std::string s = "omega_s,omega_i,probability\n";
  s.reserve(g.probability.size() * 40);
  for (std::size_t a = 0; a < g.ns(); ++a)
    for (std::size_t b = 0; b < g.ni(); ++b)
      s += fmt9(g.omega_s[a]) + "," + fmt9(g.omega_i[b]) + "," + fmt9(g.at(a, b)) + "\n";
  return s;
}

inline std::string time_grid_csv(const time_grid& g) {
  std::string s = "t_s_ns,t_i_ns,probability\n";
  s.reserve(g.probability.size() * 40);
  for (std::size_t a = 0; a < g.ns(); ++a)
    for (std::size_t b = 0; b < g.ni(); ++b)
      s += fmt9(g.t_s_ns[a]) + "," + fmt9(g.t_i_ns[b]) + "," + fmt9(g.at(a, b)) + "\n";
  return s;
}

inline json to_json(const gaussian_fit_2d& f) {
  return {{"center_s", f.center_s},       {"center_i", f.center_i},         {"sigma_s", f.sigma_s},
          {"sigma_i", f.sigma_i},         {"rho", f.rho},                   {"center_s_err", f.center_s_err},
          {"center_i_err", f.center_i_err}, {"sigma_s_err", f.sigma_s_err}, {"sigma_i_err", f.sigma_i_err},
          {"rho_err", f.rho_err},         {"near_singular", f.near_singular}};
}

inline json to_json(const gaussian_fit_1d& f) {
  return {{"bias", f.bias},         {"amplitude", f.amplitude},         {"center", f.center},
          {"fwhm", f.fwhm},         {"bias_err", f.bias_err},           {"amplitude_err", f.amplitude_err},
          {"center_err", f.center_err}, {"fwhm_err", f.fwhm_err},       {"p_values", f.p_values()}};
}

inline json to_json(const time_stats& t) { return {{"tau_s_ns", t.tau_s_ns}, {"tau_i_ns", t.tau_i_ns}, {"rho_t", t.rho_t}}; }

inline json to_json(const sellmeier_fit_report& r) {
  return {{"fitted", r.fitted},        {"uncertainties", r.uncertainties}, {"rss", r.rss},
          {"rss_start", r.rss_start},  {"average_error", r.average_error}, {"converged", r.converged},
          {"iterations", r.iterations}, {"points", r.points},              {"masked_points", r.masked_points}};
}

}  // namespace pwb::io
