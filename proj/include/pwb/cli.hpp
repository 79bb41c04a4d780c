#pragma once

#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pwb/bent_guide.hpp"
#include "pwb/fiber_prop.hpp"
#include "pwb/io.hpp"
#include "pwb/materials.hpp"
#include "pwb/photon_stats.hpp"
#include "pwb/rect_guide.hpp"
#include "pwb/scenario.hpp"

namespace pwb::cli {

using io::json;
namespace fs = std::filesystem;

constexpr int exit_ok = 0;
constexpr int exit_failed_check = 1;
constexpr int exit_validation = 2;
constexpr int exit_solver = 3;

inline int validation_exit_code(errc e) {
  switch (e) {
    case errc::validation:
    case errc::parse_error:
    case errc::io_error:
      return exit_validation;
    default:
      return exit_solver;
  }
}

// ---- golden comparisons ---------------------------------------------------

struct golden_row {
  std::string group, name;
  double expected, actual, tolerance;
  bool relative;
  bool pass;
};

inline golden_row compare(std::string group, std::string name, double expected, double actual, double tol, bool relative) {
  const double err = relative ? std::abs(actual - expected) / std::abs(expected) : std::abs(actual - expected);
  return {std::move(group), std::move(name), expected, actual, tol, relative, err <= tol};
}

struct bent_table_entry {
  int q, p;
  double m, n_eff;
  bool red;
};

// Mode table of the reference bent guide.
inline const std::vector<bent_table_entry>& bent_reference_table() {
  static const std::vector<bent_table_entry> t{
      {1, 1, 20.54, 2.03, false}, {1, 2, 16.50, 1.86, false}, {1, 3, 13.23, 1.69, false}, {1, 4, 10.26, 1.46, false},
      {1, 5, 6.03, 0.9, true},    {2, 1, 17.391, 1.75, false}, {2, 2, 13.54, 1.58, false}, {2, 3, 10.41, 1.40, false},
      {2, 4, 7.15, 1.02, true},   {3, 1, 11.53, 1.22, false}, {3, 2, 8.08, 1.04, true},    {3, 3, 4.56, 0.6, true}};
  return t;
}

struct radius_entry {
  int q, p;
  double r;
};

inline const std::vector<radius_entry>& bent_reference_radii() {
  static const std::vector<radius_entry> t{{1, 1, 1.29}, {2, 1, 1.27}, {3, 1, 1.21}, {1, 2, 1.13}, {2, 2, 1.09},
                                           {3, 2, 0.99}, {1, 3, 1.00}, {2, 3, 0.95}, {3, 3, 0.9},  {1, 4, 0.90},
                                           {2, 4, 0.89}};
  return t;
}

inline const bent_mode_solution* find_mode(const std::vector<bent_mode_solution>& modes, int q, int p) {
  for (const auto& m : modes)
    if (m.q == q && m.p == p) return &m;
  return nullptr;
}

inline std::vector<golden_row> golden_bent(const bent_guide_spec& s = {}, const bent_solve_options& opt = {}) {
  std::vector<golden_row> rows;
  const auto modes = solve_bent_guide(s, opt);
  const auto vr = vertical_roots(s);
  const double bw[] = {5.03, 9.94, 14.46}, hh[] = {17.35, 15.09, 10.8};
  for (std::size_t i = 0; i < 3; ++i) {
    const double b = i < vr.size() ? vr[i].beta_w : NAN;
    const double h = i < vr.size() ? radial_h(s, vr[i].beta_w) : NAN;
    rows.push_back(compare("bent", "beta_w q=" + std::to_string(i + 1), bw[i], b, 0.005, true));
    rows.push_back(compare("bent", "h q=" + std::to_string(i + 1), hh[i], h, 0.005, true));
  }
  rows.push_back(compare("bent", "q_max", 3, static_cast<double>(vr.size()), 0, false));
  const int pmax[] = {5, 4, 3};
  for (int q = 1; q <= 3; ++q) {
    int n = 0;
    for (const auto& m : modes) n += m.q == q;
    rows.push_back(compare("bent", "p_max q=" + std::to_string(q), pmax[q - 1], n, 0, false));
  }
  for (const auto& e : bent_reference_table()) {
    const auto* m = find_mode(modes, e.q, e.p);
    const std::string tag = "(p=" + std::to_string(e.p) + ",q=" + std::to_string(e.q) + ")";
    rows.push_back(compare("bent", "m " + tag, e.m, m ? m->m : NAN, 0.01, true));
    rows.push_back(compare("bent", "n_eff " + tag, e.n_eff, m ? m->n_eff : NAN, 0.03, true));
    rows.push_back(compare("bent", "physical " + tag, e.red ? 0 : 1, m ? (m->physical ? 1 : 0) : NAN, 0, false));
  }
  for (const auto& e : bent_reference_radii()) {
    const auto* m = find_mode(modes, e.q, e.p);
    rows.push_back(compare("bent", "<r> (p=" + std::to_string(e.p) + ",q=" + std::to_string(e.q) + ")", e.r,
                           m ? m->mean_radius : NAN, 0.05, false));
  }
  return rows;
}

inline std::vector<golden_row> golden_stats() {
  std::vector<golden_row> rows;
  rows.push_back(compare("stats", "g2 fock(1)", 0.0, g2_from_moments(fock_moments(1)), 0, false));
  rows.push_back(compare("stats", "g2 fock(2)", 0.5, g2_from_moments(fock_moments(2)), 0, false));
  rows.push_back(compare("stats", "g2 coherent", 1.0, g2_from_moments(coherent_moments(3.0)), 0, false));
  rows.push_back(compare("stats", "g2 thermal", 2.0, g2_from_moments(thermal_moments(0.7)), 1e-12, false));
  return rows;
}

inline std::vector<golden_row> golden_fiber() {
  return {compare("fiber", "|2 beta D| ns/PHz", 227.0, dispersion_scale({-2.27e-26, 1e4}), 1e-12, true)};
}

inline std::vector<golden_row> golden_phasematch() {
  const auto sol = solve_signal_wavelength({}, materials::ppktp_396(), default_signal_window(396.0));
  return {compare("phasematch", "signal nm at 396 nm pump", 532.0, sol.signal_wavelength_nm, 0.01, true),
          compare("phasematch", "idler nm at 396 nm pump", 1550.0, sol.idler_wavelength_nm, 0.02, true)};
}

inline std::vector<golden_row> golden_biphoton() {
  std::vector<golden_row> rows;
  const auto c = materials::ppktp_type2();
  biphoton_config cfg;
  cfg.pol_pump = polarization::y;
  cfg.pol_signal = polarization::y;
  cfg.pol_idler = polarization::z;
  cfg.qpm_sign = 1;
  const double wp = wavelength_um_to_omega(0.7801);
  const fiber_spec f{-2.27e-26, 1e4};
  struct row {
    double tau_fs, range, rho, tau_s, tau_i;
  };
  const row table[] = {{94.58, 0.02, 0.9535, 1.156, 1.182}, {719.1, 0.0075, -0.0921, 0.22152, 0.226509},
                       {976.0, 0.005, -0.35761, 0.19625, 0.2007}};
  for (const auto& r : table) {
    const pump_spec p{wp, r.tau_fs, 41.0, pump_duration_convention::intensity_std};
    const jsa_grid_spec gs{300, r.range, 1.2209, 1.19404};
    const auto fit = fit_gaussian_2d(compute_jsa(p, {48.75, 48.75}, c, gs, cfg));
    const auto ts = time_stats_from_frequency(fit, f);
    const std::string tag = " tau_p=" + io::fmt9(r.tau_fs) + " fs";
    if (r.rho > 0)
      rows.push_back(compare("biphoton", "rho" + tag, r.rho, fit.rho, 0.05, false));
    else
      rows.push_back({"biphoton", "rho<0" + tag, r.rho, fit.rho, 0, false, fit.rho < 0});
    rows.push_back(compare("biphoton", "tau_s ns" + tag, r.tau_s, ts.tau_s_ns, 0.15, true));
    rows.push_back(compare("biphoton", "tau_i ns" + tag, r.tau_i, ts.tau_i_ns, 0.15, true));
  }
  return rows;
}

inline std::vector<golden_row> golden_rect() {
  rect_guide_spec s;
  s.width_um = 22860.0;
  s.height_um = 10160.0;
  return {compare("rect", "TE10 cutoff THz", c_um_per_ps / (2.0 * s.width_um), hollow_cutoff_thz(s, 1, 0), 1e-15, true)};
}

inline void print_matrix(std::ostream& out, const std::vector<golden_row>& rows) {
  for (const auto& r : rows) {
    char line[256];
    std::snprintf(line, sizeof line, "%-4s %-10s %-28s expected %-12s got %-12s tol %s%s\n", r.pass ? "PASS" : "FAIL",
                  r.group.c_str(), r.name.c_str(), io::fmt9(r.expected).c_str(), io::fmt9(r.actual).c_str(),
                  io::fmt9(r.tolerance).c_str(), r.relative ? " rel" : "");
    out << line;
  }
  std::size_t passed = 0;
  for (const auto& r : rows) passed += r.pass;
  out << passed << "/" << rows.size() << " golden checks passed\n";
}

// ---- helpers --------------------------------------------------------------

struct output_sink {
  std::optional<fs::path> dir;
  std::vector<std::string> written;

  void write(const std::string& name, const std::string& text) {
    if (!dir) return;
    fs::create_directories(*dir);
    io::write_text(*dir / name, text);
    written.push_back((*dir / name).string());
  }
};

inline output_sink make_sink(const json& s, const fs::path& base, const std::string& override_dir) {
  output_sink o;
  if (!override_dir.empty()) o.dir = fs::path(override_dir);
  else if (s.contains("output_dir") && s["output_dir"].is_string()) o.dir = base / s["output_dir"].get<std::string>();
  return o;
}

// Best-effort line lookup for the last key of a JSON pointer.
inline int pointer_line(const std::string& text, const std::string& pointer) {
  const auto slash = pointer.find_last_of('/');
  std::string key = slash == std::string::npos ? pointer : pointer.substr(slash + 1);
  if (key.empty() || std::isdigit(static_cast<unsigned char>(key[0]))) {
    const auto prev = pointer.substr(0, slash == std::string::npos ? 0 : slash);
    if (prev.empty()) return 0;
    return pointer_line(text, prev);
  }
  const auto pos = text.find("\"" + key + "\"");
  if (pos == std::string::npos) return 0;
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(pos), '\n'));
}

inline json diagnostics_json(const std::vector<io::diagnostic>& d) {
  json arr = json::array();
  for (const auto& x : d) arr.push_back({{"path", x.path}, {"message", x.message}});
  return arr;
}

inline void report_diagnostics(std::ostream& err, const fs::path& file, const std::vector<io::diagnostic>& d) {
  std::string text;
  try {
    text = io::read_text(file);
  } catch (...) {
  }
  for (const auto& x : d) {
    const int line = pointer_line(text, x.path);
    err << file.string() << ":" << line << ": " << x.path << ": " << x.message << "\n";
  }
}

struct loaded_scenario {
  json doc;
  fs::path file, base;
};

// Loads and validates; returns an exit code on failure.
inline std::optional<int> load_scenario(const std::string& path, const std::string& command, loaded_scenario& s,
                                        std::ostream& err) {
  s.file = fs::path(path);
  s.base = s.file.parent_path();
  s.doc = io::read_json(s.file);
  if (s.doc.is_object() && !s.doc.contains("command")) s.doc["command"] = command;
  auto d = scenario::validate(s.doc, s.base);
  if (d.empty() && s.doc["command"] != command)
    d.push_back({"/command", "scenario is for '" + s.doc["command"].get<std::string>() + "', not '" + command + "'"});
  if (!d.empty()) {
    report_diagnostics(err, s.file, d);
    return exit_validation;
  }
  return std::nullopt;
}

inline void emit(std::ostream& out, const json& j) { out << io::round9(j).dump(2) << "\n"; }

inline json mode_json(const bent_mode_solution& m) {
  return {{"q", m.q},       {"p", m.p},         {"parity", to_string(m.par)}, {"beta_w", m.beta_w},
          {"beta_s", m.beta_s}, {"h", m.h},     {"m", m.m},                   {"gamma", m.gamma},
          {"n_eff", m.n_eff}, {"mean_radius", m.mean_radius}, {"physical", m.physical}};
}

inline json rect_json(const rect_mode& m) {
  json j{{"family", to_string(m.family)}, {"m", m.m}, {"n", m.n}, {"kx", m.kx}, {"ky", m.ky}, {"kz", m.kz}};
  if (m.cutoff_thz > 0) j["cutoff_thz"] = m.cutoff_thz;
  if (m.kappa_x > 0) {
    j["kappa_x"] = m.kappa_x;
    j["kappa_y"] = m.kappa_y;
  }
  return j;
}

// Parses fock:N, thermal:x, coherent[:mean], tmsv:R.
inline json g2_state(const std::string& state) {
  const auto colon = state.find(':');
  const std::string kind = state.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : state.substr(colon + 1);
  auto number = [&](double fallback) {
    if (arg.empty()) return fallback;
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(arg, &used);
    } catch (...) {
      used = 0;
    }
    if (used != arg.size()) throw error(errc::validation, "bad state parameter '" + arg + "'");
    return v;
  };
  number_moments m;
  json j{{"state", state}};
  if (kind == "fock") {
    const double n = number(NAN);
    if (!(n >= 1) || n != std::floor(n)) throw error(errc::validation, "fock needs an integer photon number >= 1");
    m = fock_moments(static_cast<int>(n));
  } else if (kind == "thermal") {
    const double x = number(NAN);
    if (!(x > 0)) throw error(errc::validation, "thermal needs beta*hbar*omega > 0");
    m = thermal_moments(x);
  } else if (kind == "coherent") {
    const double mean = number(1.0);
    if (!(mean > 0)) throw error(errc::validation, "coherent mean must be > 0");
    m = coherent_moments(mean);
  } else if (kind == "tmsv") {
    const double r = number(NAN);
    if (!(r > 0)) throw error(errc::validation, "tmsv needs R > 0");
    const auto t = tmsv_moments(r);
    m = t.mode;
    j["difference_variance"] = t.difference_variance;
    j["correlation"] = t.correlation;
  } else {
    throw error(errc::validation, "unknown state '" + kind + "' (fock:N, thermal:x, coherent[:mean], tmsv:R)");
  }
  const double g2 = g2_from_moments(m);
  j["mean"] = m.mean;
  j["variance"] = m.variance;
  j["g2"] = g2;
  j["class"] = to_string(classify(g2));
  return j;
}

// ---- subcommands ----------------------------------------------------------

struct options {
  std::string scenario, crystal, data, spec, state, out_dir, out_file, axis = "z";
  double from = 0.35, to = 1.6, step = 0.01, temperature = 298.0;
  double rate = 1e6, horizon = 1e-4, keep = 1.0;
  std::uint64_t seed = 1;
  std::vector<int> free{0, 1, 2};
  bool golden = false;
};

inline int cmd_dispersion(const options& o, std::ostream& out) {
  const auto c = io::load_crystal(o.crystal);
  const auto pol = parse_polarization(o.axis);
  if (!(o.step > 0) || !(o.to > o.from) || !(o.from > 0)) throw error(errc::validation, "need 0 < from < to and step > 0");
  std::string csv = "lambda_um,n\n";
  json rows = json::array();
  const int n = static_cast<int>(std::floor((o.to - o.from) / o.step + 1e-9)) + 1;
  for (int i = 0; i < n; ++i) {
    const double l = o.from + o.step * i;
    const double v = index_of(c, pol, l);
    csv += io::fmt9(l) + "," + io::fmt9(v) + "\n";
    rows.push_back({{"lambda_um", l}, {"n", v}});
  }
  json j{{"crystal", c.name}, {"axis", to_string(pol)}, {"samples", rows}};
  if (c.poling_period_um > 0) j["poling_period_um"] = poling_period(c, o.temperature);
  if (!o.out_file.empty()) {
    io::write_text(o.out_file, csv);
    j["written"] = {o.out_file};
  }
  emit(out, j);
  return exit_ok;
}

inline int cmd_sweep(const options& o, std::ostream& out, std::ostream& err) {
  loaded_scenario s;
  if (auto rc = load_scenario(o.scenario, "phasematch", s, err)) return *rc;
  const auto c = scenario::load_crystal_ref(s.doc, s.base);
  auto q = scenario::load_query(s.doc);
  const auto w = scenario::load_window(s.doc);
  const auto& p = s.doc["pump_nm"];
  const double from = p["from"].get<double>(), to = p["to"].get<double>(), step = p["step"].get<double>();
  auto sink = make_sink(s.doc, s.base, o.out_dir);
  std::string csv = "lambda_pump_nm,lambda_vis_nm,lambda_ir_nm,mismatch_per_um\n";
  json rows = json::array(), failures = json::array();
  const int n = static_cast<int>(std::floor((to - from) / step + 1e-9)) + 1;
  for (int i = 0; i < n; ++i) {
    q.pump_wavelength_nm = from + step * i;
    try {
      const auto sol = solve_signal_wavelength(q, c, w.value_or(default_signal_window(q.pump_wavelength_nm)));
      csv += io::fmt9(q.pump_wavelength_nm) + "," + io::fmt9(sol.signal_wavelength_nm) + "," +
             io::fmt9(sol.idler_wavelength_nm) + "," + io::fmt9(sol.mismatch) + "\n";
      rows.push_back({{"lambda_pump_nm", q.pump_wavelength_nm},
                      {"lambda_vis_nm", sol.signal_wavelength_nm},
                      {"lambda_ir_nm", sol.idler_wavelength_nm},
                      {"mismatch_per_um", sol.mismatch}});
    } catch (const error& e) {
      failures.push_back({{"lambda_pump_nm", q.pump_wavelength_nm}, {"error", to_string(e.code())}, {"message", e.what()}});
    }
  }
  sink.write("sweep.csv", csv);
  json j{{"command", "phasematch sweep"}, {"rows", rows}, {"written", sink.written}};
  if (!failures.empty()) {
    j["status"] = "solver_failure";
    j["partial"] = true;
    j["failures"] = failures;
    emit(out, j);
    return exit_solver;
  }
  j["status"] = "ok";
  emit(out, j);
  return exit_ok;
}

inline int cmd_fit(const options& o, std::ostream& out, std::ostream& err) {
  sellmeier_fit_setup setup;
  std::vector<measurement_point> pts;
  output_sink sink;
  if (!o.scenario.empty()) {
    loaded_scenario s;
    if (auto rc = load_scenario(o.scenario, "fit-sellmeier", s, err)) return *rc;
    setup = scenario::load_fit_setup(s.doc, s.base);
    pts = io::load_measurements(s.base / s.doc["data"].get<std::string>());
    sink = make_sink(s.doc, s.base, o.out_dir);
  } else {
    if (o.crystal.empty() || o.data.empty()) throw error(errc::validation, "fit-sellmeier needs --scenario or --crystal and --data");
    setup.crystal = io::load_crystal(o.crystal);
    setup.fitted_axis = parse_polarization(o.axis);
    for (int k : o.free)
      if (k < 0 || k > 4) throw error(errc::validation, "--free indices must lie in 0..4");
    setup.free_coefficients = o.free;
    pts = io::load_measurements(o.data);
    if (!o.out_dir.empty()) sink.dir = fs::path(o.out_dir);
  }
  const auto start = start_coefficients(setup);
  const auto rep = fit(pts, start, setup);
  auto fitted = setup.crystal;
  auto& set = pwb::detail::fitted_set(fitted, setup.fitted_axis);
  auto coeffs = set.coefficients();
  for (std::size_t k = 0; k < setup.free_coefficients.size(); ++k)
    coeffs[static_cast<std::size_t>(setup.free_coefficients[k])] = rep.fitted[k];
  set = sellmeier_set::from(coeffs);
  sink.write("fitted_crystal.json", io::round9(io::to_json(fitted)).dump(2) + "\n");
  json j = io::to_json(rep);
  j["command"] = "fit-sellmeier";
  j["start"] = start;
  j["free_coefficients"] = setup.free_coefficients;
  j["written"] = sink.written;
  j["status"] = rep.converged ? "ok" : "not_converged";
  emit(out, j);
  return rep.converged ? exit_ok : exit_solver;
}

inline json jsa_summary(const scenario::biphoton_scenario& b, const jsa_grid& g, const gaussian_fit_2d& fit) {
  const auto mom = moments(g);
  json j{{"grid", {{"n", b.grid.n}, {"range_fraction", b.grid.range_fraction}, {"center_signal", b.grid.center_signal},
                   {"center_idler", b.grid.center_idler}}},
         {"fit", io::to_json(fit)},
         {"moments", {{"mean_s", mom.mean_s}, {"mean_i", mom.mean_i}, {"sd_s", mom.sd_s}, {"sd_i", mom.sd_i}, {"rho", mom.rho}}}};
  try {
    j["signal_marginal_fit"] = io::to_json(fit_gaussian_1d(marginal(g, photon::signal)));
  } catch (const error& e) {
    j["signal_marginal_fit"] = {{"error", to_string(e.code())}};
  }
  return j;
}

inline int cmd_jsa(const options& o, std::ostream& out, std::ostream& err) {
  loaded_scenario s;
  if (auto rc = load_scenario(o.scenario, "jsa", s, err)) return *rc;
  const auto b = scenario::load_biphoton(s.doc, s.base);
  auto sink = make_sink(s.doc, s.base, o.out_dir);
  const auto g = compute_jsa(b.pump, b.coupling, b.crystal, b.grid, b.config);
  sink.write("jsa.csv", io::grid_csv(g));
  json j = jsa_summary(b, g, fit_gaussian_2d(g));
  j["command"] = "jsa";
  sink.write("jsa.json", io::round9(j).dump(2) + "\n");
  j["written"] = sink.written;
  j["status"] = "ok";
  emit(out, j);
  return exit_ok;
}

inline int cmd_fiber(const options& o, std::ostream& out, std::ostream& err) {
  loaded_scenario s;
  if (auto rc = load_scenario(o.scenario, "fiber", s, err)) return *rc;
  const auto b = scenario::load_biphoton(s.doc, s.base);
  auto sink = make_sink(s.doc, s.base, o.out_dir);
  const auto g = compute_jsa(b.pump, b.coupling, b.crystal, b.grid, b.config);
  const auto fit = fit_gaussian_2d(g);
  json j = jsa_summary(b, g, fit);
  j["command"] = "fiber";
  j["fiber"] = {{"mode", b.fiber_mode}, {"dispersion_scale_ns_per_phz", dispersion_scale(b.fiber)},
                {"far_field_parameter", far_field_parameter(b.fiber, fit.sigma_s)}};
  j["time_stats_from_fit"] = io::to_json(time_stats_from_frequency(fit, b.fiber));
  try {
    const auto tg = b.fiber_mode == "exact" ? propagate_exact(g, b.fiber) : propagate_stationary(g, b.fiber);
    sink.write("time_grid.csv", io::time_grid_csv(tg));
    j["time_stats"] = io::to_json(moments(tg));
    j["captured_fraction"] = tg.captured_fraction;
  } catch (const error& e) {
    sink.write("fiber.json", io::round9(j).dump(2) + "\n");
    j["written"] = sink.written;
    j["status"] = "solver_failure";
    j["partial"] = true;
    j["error"] = {{"code", to_string(e.code())}, {"message", e.what()}};
    emit(out, j);
    return exit_solver;
  }
  sink.write("fiber.json", io::round9(j).dump(2) + "\n");
  j["written"] = sink.written;
  j["status"] = "ok";
  emit(out, j);
  return exit_ok;
}

inline int cmd_rect(const options& o, std::ostream& out, std::ostream& err) {
  loaded_scenario s;
  if (auto rc = load_scenario(o.spec, "rectguide", s, err)) return *rc;
  const auto spec = scenario::rect_spec(s.doc);
  auto sink = make_sink(s.doc, s.base, o.out_dir);
  std::vector<rect_mode> modes;
  if (spec.kind == guide_kind::hollow) {
    modes = hollow_modes(spec, s.doc["frequency_thz"].get<double>());
  } else {
    const auto pol = s.doc.value("polarization", std::string("Ey")) == "Ex" ? mode_family::Ex : mode_family::Ey;
    modes = marcatili_solve(spec, s.doc["wavelength_um"].get<double>(), pol);
  }
  json arr = json::array();
  for (const auto& m : modes) arr.push_back(rect_json(m));
  if (s.doc.contains("field") && !modes.empty()) {
    const auto& f = s.doc["field"];
    const int nx = f.value("nx", 41), ny = f.value("ny", 41);
    const double mx = spec.kind == guide_kind::hollow ? 0.0 : 0.5 * spec.width_um;
    const double my = spec.kind == guide_kind::hollow ? 0.0 : 0.5 * spec.height_um;
    const sample_grid grid = spec.kind == guide_kind::hollow
                                 ? sample_grid{0.0, spec.width_um, nx, 0.0, spec.height_um, ny}
                                 : sample_grid{-spec.width_um / 2 - mx, spec.width_um / 2 + mx, nx,
                                               -spec.height_um / 2 - my, spec.height_um / 2 + my, ny};
    const std::size_t count = std::min<std::size_t>(modes.size(), static_cast<std::size_t>(f.value("modes", 1)));
    for (std::size_t k = 0; k < count; ++k) {
      std::string csv = "x_um,y_um,field\n";
      for (const auto& p : mode_field(modes[k], spec, grid))
        csv += io::fmt9(p.x) + "," + io::fmt9(p.y) + "," + io::fmt9(p.value) + "\n";
      sink.write("field_" + to_string(modes[k].family) + "_" + std::to_string(modes[k].m) + std::to_string(modes[k].n) + ".csv",
                 csv);
    }
  }
  json j{{"command", "rectguide"}, {"modes", arr}, {"written", sink.written}, {"status", "ok"}};
  emit(out, j);
  return exit_ok;
}

inline int cmd_bent(const options& o, std::ostream& out, std::ostream& err) {
  loaded_scenario s;
  if (auto rc = load_scenario(o.spec, "bentguide", s, err)) return *rc;
  const auto spec = scenario::bent_spec(s.doc);
  const auto opt = scenario::bent_options(s.doc);
  auto sink = make_sink(s.doc, s.base, o.out_dir);
  if (o.golden) {
    const auto rows = golden_bent(spec, opt);
    print_matrix(out, rows);
    for (const auto& r : rows)
      if (!r.pass) return exit_failed_check;
    return exit_ok;
  }
  const auto modes = solve_bent_guide(spec, opt);
  const auto counts = count_vertical_modes(spec);
  json arr = json::array();
  std::string csv = "q,p,parity,beta_w,h,m,n_eff,mean_radius,physical\n";
  for (const auto& m : modes) {
    arr.push_back(mode_json(m));
    csv += std::to_string(m.q) + "," + std::to_string(m.p) + "," + to_string(m.par) + "," + io::fmt9(m.beta_w) + "," +
           io::fmt9(m.h) + "," + io::fmt9(m.m) + "," + io::fmt9(m.n_eff) + "," + io::fmt9(m.mean_radius) + "," +
           (m.physical ? "1" : "0") + "\n";
  }
  sink.write("modes.csv", csv);
  json j{{"command", "bentguide solve"},
         {"vertical_v", vertical_v(spec)},
         {"q_max", counts.tan_roots + counts.cot_roots},
         {"modes", arr},
         {"written", sink.written},
         {"status", "ok"}};
  emit(out, j);
  return exit_ok;
}

inline int cmd_g2(const options& o, std::ostream& out) {
  emit(out, g2_state(o.state));
  return exit_ok;
}

inline int cmd_simulate(const options& o, std::ostream& out) {
  const auto rec = simulate_poisson(o.rate, o.horizon, o.seed);
  const auto br = branch(rec, o.keep, counter_rng::derive(o.seed, 1));
  const auto& times = o.keep < 1.0 ? br.kept.arrival_times : rec.arrival_times;
  std::string text;
  for (double t : times) text += io::fmt9(t) + "\n";
  if (o.out_file.empty()) {
    out << text;
    return exit_ok;
  }
  io::write_text(o.out_file, text);
  emit(out, {{"command", "stats simulate"},
             {"rate", o.rate},
             {"horizon", o.horizon},
             {"seed", o.seed},
             {"keep_probability", o.keep},
             {"events", rec.arrival_times.size()},
             {"kept", times.size()},
             {"written", {o.out_file}}});
  return exit_ok;
}

inline int cmd_validate(const options& o, std::ostream& out, std::ostream& err) {
  const fs::path file(o.scenario);
  const auto d = scenario::validate_file(file);
  emit(out, {{"file", file.string()}, {"valid", d.empty()}, {"diagnostics", diagnostics_json(d)}});
  if (d.empty()) return exit_ok;
  report_diagnostics(err, file, d);
  return exit_validation;
}

inline int cmd_golden(std::ostream& out) {
  std::vector<golden_row> rows;
  for (auto part : {golden_bent(), golden_fiber(), golden_stats(), golden_rect(), golden_phasematch(), golden_biphoton()})
    rows.insert(rows.end(), part.begin(), part.end());
  print_matrix(out, rows);
  for (const auto& r : rows)
    if (!r.pass) return exit_failed_check;
  return exit_ok;
}

// ---- entry point ----------------------------------------------------------

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Photonics workbench: SPDC, dispersion and waveguide mode tools", "pwb"};
  options o;
  app.add_flag("--golden", o.golden, "Run the reference table comparisons and print a pass/fail matrix");

  auto* disp = app.add_subcommand("dispersion", "Tabulate refractive index along one axis");
  disp->add_option("--crystal", o.crystal, "Crystal JSON file")->required()->check(CLI::ExistingFile);
  disp->add_option("--axis", o.axis, "x, y, z, fast or slow");
  disp->add_option("--from", o.from, "First wavelength (um)");
  disp->add_option("--to", o.to, "Last wavelength (um)");
  disp->add_option("--step", o.step, "Wavelength step (um)");
  disp->add_option("--temperature", o.temperature, "Crystal temperature (K)");
  disp->add_option("--out", o.out_file, "CSV output file");

  auto* pm = app.add_subcommand("phasematch", "Phase matching");
  auto* sweep_cmd = pm->add_subcommand("sweep", "Signal/idler wavelengths over a pump sweep");
  sweep_cmd->add_option("--scenario", o.scenario, "Scenario JSON")->required();
  sweep_cmd->add_option("--out", o.out_dir, "Output directory");
  pm->require_subcommand(1);

  auto* fitc = app.add_subcommand("fit-sellmeier", "Fit Sellmeier coefficients to measured signal wavelengths");
  fitc->add_option("--scenario", o.scenario, "Scenario JSON");
  fitc->add_option("--crystal", o.crystal, "Crystal JSON file (without --scenario)");
  fitc->add_option("--data", o.data, "Measurement CSV (without --scenario)");
  fitc->add_option("--axis", o.axis, "Axis whose coefficients are fitted");
  fitc->add_option("--free", o.free, "Coefficient indices to fit (without --scenario)")->delimiter(',');
  fitc->add_option("--out", o.out_dir, "Output directory");

  auto* jsa = app.add_subcommand("jsa", "Joint spectral probability grid");
  jsa->add_option("--scenario", o.scenario, "Scenario JSON")->required();
  jsa->add_option("--out", o.out_dir, "Output directory");

  auto* fib = app.add_subcommand("fiber", "Propagate a joint spectrum through dispersive fiber");
  fib->add_option("--scenario", o.scenario, "Scenario JSON")->required();
  fib->add_option("--out", o.out_dir, "Output directory");

  auto* rect = app.add_subcommand("rectguide", "Rectangular hollow or dielectric guide modes");
  rect->add_option("--spec", o.spec, "Guide JSON")->required();
  rect->add_option("--out", o.out_dir, "Output directory");

  auto* bent = app.add_subcommand("bentguide", "Bent dielectric guide");
  auto* solve = bent->add_subcommand("solve", "Solve the mode table");
  solve->add_option("--spec", o.spec, "Guide JSON")->required();
  solve->add_option("--out", o.out_dir, "Output directory");
  solve->add_flag("--golden", o.golden, "Compare with the reference table");
  bent->require_subcommand(1);

  auto* stats = app.add_subcommand("stats", "Photon statistics");
  auto* g2 = stats->add_subcommand("g2", "g2(0) of a named state");
  g2->add_option("--state", o.state, "fock:N | thermal:x | coherent[:mean] | tmsv:R")->required();
  auto* sim = stats->add_subcommand("simulate", "Poisson arrival times, optionally thinned");
  sim->add_option("--rate", o.rate, "Events per second");
  sim->add_option("--horizon", o.horizon, "Duration (s)");
  sim->add_option("--seed", o.seed, "Generator seed");
  sim->add_option("--keep", o.keep, "Thinning keep probability");
  sim->add_option("--out", o.out_file, "Arrival-time file (newline separated)");
  stats->require_subcommand(1);

  auto* val = app.add_subcommand("validate", "Check a scenario file");
  val->add_option("scenario", o.scenario, "Scenario JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? exit_ok : exit_validation;
  }

  try {
    if (disp->parsed()) return cmd_dispersion(o, out);
    if (sweep_cmd->parsed()) return cmd_sweep(o, out, err);
    if (fitc->parsed()) return cmd_fit(o, out, err);
    if (jsa->parsed()) return cmd_jsa(o, out, err);
    if (fib->parsed()) return cmd_fiber(o, out, err);
    if (rect->parsed()) return cmd_rect(o, out, err);
    if (solve->parsed()) return cmd_bent(o, out, err);
    if (g2->parsed()) return cmd_g2(o, out);
    if (sim->parsed()) return cmd_simulate(o, out);
    if (val->parsed()) return cmd_validate(o, out, err);
    if (o.golden) return cmd_golden(out);
    err << app.help();
    return exit_validation;
  } catch (const error& e) {
    err << "error: " << e.what() << "\n";
    return validation_exit_code(e.code());
  } catch (const json::exception& e) {
    err << "error: ParseError: " << e.what() << "\n";
    return exit_validation;
  } catch (const fs::filesystem_error& e) {
    err << "error: IoError: " << e.what() << "\n";
    return exit_validation;
  }
}

}  // namespace pwb::cli
