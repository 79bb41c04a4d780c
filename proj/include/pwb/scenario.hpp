#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "pwb/bent_guide.hpp"
#include "pwb/io.hpp"
#include "pwb/rect_guide.hpp"

namespace pwb::scenario {

using io::diagnostic;
using io::json;
namespace fs = std::filesystem;

namespace detail {

struct checker {
  std::vector<diagnostic>& d;

  bool object(const json& j, const std::string& path) {
    if (!j.is_object()) {
      d.push_back({path.empty() ? "/" : path, "must be an object"});
      return false;
    }
    return true;
  }
  template <class Pred>
  void number(const json& parent, const std::string& path, const char* key, bool required, Pred pred, const char* msg) {
    if (!parent.contains(key)) {
      if (required) d.push_back({path + "/" + key, "missing"});
      return;
    }
    if (!parent[key].is_number()) {
      d.push_back({path + "/" + key, "must be a number"});
      return;
    }
    if (!pred(parent[key].get<double>())) d.push_back({path + "/" + key, msg});
  }
  void string_in(const json& parent, const std::string& path, const char* key, std::initializer_list<const char*> options) {
    if (!parent.contains(key)) return;
    if (!parent[key].is_string()) {
      d.push_back({path + "/" + key, "must be a string"});
      return;
    }
    const auto v = parent[key].get<std::string>();
    for (const char* o : options)
      if (v == o) return;
    d.push_back({path + "/" + key, "unsupported value '" + v + "'"});
  }
};

inline bool positive(double v) { return v > 0; }
inline bool finite(double v) { return std::isfinite(v); }

}  // namespace detail

inline void check_crystal_ref(const json& s, const fs::path& base, std::vector<diagnostic>& d) {
  if (!s.contains("crystal")) {
    d.push_back({"/crystal", "missing"});
    return;
  }
  const auto& c = s["crystal"];
  if (c.is_string()) {
    const fs::path p = base / c.get<std::string>();
    if (!fs::exists(p)) {
      d.push_back({"/crystal", "file not found: " + p.string()});
      return;
    }
    try {
      io::check_crystal_json(io::read_json(p), "/crystal", d);
    } catch (const error& e) {
      d.push_back({"/crystal", e.what()});
    }
  } else {
    io::check_crystal_json(c, "/crystal", d);
  }
}

inline crystal_spec load_crystal_ref(const json& s, const fs::path& base) {
  const auto& c = s.at("crystal");
  return c.is_string() ? io::load_crystal(base / c.get<std::string>()) : io::crystal_from_json(c);
}

inline void check_bent(const json& s, std::vector<diagnostic>& d) {
  detail::checker ck{d};
  if (!s.contains("spec")) {
    d.push_back({"/spec", "missing"});
    return;
  }
  const auto& sp = s["spec"];
  if (!ck.object(sp, "/spec")) return;
  ck.number(sp, "/spec", "inner_radius", true, detail::positive, "must be > 0");
  ck.number(sp, "/spec", "outer_radius", true, detail::positive, "must be > 0");
  ck.number(sp, "/spec", "half_height", true, detail::positive, "must be > 0");
  ck.number(sp, "/spec", "core_index", true, detail::positive, "must be > 0");
  ck.number(sp, "/spec", "clad_index", true, [](double v) { return v >= 1; }, "must be >= 1");
  ck.number(sp, "/spec", "wavelength", true, detail::positive, "must be > 0");
  if (sp.contains("inner_radius") && sp.contains("outer_radius") && sp["inner_radius"].is_number() &&
      sp["outer_radius"].is_number() && sp["inner_radius"].get<double>() >= sp["outer_radius"].get<double>())
    d.push_back({"/spec/inner_radius", "must be smaller than outer_radius"});
  if (sp.contains("core_index") && sp.contains("clad_index") && sp["core_index"].is_number() &&
      sp["clad_index"].is_number() && sp["core_index"].get<double>() <= sp["clad_index"].get<double>())
    d.push_back({"/spec/core_index", "must exceed clad_index"});
  if (s.contains("options") && ck.object(s["options"], "/options")) {
    ck.number(s["options"], "/options", "guidance_margin", false, [](double v) { return v >= 0; }, "must be >= 0");
    ck.number(s["options"], "/options", "m_scan_step", false, detail::positive, "must be > 0");
  }
}

inline bent_guide_spec bent_spec(const json& s) {
  const auto& sp = s.at("spec");
  return {sp.at("inner_radius").get<double>(), sp.at("outer_radius").get<double>(), sp.at("half_height").get<double>(),
          sp.at("core_index").get<double>(),   sp.at("clad_index").get<double>(),   sp.at("wavelength").get<double>()};
}

inline bent_solve_options bent_options(const json& s) {
  bent_solve_options o;
  if (s.contains("options")) {
    o.guidance_margin = s["options"].value("guidance_margin", o.guidance_margin);
    o.m_scan_step = s["options"].value("m_scan_step", o.m_scan_step);
  }
  return o;
}

inline void check_rect(const json& s, std::vector<diagnostic>& d) {
  detail::checker ck{d};
  if (!s.contains("spec")) {
    d.push_back({"/spec", "missing"});
    return;
  }
  const auto& sp = s["spec"];
  if (!ck.object(sp, "/spec")) return;
  ck.number(sp, "/spec", "width", true, detail::positive, "must be > 0");
  ck.number(sp, "/spec", "height", true, detail::positive, "must be > 0");
  ck.string_in(sp, "/spec", "kind", {"hollow", "dielectric"});
  const bool hollow = sp.value("kind", std::string("hollow")) == "hollow";
  if (hollow) {
    ck.number(s, "", "frequency_thz", true, detail::positive, "must be > 0");
  } else {
    ck.number(sp, "/spec", "core_index", true, [](double v) { return v >= 1; }, "must be >= 1");
    ck.number(sp, "/spec", "clad_index", true, [](double v) { return v >= 1; }, "must be >= 1");
    if (sp.contains("core_index") && sp.contains("clad_index") && sp["core_index"].is_number() &&
        sp["clad_index"].is_number() && sp["core_index"].get<double>() <= sp["clad_index"].get<double>())
      d.push_back({"/spec/core_index", "must exceed clad_index"});
    ck.number(s, "", "wavelength_um", true, detail::positive, "must be > 0");
    ck.string_in(s, "", "polarization", {"Ey", "Ex"});
  }
  if (s.contains("field") && ck.object(s["field"], "/field")) {
    ck.number(s["field"], "/field", "nx", false, [](double v) { return v >= 1; }, "must be >= 1");
    ck.number(s["field"], "/field", "ny", false, [](double v) { return v >= 1; }, "must be >= 1");
  }
}

inline rect_guide_spec rect_spec(const json& s) {
  const auto& sp = s.at("spec");
  rect_guide_spec r;
  r.width_um = sp.at("width").get<double>();
  r.height_um = sp.at("height").get<double>();
  r.kind = sp.value("kind", std::string("hollow")) == "hollow" ? guide_kind::hollow : guide_kind::dielectric;
  r.core_index = sp.value("core_index", 1.0);
  r.clad_index = sp.value("clad_index", 1.0);
  return r;
}

inline void check_biphoton(const json& s, const fs::path& base, std::vector<diagnostic>& d, bool need_fiber) {
  detail::checker ck{d};
  check_crystal_ref(s, base, d);
  if (!s.contains("pump")) {
    d.push_back({"/pump", "missing"});
  } else if (ck.object(s["pump"], "/pump")) {
    const auto& p = s["pump"];
    if (!p.contains("center_omega") && !p.contains("wavelength_nm")) d.push_back({"/pump/center_omega", "missing (or give wavelength_nm)"});
    ck.number(p, "/pump", "center_omega", false, detail::positive, "must be > 0");
    ck.number(p, "/pump", "wavelength_nm", false, detail::positive, "must be > 0");
    ck.number(p, "/pump", "tau_fs", true, detail::positive, "must be > 0");
    ck.number(p, "/pump", "width_um", true, detail::positive, "must be > 0");
    ck.string_in(p, "/pump", "duration_convention", {"amplitude", "intensity_std"});
  }
  if (!s.contains("coupling")) {
    d.push_back({"/coupling", "missing"});
  } else if (ck.object(s["coupling"], "/coupling")) {
    ck.number(s["coupling"], "/coupling", "signal_width_um", true, detail::positive, "must be > 0");
    ck.number(s["coupling"], "/coupling", "idler_width_um", true, detail::positive, "must be > 0");
  }
  if (s.contains("grid") && ck.object(s["grid"], "/grid")) {
    const auto& g = s["grid"];
    ck.number(g, "/grid", "n", false, [](double v) { return v >= 16 && v == std::floor(v); }, "must be an integer >= 16");
    ck.number(g, "/grid", "range_fraction", false, [](double v) { return v > 0 && v < 0.5; }, "must lie in (0, 0.5)");
    ck.number(g, "/grid", "center_signal", false, detail::positive, "must be > 0");
    ck.number(g, "/grid", "center_idler", false, detail::positive, "must be > 0");
  }
  if (s.contains("config") && ck.object(s["config"], "/config")) {
    const auto& c = s["config"];
    for (const char* k : {"pol_pump", "pol_signal", "pol_idler"}) ck.string_in(c, "/config", k, {"fast", "slow", "x", "y", "z"});
    ck.number(c, "/config", "qpm_sign", false, [](double v) { return v == 1 || v == -1; }, "must be +1 or -1");
    ck.number(c, "/config", "qpm_order", false, [](double v) { return v >= 1 && v == std::floor(v); }, "must be a positive integer");
    ck.number(c, "/config", "temperature_k", false, detail::positive, "must be > 0");
    ck.number(c, "/config", "z_order", false, [](double v) { return v >= 2 && v == std::floor(v); }, "must be an integer >= 2");
  }
  if (need_fiber) {
    if (!s.contains("fiber")) {
      d.push_back({"/fiber", "missing"});
    } else if (ck.object(s["fiber"], "/fiber")) {
      ck.number(s["fiber"], "/fiber", "gvd_2beta_s2_per_m", true, detail::finite, "must be finite");
      ck.number(s["fiber"], "/fiber", "length_m", true, [](double v) { return v >= 0; }, "must be >= 0");
      ck.string_in(s["fiber"], "/fiber", "mode", {"stationary", "exact"});
    }
  }
}

struct biphoton_scenario {
  crystal_spec crystal;
  pump_spec pump;
  coupling_spec coupling;
  jsa_grid_spec grid;
  biphoton_config config;
  fiber_spec fiber;
  std::string fiber_mode = "stationary";
};

inline biphoton_scenario load_biphoton(const json& s, const fs::path& base) {
  biphoton_scenario b;
  b.crystal = load_crystal_ref(s, base);
  const auto& p = s.at("pump");
  b.pump.center_omega = p.contains("center_omega") ? p["center_omega"].get<double>()
                                                   : wavelength_um_to_omega(p.at("wavelength_nm").get<double>() * 1e-3);
  b.pump.tau_fs = p.at("tau_fs").get<double>();
  b.pump.width_um = p.at("width_um").get<double>();
  b.pump.convention = p.value("duration_convention", std::string("amplitude")) == "intensity_std"
                          ? pump_duration_convention::intensity_std
                          : pump_duration_convention::amplitude;
  b.coupling.signal_width_um = s.at("coupling").at("signal_width_um").get<double>();
  b.coupling.idler_width_um = s.at("coupling").at("idler_width_um").get<double>();
  if (s.contains("config")) {
    const auto& c = s["config"];
    b.config.pol_pump = parse_polarization(c.value("pol_pump", std::string("z")));
    b.config.pol_signal = parse_polarization(c.value("pol_signal", std::string("z")));
    b.config.pol_idler = parse_polarization(c.value("pol_idler", std::string("z")));
    b.config.qpm_sign = c.value("qpm_sign", -1);
    b.config.qpm_order = c.value("qpm_order", 1);
    b.config.temperature_k = c.value("temperature_k", 298.0);
    b.config.z_order = c.value("z_order", 64);
  }
  const json g = s.value("grid", json::object());
  b.grid.n = g.value("n", 300);
  b.grid.range_fraction = g.value("range_fraction", 0.02);
  if (g.contains("center_signal") && g.contains("center_idler")) {
    b.grid.center_signal = g["center_signal"].get<double>();
    b.grid.center_idler = g["center_idler"].get<double>();
  } else {
    b.grid.center_signal = classical_signal_omega(b.pump.center_omega, b.crystal, b.config);
    b.grid.center_idler = b.pump.center_omega - b.grid.center_signal;
  }
  if (s.contains("fiber")) {
    b.fiber.gvd_2beta_s2_per_m = s["fiber"].at("gvd_2beta_s2_per_m").get<double>();
    b.fiber.length_m = s["fiber"].at("length_m").get<double>();
    b.fiber_mode = s["fiber"].value("mode", std::string("stationary"));
  }
  return b;
}

inline void check_sweep(const json& s, const fs::path& base, std::vector<diagnostic>& d) {
  detail::checker ck{d};
  check_crystal_ref(s, base, d);
  if (!s.contains("pump_nm")) {
    d.push_back({"/pump_nm", "missing"});
  } else if (ck.object(s["pump_nm"], "/pump_nm")) {
    ck.number(s["pump_nm"], "/pump_nm", "from", true, detail::positive, "must be > 0");
    ck.number(s["pump_nm"], "/pump_nm", "to", true, detail::positive, "must be > 0");
    ck.number(s["pump_nm"], "/pump_nm", "step", true, detail::positive, "must be > 0");
  }
  if (s.contains("query") && ck.object(s["query"], "/query")) {
    const auto& q = s["query"];
    for (const char* k : {"pol_pump", "pol_signal", "pol_idler"}) ck.string_in(q, "/query", k, {"fast", "slow", "x", "y", "z"});
    ck.number(q, "/query", "qpm_sign", false, [](double v) { return v == 1 || v == -1; }, "must be +1 or -1");
    ck.number(q, "/query", "temperature_k", false, detail::positive, "must be > 0");
  }
}

inline phase_match_query load_query(const json& s) {
  phase_match_query q;
  if (!s.contains("query")) return q;
  const auto& j = s["query"];
  q.pump_theta = j.value("pump_theta", 0.0);
  q.pump_phi = j.value("pump_phi", 0.0);
  q.signal_theta = j.value("signal_theta", 0.0);
  q.signal_phi = j.value("signal_phi", 0.0);
  q.temperature_k = j.value("temperature_k", 298.0);
  q.pol_pump = parse_polarization(j.value("pol_pump", std::string("z")));
  q.pol_signal = parse_polarization(j.value("pol_signal", std::string("z")));
  q.pol_idler = parse_polarization(j.value("pol_idler", std::string("z")));
  q.qpm_order = j.value("qpm_order", 1);
  q.qpm_sign = j.value("qpm_sign", -1);
  return q;
}

inline std::optional<wavelength_window> load_window(const json& s) {
  if (!s.contains("window_nm")) return std::nullopt;
  const auto& w = s["window_nm"];
  return wavelength_window{w.at(0).get<double>(), w.at(1).get<double>()};
}

inline void check_fit(const json& s, const fs::path& base, std::vector<diagnostic>& d) {
  check_crystal_ref(s, base, d);
  if (!s.contains("data") || !s["data"].is_string()) {
    d.push_back({"/data", "missing dataset path"});
  } else if (!fs::exists(base / s["data"].get<std::string>())) {
    d.push_back({"/data", "file not found: " + (base / s["data"].get<std::string>()).string()});
  }
  if (s.contains("free")) {
    if (!s["free"].is_array()) {
      d.push_back({"/free", "must be an array of coefficient indices"});
    } else {
      for (std::size_t i = 0; i < s["free"].size(); ++i)
        if (!s["free"][i].is_number_integer() || s["free"][i].get<int>() < 0 || s["free"][i].get<int>() > 4)
          d.push_back({"/free/" + std::to_string(i), "must be an integer in [0, 4]"});
    }
  }
}

inline sellmeier_fit_setup load_fit_setup(const json& s, const fs::path& base) {
  sellmeier_fit_setup st;
  st.crystal = load_crystal_ref(s, base);
  st.query = load_query(s);
  st.fitted_axis = parse_polarization(s.value("axis", std::string("z")));
  if (s.contains("free")) st.free_coefficients = s["free"].get<std::vector<int>>();
  st.window = load_window(s);
  st.sigma_weighting = s.value("sigma_weighting", false);
  return st;
}

inline std::vector<diagnostic> validate(const json& s, const fs::path& base) {
  std::vector<diagnostic> d;
  if (!s.is_object()) return {{"/", "scenario must be a JSON object"}};
  if (!s.contains("command") || !s["command"].is_string()) return {{"/command", "missing command discriminator"}};
  const auto cmd = s["command"].get<std::string>();
  if (cmd == "bentguide") check_bent(s, d);
  else if (cmd == "rectguide") check_rect(s, d);
  else if (cmd == "jsa") check_biphoton(s, base, d, false);
  else if (cmd == "fiber") check_biphoton(s, base, d, true);
  else if (cmd == "phasematch") check_sweep(s, base, d);
  else if (cmd == "fit-sellmeier") check_fit(s, base, d);
  else d.push_back({"/command", "unknown command '" + cmd + "'"});
  return d;
}

inline std::vector<diagnostic> validate_file(const fs::path& p) {
  return validate(io::read_json(p), p.parent_path());
}

}  // namespace pwb::scenario
