#include "pdc/config.hpp"

#include <cmath>
#include <cstdlib>
#include <set>

#include "pdc/errors.hpp"

namespace pdc {

namespace {

json sellmeier_json(const Sellmeier& s) { return json::array({s.a, s.b, s.c, s.d}); }

Sellmeier sellmeier_from(const json& j, const std::string& key) {
  if (!j.is_array() || j.size() != 4) throw ConfigError(key, "expected [a, b, c, d]");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>(), j[3].get<double>()};
}

// Rejects keys of `obj` outside `allowed`.
void check_keys(const json& obj, const std::string& path, std::set<std::string> allowed) {
  if (!obj.is_object()) throw ConfigError(path, "expected an object");
  for (const auto& [k, v] : obj.items())
    if (!allowed.count(k)) throw ConfigError(path.empty() ? k : path + "." + k, "unknown key");
}

template <class T>
T get(const json& obj, const std::string& path, const char* key) {
  const std::string full = path + "." + key;
  if (!obj.contains(key)) throw ConfigError(full, "missing");
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(full, "wrong type");
  }
}

const char* scheme_name(kernels::NonlinearScheme s) {
  return s == kernels::NonlinearScheme::implicit_midpoint ? "implicit_midpoint"
                                                          : "explicit_midpoint";
}

}  // namespace

std::vector<std::string> experiment_presets() {
  return {"long-pump", "short-pump", "thin-crystal", "plane-wave", "wide-grid"};
}

json preset_json(const std::string& name) {
  ExperimentConfig c;
  c.preset = name;
  c.crystal = bbo_515_type1();
  if (name == "long-pump") {
  } else if (name == "short-pump") {
    c.pump.duration_fs = 160;
    c.gains = {1.0, 3.0};
  } else if (name == "thin-crystal") {
    c.crystal.length_um = 20;
    c.grid = {128, 128, 0.1, 0.128};
    c.region = {-0.06, 0.06, 0.0, 0.08};
    c.pump.waist_um = 300;
    c.pump.duration_fs = 300;
    c.n_steps = 50;
    c.gains = {3.0};
    c.correlations = false;
    c.gaussianity = false;
  } else if (name == "plane-wave") {
    c.pump.plane_wave = true;
    c.gains = {2.0};
    c.correlations = false;
    c.gaussianity = false;
  } else if (name == "wide-grid") {
    c.grid = wide_grid();
  } else {
    throw ConfigError("preset", "unknown preset '" + name + "'");
  }
  return c.to_json();
}

json ExperimentConfig::to_json() const {
  json j;
  j["preset"] = preset;
  j["crystal"] = {{"name", crystal.name},
                  {"length_um", crystal.length_um},
                  {"cut_angle_rad", crystal.cut_angle_rad},
                  {"pump_wavelength_nm", crystal.pump_wavelength_nm},
                  {"sellmeier_o", sellmeier_json(crystal.ordinary)},
                  {"sellmeier_e", sellmeier_json(crystal.extraordinary)},
                  {"axis_orientation", crystal.axis_orientation}};
  j["pump"] = {{"waist_um", pump.waist_um},
               {"duration_fs", pump.duration_fs},
               {"chirp_x_rad_um2", pump.chirp_x},
               {"chirp_t_rad_fs2", pump.chirp_t},
               {"peak_flux_per_um_fs", pump.peak_flux},
               {"plane_wave", pump.plane_wave}};
  j["grid"] = {{"n_x", grid.n_x},
               {"n_t", grid.n_t},
               {"q_max_inv_um", grid.q_max},
               {"omega_max_rad_fs", grid.omega_max}};
  j["analysis"] = {{"region",
                    {{"q_lo_inv_um", region.q_lo},
                     {"q_hi_inv_um", region.q_hi},
                     {"omega_lo_rad_fs", region.omega_lo},
                     {"omega_hi_rad_fs", region.omega_hi}}},
                   {"correlations", correlations},
                   {"gaussianity", gaussianity}};
  j["gains"] = gains;
  j["simulation"] = {{"realizations", realizations}, {"n_steps", n_steps},
                     {"seed", seed},                 {"workers", workers},
                     {"batch_size", batch_size},     {"scheme", scheme_name(scheme)},
                     {"fft_planner", fft_planner},   {"fft_wisdom", fft_wisdom}};
  j["output_dir"] = output_dir;
  return j;
}

void ExperimentConfig::validate() const {
  crystal.validate();
  pump.validate();
  grid.validate();
  if (gains.empty()) throw ConfigError("gains", "must list at least one gain");
  for (double g : gains)
    if (!(g >= 0) || !std::isfinite(g)) throw ConfigError("gains", "gains must be finite and >= 0");
  if (realizations < 1) throw ConfigError("simulation.realizations", "must be >= 1");
  if (n_steps < 1) throw ConfigError("simulation.n_steps", "must be >= 1");
  if (workers < 1) throw ConfigError("simulation.workers", "must be >= 1");
  if (batch_size < 0) throw ConfigError("simulation.batch_size", "must be >= 0");
  if (fft_planner != "estimate" && fft_planner != "measure")
    throw ConfigError("simulation.fft_planner", "must be 'estimate' or 'measure'");
  if (!(region.q_lo <= region.q_hi) || !(region.omega_lo <= region.omega_hi))
    throw ConfigError("analysis.region", "lower bounds must not exceed upper bounds");
  if (std::abs(region.q_lo) > grid.q_max || std::abs(region.q_hi) > grid.q_max ||
      std::abs(region.omega_lo) > grid.omega_max || std::abs(region.omega_hi) > grid.omega_max)
    throw ConfigError("analysis.region", "must lie inside the grid");
  if (output_dir.empty()) throw ConfigError("output_dir", "must not be empty");
}

ExperimentConfig config_from_json(const json& user) {
  check_keys(user, "", {"preset", "crystal", "pump", "grid", "analysis", "gains", "simulation",
                        "output_dir"});
  const std::string preset = user.value("preset", std::string("long-pump"));
  json doc = preset_json(preset);
  doc.merge_patch(user);
  // A crystal preset name resets the crystal block before user fields apply.
  if (user.contains("crystal") && user["crystal"].contains("preset")) {
    const std::string cname = get<std::string>(user["crystal"], "crystal", "preset");
    ExperimentConfig tmp;
    tmp.crystal = crystal_preset(cname);
    doc["crystal"] = tmp.to_json()["crystal"];
    json patch = user["crystal"];
    patch.erase("preset");
    doc["crystal"].merge_patch(patch);
  }

  ExperimentConfig c;
  c.preset = preset;

  const json& cr = doc["crystal"];
  check_keys(cr, "crystal", {"name", "length_um", "cut_angle_rad", "cut_angle_deg",
                             "pump_wavelength_nm", "sellmeier_o", "sellmeier_e",
                             "axis_orientation"});
  c.crystal.name = cr.value("name", std::string("custom"));
  c.crystal.length_um = get<double>(cr, "crystal", "length_um");
  c.crystal.pump_wavelength_nm = get<double>(cr, "crystal", "pump_wavelength_nm");
  c.crystal.ordinary = sellmeier_from(cr.at("sellmeier_o"), "crystal.sellmeier_o");
  c.crystal.extraordinary = sellmeier_from(cr.at("sellmeier_e"), "crystal.sellmeier_e");
  c.crystal.axis_orientation = get<int>(cr, "crystal", "axis_orientation");
  c.crystal.validate_optics();
  const bool user_angle = user.contains("crystal") && (user["crystal"].contains("cut_angle_rad") ||
                                                       user["crystal"].contains("cut_angle_deg"));
  const bool optics_changed =
      user.contains("crystal") &&
      (user["crystal"].contains("pump_wavelength_nm") || user["crystal"].contains("sellmeier_o") ||
       user["crystal"].contains("sellmeier_e"));
  if (cr.contains("cut_angle_deg") && !cr["cut_angle_deg"].is_null()) {
    c.crystal.cut_angle_rad = get<double>(cr, "crystal", "cut_angle_deg") * kPi / 180;
  } else if (cr.contains("cut_angle_rad") && !cr["cut_angle_rad"].is_null() &&
             (user_angle || !optics_changed)) {
    c.crystal.cut_angle_rad = get<double>(cr, "crystal", "cut_angle_rad");
  } else {
    try {
      c.crystal.cut_angle_rad = solve_matching_angle(c.crystal);
    } catch (const DomainError& e) {
      throw ConfigError("crystal.cut_angle_deg", e.what());
    }
  }

  const json& pu = doc["pump"];
  check_keys(pu, "pump", {"waist_um", "duration_fs", "chirp_x_rad_um2", "chirp_t_rad_fs2",
                          "peak_flux_per_um_fs", "plane_wave"});
  c.pump.waist_um = get<double>(pu, "pump", "waist_um");
  c.pump.duration_fs = get<double>(pu, "pump", "duration_fs");
  c.pump.chirp_x = get<double>(pu, "pump", "chirp_x_rad_um2");
  c.pump.chirp_t = get<double>(pu, "pump", "chirp_t_rad_fs2");
  c.pump.peak_flux = get<double>(pu, "pump", "peak_flux_per_um_fs");
  c.pump.plane_wave = get<bool>(pu, "pump", "plane_wave");

  const json& gr = doc["grid"];
  check_keys(gr, "grid", {"n_x", "n_t", "q_max_inv_um", "omega_max_rad_fs"});
  c.grid = {get<int>(gr, "grid", "n_x"), get<int>(gr, "grid", "n_t"),
            get<double>(gr, "grid", "q_max_inv_um"), get<double>(gr, "grid", "omega_max_rad_fs")};

  const json& an = doc["analysis"];
  check_keys(an, "analysis", {"region", "correlations", "gaussianity"});
  const json& rg = an.at("region");
  check_keys(rg, "analysis.region", {"q_lo_inv_um", "q_hi_inv_um", "omega_lo_rad_fs",
                                     "omega_hi_rad_fs"});
  c.region = {get<double>(rg, "analysis.region", "q_lo_inv_um"),
              get<double>(rg, "analysis.region", "q_hi_inv_um"),
              get<double>(rg, "analysis.region", "omega_lo_rad_fs"),
              get<double>(rg, "analysis.region", "omega_hi_rad_fs")};
  c.correlations = get<bool>(an, "analysis", "correlations");
  c.gaussianity = get<bool>(an, "analysis", "gaussianity");

  if (!doc["gains"].is_array()) throw ConfigError("gains", "expected a list of numbers");
  try {
    c.gains = doc["gains"].get<std::vector<double>>();
  } catch (const json::exception&) {
    throw ConfigError("gains", "expected a list of numbers");
  }

  const json& si = doc["simulation"];
  check_keys(si, "simulation", {"realizations", "n_steps", "seed", "workers", "batch_size",
                                "scheme", "fft_planner", "fft_wisdom"});
  c.realizations = get<std::int64_t>(si, "simulation", "realizations");
  c.n_steps = get<int>(si, "simulation", "n_steps");
  c.seed = get<std::uint64_t>(si, "simulation", "seed");
  c.workers = get<int>(si, "simulation", "workers");
  c.batch_size = get<int>(si, "simulation", "batch_size");
  const std::string scheme = get<std::string>(si, "simulation", "scheme");
  if (scheme == "implicit_midpoint")
    c.scheme = kernels::NonlinearScheme::implicit_midpoint;
  else if (scheme == "explicit_midpoint")
    c.scheme = kernels::NonlinearScheme::explicit_midpoint;
  else
    throw ConfigError("simulation.scheme", "must be implicit_midpoint or explicit_midpoint");
  c.fft_planner = get<std::string>(si, "simulation", "fft_planner");
  c.fft_wisdom = get<std::string>(si, "simulation", "fft_wisdom");
  c.output_dir = doc["output_dir"].get<std::string>();
  if (!user.contains("simulation") || !user["simulation"].contains("workers"))
    c.workers = default_workers();
  c.validate();
  return c;
}

void apply_override(json& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0)
    throw ConfigError(assignment, "override must look like key.path=value");
  const std::string key = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  json value;
  try {
    value = json::parse(text);
  } catch (const json::parse_error&) {
    value = text;
  }
  json* node = &doc;
  std::size_t start = 0;
  while (true) {
    const auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot - start);
    if (part.empty()) throw ConfigError(key, "empty key component");
    if (!node->is_object()) *node = json::object();
    if (dot == std::string::npos) {
      (*node)[part] = value;
      break;
    }
    node = &(*node)[part];
    start = dot + 1;
  }
}

ExperimentConfig load_config(const std::string& path, const std::vector<std::string>& overrides) {
  json doc = json::object();
  if (!path.empty()) doc = read_json(path);
  for (const auto& o : overrides) apply_override(doc, o);
  return config_from_json(doc);
}

int default_workers() {
  if (const char* env = std::getenv("PDC_WORKERS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1 && v <= 4096) return static_cast<int>(v);
    throw ConfigError("PDC_WORKERS", "must be a positive integer");
  }
  return 1;
}

}  // namespace pdc
