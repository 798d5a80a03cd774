#ifndef TALBOT_CONFIG_HPP
#define TALBOT_CONFIG_HPP

// Run configuration (JSON, comments allowed, SI units, strict keys).
//
// {
//   "beam":    { "mass": "neutron" | <kg>, "wavelength": <m> },           required
//   "grating": { "n_slits": <int>, "period": <m>, "sigma": <m> },          required
//   "grid":    { "x_min", "x_max", "nx", "z_min", "z_max", "nz" },         optional
//   "integrator": { "dz_initial", "dz_min", "dz_max", "rel_tol",
//                   "v_cap", "max_steps" },                                  optional
//   "render":  { "palette": "black-max" | "white-max",
//                "normalization": "global" | "per-column",
//                "gamma", "width", "height", "trajectory_overlay" },        optional
//   "farfield": { "form": "consistent" | "verbatim", "n_for_formula",
//                 "z", "x_min", "x_max", "samples" }                        optional
// }

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "talbot/bohm.hpp"
#include "talbot/constants.hpp"
#include "talbot/errors.hpp"
#include "talbot/farfield.hpp"
#include "talbot/fieldgrid.hpp"
#include "talbot/io.hpp"
#include "talbot/qcore.hpp"

namespace talbot {

struct FarFieldSettings {
  FarFieldForm form = FarFieldForm::consistent;
  std::size_t n_for_formula = 0;  // 0: number of slits
  double z = 0.004;               // m
  double x_min = 0.0, x_max = 0.0;  // both 0: +-3 principal-maximum spacings
  std::size_t samples = 4096;
};

struct RunConfig {
  BeamParams beam;
  GratingConfig grating;
  GridSpec grid;
  IntegratorConfig integrator;
  RenderOptions render;
  FarFieldSettings farfield;

  EvalContext context() const { return EvalContext(beam, grating); }

  FarFieldParams farfield_params() const {
    FarFieldParams p{beam, grating, farfield.n_for_formula == 0 ? grating.n_slits : farfield.n_for_formula,
                     farfield.form};
    return p;
  }

  /// Far-field x range, defaulting to three principal-maximum spacings (lambda z / d) each side.
  std::pair<double, double> farfield_range() const {
    if (farfield.x_min < farfield.x_max) return {farfield.x_min, farfield.x_max};
    const double spacing = beam.wavelength * farfield.z / grating.period;
    return {-3.0 * spacing, 3.0 * spacing};
  }
};

namespace detail {

class ConfigReader {
 public:
  std::vector<std::string> problems;

  void check_keys(const nlohmann::json& obj, std::string_view where,
                  std::initializer_list<std::string_view> allowed) {
    if (!obj.is_object()) {
      problems.push_back(std::string(where) + ": expected an object");
      return;
    }
    for (const auto& [key, _] : obj.items()) {
      bool known = false;
      for (auto a : allowed) known = known || key == a;
      if (!known) problems.push_back(std::string(where) + ": unknown key '" + key + "'");
    }
  }

  std::optional<double> number(const nlohmann::json& obj, std::string_view where, const char* key,
                               bool required) {
    if (!obj.is_object() || !obj.contains(key)) {
      if (required) problems.push_back(std::string(where) + "." + key + ": missing required key");
      return std::nullopt;
    }
    const auto& v = obj.at(key);
    if (!v.is_number()) {
      problems.push_back(std::string(where) + "." + key + ": expected a number");
      return std::nullopt;
    }
    return v.get<double>();
  }

  std::optional<double> positive(const nlohmann::json& obj, std::string_view where, const char* key,
                                 bool required) {
    auto v = number(obj, where, key, required);
    if (v && !(*v > 0.0)) {
      problems.push_back(std::string(where) + "." + key + ": must be > 0");
      return std::nullopt;
    }
    return v;
  }

  std::optional<std::size_t> count(const nlohmann::json& obj, std::string_view where, const char* key,
                                   bool required, std::size_t minimum) {
    if (!obj.is_object() || !obj.contains(key)) {
      if (required) problems.push_back(std::string(where) + "." + key + ": missing required key");
      return std::nullopt;
    }
    const auto& v = obj.at(key);
    if (!v.is_number_integer() || v.get<long long>() < static_cast<long long>(minimum)) {
      problems.push_back(std::string(where) + "." + key + ": expected an integer >= " +
                         std::to_string(minimum));
      return std::nullopt;
    }
    return static_cast<std::size_t>(v.get<long long>());
  }

  std::optional<std::string> choice(const nlohmann::json& obj, std::string_view where, const char* key,
                                    std::initializer_list<std::string_view> options) {
    if (!obj.is_object() || !obj.contains(key)) return std::nullopt;
    const auto& v = obj.at(key);
    if (v.is_string()) {
      const auto s = v.get<std::string>();
      for (auto o : options) {
        if (s == o) return s;
      }
    }
    std::string msg = std::string(where) + "." + key + ": expected one of";
    for (auto o : options) msg += " '" + std::string(o) + "'";
    problems.push_back(msg);
    return std::nullopt;
  }
};

}  // namespace detail

inline RunConfig config_from_json(const nlohmann::json& doc) {
  detail::ConfigReader rd;
  const nlohmann::json empty = nlohmann::json::object();
  auto section = [&](const char* name) -> const nlohmann::json& {
    return doc.is_object() && doc.contains(name) ? doc.at(name) : empty;
  };

  rd.check_keys(doc, "config", {"beam", "grating", "grid", "integrator", "render", "farfield"});
  const auto& beam = section("beam");
  const auto& grating = section("grating");
  const auto& grid = section("grid");
  const auto& integ = section("integrator");
  const auto& render = section("render");
  const auto& far = section("farfield");
  rd.check_keys(beam, "beam", {"mass", "wavelength"});
  rd.check_keys(grating, "grating", {"n_slits", "period", "sigma"});
  rd.check_keys(grid, "grid", {"x_min", "x_max", "nx", "z_min", "z_max", "nz"});
  rd.check_keys(integ, "integrator", {"dz_initial", "dz_min", "dz_max", "rel_tol", "v_cap", "max_steps"});
  rd.check_keys(render, "render",
                {"palette", "normalization", "gamma", "width", "height", "trajectory_overlay"});
  rd.check_keys(far, "farfield", {"form", "n_for_formula", "z", "x_min", "x_max", "samples"});

  std::optional<double> mass;
  if (!beam.is_object() || !beam.contains("mass")) {
    rd.problems.push_back("beam.mass: missing required key");
  } else if (beam.at("mass").is_string()) {
    if (beam.at("mass").get<std::string>() == "neutron") {
      mass = constants::neutron_mass;
    } else {
      rd.problems.push_back("beam.mass: the only named particle is 'neutron'");
    }
  } else {
    mass = rd.positive(beam, "beam", "mass", true);
  }
  const auto wavelength = rd.positive(beam, "beam", "wavelength", true);
  const auto n_slits = rd.count(grating, "grating", "n_slits", true, 1);
  const auto period = rd.positive(grating, "grating", "period", true);
  const auto sigma = rd.positive(grating, "grating", "sigma", true);

  // Optional sections are read even when the required ones failed so that
  // every problem is reported in one pass.
  const auto gx_min = rd.number(grid, "grid", "x_min", false);
  const auto gx_max = rd.number(grid, "grid", "x_max", false);
  const auto gnx = rd.count(grid, "grid", "nx", false, 2);
  const auto gz_min = rd.positive(grid, "grid", "z_min", false);
  const auto gz_max = rd.positive(grid, "grid", "z_max", false);
  const auto gnz = rd.count(grid, "grid", "nz", false, 2);

  const auto dz_initial = rd.positive(integ, "integrator", "dz_initial", false);
  const auto dz_min = rd.positive(integ, "integrator", "dz_min", false);
  const auto dz_max = rd.positive(integ, "integrator", "dz_max", false);
  const auto rel_tol = rd.positive(integ, "integrator", "rel_tol", false);
  const auto v_cap = rd.positive(integ, "integrator", "v_cap", false);
  const auto max_steps = rd.count(integ, "integrator", "max_steps", false, 1);

  const auto palette = rd.choice(render, "render", "palette", {"black-max", "white-max"});
  const auto normalization = rd.choice(render, "render", "normalization", {"global", "per-column"});
  const auto gamma = rd.positive(render, "render", "gamma", false);
  const auto width = rd.count(render, "render", "width", false, 1);
  const auto height = rd.count(render, "render", "height", false, 1);
  std::optional<bool> overlay;
  if (render.is_object() && render.contains("trajectory_overlay")) {
    if (render.at("trajectory_overlay").is_boolean()) {
      overlay = render.at("trajectory_overlay").get<bool>();
    } else {
      rd.problems.push_back("render.trajectory_overlay: expected a boolean");
    }
  }

  const auto form = rd.choice(far, "farfield", "form", {"consistent", "verbatim"});
  const auto n_formula = rd.count(far, "farfield", "n_for_formula", false, 1);
  const auto fz = rd.positive(far, "farfield", "z", false);
  const auto fx_min = rd.number(far, "farfield", "x_min", false);
  const auto fx_max = rd.number(far, "farfield", "x_max", false);
  const auto fsamples = rd.count(far, "farfield", "samples", false, 2);

  if (!rd.problems.empty()) throw ConfigError(std::move(rd.problems));

  RunConfig cfg;
  cfg.beam = beam_from_wavelength(*mass, *wavelength);
  cfg.grating = make_grating(*n_slits, *period, *sigma);
  const EvalContext ctx = cfg.context();

  cfg.grid = default_grid(ctx);
  if (gx_min) cfg.grid.x_min = *gx_min;
  if (gx_max) cfg.grid.x_max = *gx_max;
  if (gnx) cfg.grid.nx = *gnx;
  if (gz_min) cfg.grid.z_min = *gz_min;
  if (gz_max) cfg.grid.z_max = *gz_max;
  if (gnz) cfg.grid.nz = *gnz;

  cfg.integrator = default_integrator(ctx);
  if (dz_initial) cfg.integrator.dz_initial = *dz_initial;
  if (dz_min) cfg.integrator.dz_min = *dz_min;
  if (dz_max) cfg.integrator.dz_max = *dz_max;
  if (rel_tol) cfg.integrator.rel_tol = *rel_tol;
  if (v_cap) cfg.integrator.v_cap = *v_cap;
  if (max_steps) cfg.integrator.max_steps = *max_steps;

  if (palette) cfg.render.palette = *palette == "white-max" ? Palette::white_max : Palette::black_max;
  if (normalization) {
    cfg.render.normalization =
        *normalization == "per-column" ? Normalization::per_column : Normalization::global;
  }
  if (gamma) cfg.render.gamma = *gamma;
  if (width) cfg.render.width = *width;
  if (height) cfg.render.height = *height;
  if (overlay) cfg.render.trajectory_overlay = *overlay;

  if (form) cfg.farfield.form = *form == "verbatim" ? FarFieldForm::verbatim : FarFieldForm::consistent;
  if (n_formula) cfg.farfield.n_for_formula = *n_formula;
  if (fz) cfg.farfield.z = *fz;
  if (fx_min) cfg.farfield.x_min = *fx_min;
  if (fx_max) cfg.farfield.x_max = *fx_max;
  if (fsamples) cfg.farfield.samples = *fsamples;

  // Cross-field invariants once defaults are merged.
  std::vector<std::string> late;
  if (!(cfg.grid.x_min < cfg.grid.x_max)) late.push_back("grid: x_min must be < x_max");
  if (!(cfg.grid.z_min < cfg.grid.z_max)) late.push_back("grid: z_min must be < z_max");
  if (!(cfg.integrator.dz_min <= cfg.integrator.dz_initial)) {
    late.push_back("integrator: dz_min must be <= dz_initial");
  }
  if (!(cfg.integrator.dz_min <= cfg.integrator.dz_max)) {
    late.push_back("integrator: dz_min must be <= dz_max");
  }
  if ((fx_min.has_value() != fx_max.has_value()) ||
      (fx_min && fx_max && !(*fx_min < *fx_max))) {
    late.push_back("farfield: x_min and x_max must be given together with x_min < x_max");
  }
  if (!late.empty()) throw ConfigError(std::move(late));
  return cfg;
}

inline RunConfig parse_config(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text, nullptr, true, true);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError({std::string("syntax error: ") + e.what()});
  }
  return config_from_json(doc);
}

inline RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(std::string_view(ss.str()));
}

}  // namespace talbot

#endif  // TALBOT_CONFIG_HPP
