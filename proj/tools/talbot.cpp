// talbot: command-line driver for the N-slit interference simulator.
//
// Exit codes: 0 ok, 1 usage, 2 configuration / invalid input, 3 numeric
// failure (a trajectory hit a node or its step budget), 4 I/O.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "talbot/talbot.hpp"

namespace fs = std::filesystem;
using namespace talbot;

namespace {

enum Exit : int { kOk = 0, kUsage = 1, kConfig = 2, kNumeric = 3, kIo = 4 };

struct Common {
  std::string config_path;
  std::string recipe;
  std::string out;
  unsigned threads = 0;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config_path, "Run configuration (JSON)");
  cmd->add_option("--recipe", c.recipe, "Built-in configuration, e.g. fig10 (see 'talbot recipes')");
  cmd->add_option("--threads", c.threads, "Worker threads (0: all cores); output does not depend on it");
}

RunConfig load(const Common& c) {
  if (c.config_path.empty() == c.recipe.empty()) {
    throw ConfigError({"give exactly one of --config PATH or --recipe NAME"});
  }
  return c.recipe.empty() ? load_config(c.config_path) : recipe_config(c.recipe);
}

void apply_grid(const std::string& text, RunConfig& cfg) {
  if (text.empty()) return;
  static const std::regex pattern(R"((\d+)[xX](\d+))");
  std::smatch m;
  if (!std::regex_match(text, m, pattern)) throw ConfigError({"--grid: expected NXxNZ, got '" + text + "'"});
  cfg.grid.nx = std::stoul(m[1]);
  cfg.grid.nz = std::stoul(m[2]);
  cfg.grid.validate();
}

// "out.csv" -> "out.<k>.csv"
fs::path numbered(const fs::path& base, std::size_t k) {
  fs::path p = base;
  p.replace_filename(base.stem().string() + "." + std::to_string(k) + base.extension().string());
  return p;
}

void emit(const std::string& text, const std::string& out) {
  std::cout << text;
  if (!out.empty()) write_bytes(out, text);
}

std::string number(double v) { return format_number(v); }

// Warns about trajectories that did not reach z_end; returns true if any.
bool report_status(std::span<const Trajectory> trajs) {
  std::size_t bad = 0, clamps = 0;
  for (std::size_t k = 0; k < trajs.size(); ++k) {
    clamps += trajs[k].clamp_events;
    if (!trajs[k].ok()) {
      ++bad;
      std::cerr << "trajectory " << k << " (slit " << trajs[k].seed_slit << ", offset "
                << number(trajs[k].seed_offset) << "): " << to_string(trajs[k].status) << " at z = "
                << number(trajs[k].points.back().z) << "\n";
    }
  }
  if (clamps > 0) std::cerr << "note: " << clamps << " velocity clamp events\n";
  return bad > 0;
}

int cmd_params(const Common& c) {
  const RunConfig cfg = load(c);
  const EvalContext ctx = cfg.context();
  const BeamParams& b = cfg.beam;
  std::ostringstream os;
  os << "mass_kg " << number(b.mass) << "\n"
     << "wavelength_m " << number(b.wavelength) << "\n"
     << "k_z_rad_per_m " << number(b.k_z) << "\n"
     << "v_z_m_per_s " << number(b.v_z) << "\n"
     << "omega_rad_per_s " << number(b.omega) << "\n"
     << "energy_J " << number(b.energy) << "\n"
     << "temperature_K " << number(b.temperature) << "\n"
     << "talbot_length_m " << number(ctx.talbot()) << "\n"
     << "n_slits " << cfg.grating.n_slits << "\n"
     << "period_m " << number(cfg.grating.period) << "\n"
     << "sigma_m " << number(cfg.grating.sigma) << "\n"
     << "slit center_m\n";
  for (std::size_t n = 0; n < cfg.grating.n_slits; ++n) {
    os << n << " " << number(cfg.grating.slit_centers[n]) << "\n";
  }
  emit(os.str(), c.out);
  return kOk;
}

struct CarpetFlags {
  std::string grid;
  std::size_t trajectories = 0;
  std::string normalization;
  std::optional<double> gamma;
  std::string palette;
  std::string csv;
};

int cmd_carpet(const Common& c, const CarpetFlags& f) {
  RunConfig cfg = load(c);
  apply_grid(f.grid, cfg);
  if (!f.normalization.empty()) {
    cfg.render.normalization = f.normalization == "per-column" ? Normalization::per_column : Normalization::global;
  }
  if (!f.palette.empty()) cfg.render.palette = f.palette == "white-max" ? Palette::white_max : Palette::black_max;
  if (f.gamma) cfg.render.gamma = *f.gamma;
  const EvalContext ctx = cfg.context();
  const DensityField field = sample_density(ctx, cfg.grid, c.threads);

  std::vector<Trajectory> trajs;
  bool failed = false;
  if (f.trajectories > 0) {
    const auto seeds = seed_trajectories(ctx, f.trajectories, 0.05, 0.95, cfg.grid.z_min);
    trajs = integrate_batch(seeds, cfg.grid.z_max, ctx, cfg.integrator, c.threads);
    failed = report_status(trajs);
  }
  write_pgm(render_carpet(field, trajs, cfg.render), c.out.empty() ? "carpet.pgm" : c.out);
  if (!f.csv.empty()) export_csv(field, f.csv);
  return failed ? kNumeric : kOk;
}

struct FarFieldFlags {
  std::optional<double> z, x_min, x_max;
  std::optional<std::size_t> samples;
  std::string form;
};

int cmd_farfield(const Common& c, const FarFieldFlags& f) {
  RunConfig cfg = load(c);
  if (f.z) cfg.farfield.z = *f.z;
  if (f.samples) cfg.farfield.samples = *f.samples;
  if (!f.form.empty()) cfg.farfield.form = f.form == "verbatim" ? FarFieldForm::verbatim : FarFieldForm::consistent;
  if (f.x_min.has_value() != f.x_max.has_value()) throw ConfigError({"give --x-min and --x-max together"});
  if (f.x_min) {
    cfg.farfield.x_min = *f.x_min;
    cfg.farfield.x_max = *f.x_max;
  }
  if (cfg.farfield.samples < 2) throw ConfigError({"--samples must be >= 2"});
  const auto [lo, hi] = cfg.farfield_range();
  if (!(lo < hi)) throw ConfigError({"far-field range needs x_min < x_max"});
  const EvalContext ctx = cfg.context();
  const double z = cfg.farfield.z;
  if (z < 10.0 * ctx.talbot()) {
    std::cerr << "warning: z = " << number(z) << " m is not far beyond z_T = " << number(ctx.talbot())
              << " m; the analytic curve is a far-field limit\n";
  }
  const FarFieldParams p = cfg.farfield_params();
  const ZSlice s = ctx.slice(z);
  const std::size_t n = cfg.farfield.samples;
  std::vector<double> xs(n), sim(n), ana(n);
  parallel_for(n, c.threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) {
      xs[k] = grid_point(lo, hi, k, n);
      sim[k] = density(xs[k], s, ctx.grating());
      ana[k] = farfield_intensity(xs[k], z, p);
    }
  });
  const double sm = *std::max_element(sim.begin(), sim.end());
  const double am = *std::max_element(ana.begin(), ana.end());
  std::ostringstream os;
  os << "x,simulated,analytic\n";
  double worst = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double a = sm > 0.0 ? sim[k] / sm : 0.0;
    const double b = am > 0.0 ? ana[k] / am : 0.0;
    worst = std::max(worst, std::abs(a - b));
    os << number(xs[k]) << ',' << number(a) << ',' << number(b) << '\n';
  }
  write_bytes(c.out.empty() ? "farfield.csv" : c.out, os.str());
  std::cout << "max_abs_deviation " << number(worst) << "\n";
  return kOk;
}

struct SectionFlags {
  std::string grid;
  std::string axis = "x";
  std::optional<double> at;
  std::optional<std::size_t> samples;
};

int cmd_crosssection(const Common& c, const SectionFlags& f) {
  RunConfig cfg = load(c);
  apply_grid(f.grid, cfg);
  const EvalContext ctx = cfg.context();
  const auto& g = cfg.grating;
  const SectionAxis axis = f.axis == "z" ? SectionAxis::fixed_z : SectionAxis::fixed_x;
  double coordinate = 0.0;
  if (f.at) {
    coordinate = *f.at;
  } else if (axis == SectionAxis::fixed_x) {
    // Midpoint between the two central slits.
    const std::size_t right = g.n_slits / 2;
    coordinate = g.n_slits == 1 ? g.slit_centers[0] : 0.5 * (g.slit_centers[right - 1] + g.slit_centers[right]);
  } else {
    coordinate = 0.5 * (cfg.grid.z_min + cfg.grid.z_max);
  }
  const std::size_t n = f.samples.value_or(axis == SectionAxis::fixed_x ? cfg.grid.nz : cfg.grid.nx);
  const CrossSection cs = cross_section(ctx, cfg.grid, axis, coordinate, n);
  export_csv(cs, c.out.empty() ? "crosssection.csv" : c.out);
  std::cout << (axis == SectionAxis::fixed_x ? "fixed_x_m " : "fixed_z_m ") << number(coordinate) << "\n"
            << "samples " << n << "\n";
  return kOk;
}

struct TrajectoryFlags {
  std::size_t per_slit = 1;
  std::optional<double> seed_x;
  std::optional<double> z_end;
  double q_lo = 0.05, q_hi = 0.95;
};

int cmd_trajectories(const Common& c, const TrajectoryFlags& f) {
  const RunConfig cfg = load(c);
  const EvalContext ctx = cfg.context();
  const double z0 = cfg.grid.z_min;
  const double z_end = f.z_end.value_or(cfg.grid.z_max);
  std::vector<Seed> seeds;
  if (f.seed_x) {
    const std::size_t slit = detail::nearest_slit(cfg.grating, *f.seed_x);
    seeds.push_back({*f.seed_x, z0, slit, *f.seed_x - cfg.grating.slit_centers[slit]});
  } else {
    seeds = seed_trajectories(ctx, f.per_slit, f.q_lo, f.q_hi, z0);
  }
  const auto trajs = integrate_batch(seeds, z_end, ctx, cfg.integrator, c.threads);
  const fs::path base = c.out.empty() ? fs::path("trajectory.csv") : fs::path(c.out);
  for (std::size_t k = 0; k < trajs.size(); ++k) {
    export_csv(trajs[k], trajs.size() == 1 ? base : numbered(base, k));
  }
  std::cout << "index,slit,offset_m,status,points,clamp_events,x_end_m\n";
  for (std::size_t k = 0; k < trajs.size(); ++k) {
    const auto& t = trajs[k];
    std::cout << k << ',' << t.seed_slit << ',' << number(t.seed_offset) << ',' << to_string(t.status) << ','
              << t.points.size() << ',' << t.clamp_events << ',' << number(t.points.back().x) << '\n';
  }
  return report_status(trajs) ? kNumeric : kOk;
}

int cmd_revival(const Common& c, std::optional<double> window) {
  const RunConfig cfg = load(c);
  const EvalContext ctx = cfg.context();
  const double half = window.value_or(2.0 * cfg.grating.period);
  const RevivalMetrics m = revival_metrics(ctx, half);
  std::ostringstream os;
  os << "window_half_width_m " << number(half) << "\n"
     << "full_revival_corr " << number(m.full_revival_corr) << "\n"
     << "half_revival_shift_corr " << number(m.half_revival_shift_corr) << "\n";
  emit(os.str(), c.out);
  return kOk;
}

int cmd_recipes() {
  for (const auto& r : kRecipes) std::cout << r.name << "  " << r.summary << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Matter-wave N-slit interference: Talbot carpets, far field and Bohmian trajectories"};
  app.require_subcommand(1);

  Common common;
  const std::vector<std::string> norms{"global", "per-column"};
  const std::vector<std::string> palettes{"black-max", "white-max"};

  auto* params = app.add_subcommand("params", "Print beam kinematics, Talbot length and slit positions");
  add_common(params, common);
  params->add_option("--out", common.out, "Also write the report to this file");

  CarpetFlags carpet_flags;
  auto* carpet = app.add_subcommand("carpet", "Render the density carpet as a PGM image");
  add_common(carpet, common);
  carpet->add_option("--out", common.out, "Image path (default carpet.pgm)");
  carpet->add_option("--grid", carpet_flags.grid, "Grid size NXxNZ");
  carpet->add_option("--trajectories", carpet_flags.trajectories, "Overlay N Bohmian trajectories per slit");
  carpet->add_option("--normalization", carpet_flags.normalization)->check(CLI::IsMember(norms));
  carpet->add_option("--gamma", carpet_flags.gamma)->check(CLI::PositiveNumber);
  carpet->add_option("--palette", carpet_flags.palette)->check(CLI::IsMember(palettes));
  carpet->add_option("--csv", carpet_flags.csv, "Also write the sampled field as CSV");

  FarFieldFlags far_flags;
  auto* farfield = app.add_subcommand("farfield", "Simulated vs analytic far-field cross-section (CSV)");
  add_common(farfield, common);
  farfield->add_option("--out", common.out, "CSV path (default farfield.csv)");
  farfield->add_option("--z", far_flags.z, "Distance from the grating in m");
  farfield->add_option("--x-min", far_flags.x_min);
  farfield->add_option("--x-max", far_flags.x_max);
  farfield->add_option("--samples", far_flags.samples);
  farfield->add_option("--form", far_flags.form)->check(CLI::IsMember({"consistent", "verbatim"}));

  SectionFlags section_flags;
  auto* section = app.add_subcommand("crosssection", "Density along a line of constant x or z (CSV)");
  add_common(section, common);
  section->add_option("--out", common.out, "CSV path (default crosssection.csv)");
  section->add_option("--grid", section_flags.grid, "Grid size NXxNZ (sets the default sample count)");
  section->add_option("--axis", section_flags.axis, "x: fixed x, varying z; z: fixed z, varying x")
      ->check(CLI::IsMember({"x", "z"}));
  section->add_option("--at", section_flags.at,
                      "Fixed coordinate in m (default: midpoint of the central slits, or mid-z)");
  section->add_option("--samples", section_flags.samples);

  TrajectoryFlags traj_flags;
  auto* trajectories = app.add_subcommand("trajectories", "Integrate Bohmian trajectories (CSV per path)");
  add_common(trajectories, common);
  trajectories->add_option("--out", common.out, "CSV path; several paths go to <stem>.<k>.<ext>");
  trajectories->add_option("--trajectories,--per-slit", traj_flags.per_slit, "Seeds per slit")
      ->check(CLI::PositiveNumber);
  trajectories->add_option("--seed-x", traj_flags.seed_x, "Single seed at this x (m) instead");
  trajectories->add_option("--z-end", traj_flags.z_end, "End of integration in m (default grid z_max)");
  trajectories->add_option("--quantile-lo", traj_flags.q_lo);
  trajectories->add_option("--quantile-hi", traj_flags.q_hi);

  std::optional<double> window;
  auto* revival = app.add_subcommand("revival", "Talbot revival correlations on the central window");
  add_common(revival, common);
  revival->add_option("--out", common.out, "Also write the report to this file");
  revival->add_option("--window", window, "Window half-width in m (default 2 periods)");

  auto* recipes = app.add_subcommand("recipes", "List built-in configurations");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*params) return cmd_params(common);
    if (*carpet) return cmd_carpet(common, carpet_flags);
    if (*farfield) return cmd_farfield(common, far_flags);
    if (*section) return cmd_crosssection(common, section_flags);
    if (*trajectories) return cmd_trajectories(common, traj_flags);
    if (*revival) return cmd_revival(common, window);
    if (*recipes) return cmd_recipes();
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfig;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfig;
  } catch (const NodeError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return kNumeric;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
