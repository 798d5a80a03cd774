#ifndef TALBOT_BOHM_HPP
#define TALBOT_BOHM_HPP

// Bohmian trajectories through the grating wavefunction.
//
// The transverse velocity follows the guidance equation
//   v_x = (hbar / m) Im(Psi^{-1} dPsi/dx),
// and since z advances uniformly (z = z0 + v_z t) trajectories are integrated
// in z with dx/dz = v_x / v_z.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include <boost/math/distributions/normal.hpp>

#include "talbot/constants.hpp"
#include "talbot/errors.hpp"
#include "talbot/parallel.hpp"
#include "talbot/qcore.hpp"

namespace talbot {

/// Analytic dPsi/dx of the grating wavefunction.
inline ComplexAmplitude superposed_psi_dx(double x, const ZSlice& s, const GratingConfig& g) {
  const auto& centers = g.slit_centers;
  const ComplexAmplitude sum = detail::symmetric_sum(g.n_slits, [&](std::size_t n) {
    const double dx = x - centers[n];
    const ComplexAmplitude arg = -dx * dx * s.inv_width;
    if (arg.real() < detail::kNegligibleExponent) return ComplexAmplitude{};
    return dx * std::exp(arg);
  });
  // dPsi_n/dx = -(x - x_n) / (2 sigma sigma_t) Psi_n, and 1/(2 sigma sigma_t) = 2 inv_width.
  return -2.0 * s.inv_width * s.prefactor * s.carrier * sum / static_cast<double>(g.n_slits);
}

/// Guidance velocity at (x, slice). Packet sums are rescaled by the largest
/// term so far-from-grating points do not underflow.
inline double guidance_velocity(double x, const ZSlice& s, const GratingConfig& g, double mass) {
  const auto& centers = g.slit_centers;
  const double width_re = s.inv_width.real();
  double min_dx2 = std::numeric_limits<double>::infinity();
  for (double c : centers) min_dx2 = std::min(min_dx2, (x - c) * (x - c));
  const double shift = -min_dx2 * width_re;

  auto scaled = [&](std::size_t n, double& dx) -> ComplexAmplitude {
    dx = x - centers[n];
    const ComplexAmplitude arg = -dx * dx * s.inv_width - shift;
    if (arg.real() < detail::kNegligibleExponent) return {};
    return std::exp(arg);
  };
  const ComplexAmplitude s0 = detail::symmetric_sum(g.n_slits, [&](std::size_t n) {
    double dx;
    return scaled(n, dx);
  });
  const ComplexAmplitude s1 = detail::symmetric_sum(g.n_slits, [&](std::size_t n) {
    double dx;
    const ComplexAmplitude e = scaled(n, dx);
    return dx * e;
  });
  if (std::abs(s0) < 1e-300) {
    throw NodeError("guidance_velocity: wavefunction vanishes at x = " + std::to_string(x));
  }
  const ComplexAmplitude log_derivative = -2.0 * s.inv_width * s1 / s0;
  return constants::hbar / mass * log_derivative.imag();
}

inline double guidance_velocity(double x, double z, const EvalContext& ctx) {
  return guidance_velocity(x, ctx.slice(z), ctx.grating(), ctx.beam().mass);
}

struct IntegratorConfig {
  double dz_initial = 0.0;
  double dz_min = 0.0;
  double dz_max = std::numeric_limits<double>::infinity();
  double rel_tol = 1e-8;
  double v_cap = std::numeric_limits<double>::infinity();  // m/s
  std::size_t max_steps = 1'000'000;

  void validate() const {
    if (!(dz_min > 0.0) || !(dz_initial >= dz_min)) {
      throw DomainError("integrator: need 0 < dz_min <= dz_initial");
    }
    if (!(dz_max >= dz_min)) throw DomainError("integrator: need dz_max >= dz_min");
    if (!(rel_tol > 0.0)) throw DomainError("integrator: rel_tol must be positive");
    if (!(v_cap > 0.0)) throw DomainError("integrator: v_cap must be positive");
    if (max_steps == 0) throw DomainError("integrator: max_steps must be positive");
  }
};

/// Defaults scaled to the Talbot length of the context.
inline IntegratorConfig default_integrator(const EvalContext& ctx) {
  const double zt = ctx.talbot();
  IntegratorConfig cfg;
  cfg.dz_initial = zt / 2000.0;
  cfg.dz_min = zt / 1e7;
  cfg.dz_max = zt / 200.0;
  cfg.rel_tol = 1e-8;
  cfg.v_cap = 100.0 * (ctx.grating().period / zt) * ctx.beam().v_z;
  cfg.max_steps = 1'000'000;
  return cfg;
}

struct TrajectoryPoint {
  double x = 0.0;  // m
  double z = 0.0;  // m
  double t = 0.0;  // s
};

enum class TrajectoryStatus { completed, node_truncated, max_steps_exceeded };

inline const char* to_string(TrajectoryStatus s) {
  switch (s) {
    case TrajectoryStatus::completed: return "completed";
    case TrajectoryStatus::node_truncated: return "node-truncated";
    case TrajectoryStatus::max_steps_exceeded: return "max-steps-exceeded";
  }
  return "unknown";
}

struct Trajectory {
  std::vector<TrajectoryPoint> points;
  std::size_t seed_slit = 0;
  double seed_offset = 0.0;  // m, initial x relative to the seed slit center
  TrajectoryStatus status = TrajectoryStatus::completed;
  std::size_t clamp_events = 0;    // accepted steps that hit v_cap
  std::size_t rejected_steps = 0;

  bool ok() const noexcept { return status == TrajectoryStatus::completed; }
};

namespace detail {

inline std::size_t nearest_slit(const GratingConfig& g, double x) {
  std::size_t best = 0;
  for (std::size_t n = 1; n < g.n_slits; ++n) {
    if (std::abs(x - g.slit_centers[n]) < std::abs(x - g.slit_centers[best])) best = n;
  }
  return best;
}

// Dormand-Prince 5(4) tableau.
struct DormandPrince {
  static constexpr std::array<double, 7> c{0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                          a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                          a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static constexpr std::array<double, 7> b{35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192,
                                           -2187.0 / 6784, 11.0 / 84, 0.0};
  static constexpr std::array<double, 7> b_low{5179.0 / 57600, 0.0, 7571.0 / 16695, 393.0 / 640,
                                               -92097.0 / 339200, 187.0 / 2100, 1.0 / 40};
};

}  // namespace detail

/// Integrates dx/dz = v_x / v_z from (x0, z0) to z_end with an adaptive
/// Dormand-Prince 5(4) pair. The local error is held below
/// rel_tol * max(|x|, 1e-3 sigma). Velocities beyond v_cap are clamped and
/// counted; a step that would have to shrink below dz_min ends the trajectory
/// with status node_truncated.
inline Trajectory integrate_trajectory(double x0, double z0, double z_end, const EvalContext& ctx,
                                       const IntegratorConfig& cfg) {
  if (!(z0 >= 0.0) || !(z_end > z0)) {
    throw DomainError("integrate_trajectory: need 0 <= z0 < z_end");
  }
  cfg.validate();
  using DP = detail::DormandPrince;

  const auto& g = ctx.grating();
  const double v_z = ctx.beam().v_z;
  const double mass = ctx.beam().mass;
  const double abs_floor = 1e-3 * g.sigma;

  Trajectory traj;
  traj.seed_slit = detail::nearest_slit(g, x0);
  traj.seed_offset = x0 - g.slit_centers[traj.seed_slit];
  traj.points.push_back({x0, z0, ctx.time_at(z0)});

  bool clamped = false;
  auto slope = [&](double x, double z) {
    double v = guidance_velocity(x, ctx.slice(z), g, mass);
    if (std::abs(v) > cfg.v_cap) {
      v = std::copysign(cfg.v_cap, v);
      clamped = true;
    }
    return v / v_z;
  };

  double x = x0;
  double z = z0;
  double dz = cfg.dz_initial;
  std::size_t attempts = 0;
  std::array<double, 7> k{};
  double k_first = 0.0;
  bool have_first = false;

  while (z < z_end) {
    if (++attempts > cfg.max_steps) {
      traj.status = TrajectoryStatus::max_steps_exceeded;
      break;
    }
    double h = std::min({dz, cfg.dz_max, z_end - z});
    const bool last = (h == z_end - z);
    clamped = false;
    double x_high = 0.0;
    double err = 0.0;
    bool node = false;
    try {
      k[0] = have_first ? k_first : slope(x, z);
      k[1] = slope(x + h * DP::a21 * k[0], z + DP::c[1] * h);
      k[2] = slope(x + h * (DP::a31 * k[0] + DP::a32 * k[1]), z + DP::c[2] * h);
      k[3] = slope(x + h * (DP::a41 * k[0] + DP::a42 * k[1] + DP::a43 * k[2]), z + DP::c[3] * h);
      k[4] = slope(x + h * (DP::a51 * k[0] + DP::a52 * k[1] + DP::a53 * k[2] + DP::a54 * k[3]),
                   z + DP::c[4] * h);
      k[5] = slope(x + h * (DP::a61 * k[0] + DP::a62 * k[1] + DP::a63 * k[2] + DP::a64 * k[3] +
                            DP::a65 * k[4]),
                   z + DP::c[5] * h);
      x_high = x;
      for (int i = 0; i < 6; ++i) x_high += h * DP::b[static_cast<std::size_t>(i)] * k[static_cast<std::size_t>(i)];
      const double z_next = last ? z_end : z + h;
      k[6] = slope(x_high, z_next);
      double diff = 0.0;
      for (std::size_t i = 0; i < 7; ++i) diff += (DP::b[i] - DP::b_low[i]) * k[i];
      err = std::abs(h * diff);
    } catch (const NodeError&) {
      node = true;
    }

    if (!node) {
      const double scale = cfg.rel_tol * std::max({std::abs(x), std::abs(x_high), abs_floor});
      const double ratio = err / scale;
      if (ratio <= 1.0) {
        x = x_high;
        z = last ? z_end : z + h;
        traj.points.push_back({x, z, ctx.time_at(z)});
        if (clamped) ++traj.clamp_events;
        k_first = k[6];
        have_first = true;
        const double grow = ratio == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(ratio, -0.2), 0.2, 5.0);
        dz = std::max(h * grow, cfg.dz_min);
        continue;
      }
      dz = h * std::clamp(0.9 * std::pow(ratio, -0.2), 0.2, 1.0);
    } else {
      dz = 0.5 * h;
      have_first = false;
    }
    ++traj.rejected_steps;
    if (dz < cfg.dz_min) {
      if (h > cfg.dz_min) {
        dz = cfg.dz_min;
      } else {
        traj.status = TrajectoryStatus::node_truncated;
        break;
      }
    }
  }
  return traj;
}

struct Seed {
  double x = 0.0;
  double z = 0.0;
  std::size_t slit = 0;
  double offset = 0.0;
};

/// per_slit seeds per slit at equally spaced quantiles in [quantile_lo, quantile_hi]
/// of the slit's initial Gaussian |phi_0|^2 (std sigma). A single seed sits at the
/// midpoint quantile.
inline std::vector<Seed> seed_trajectories(const EvalContext& ctx, std::size_t per_slit,
                                           double quantile_lo, double quantile_hi, double z0) {
  if (per_slit < 1) throw DomainError("seed_trajectories: per_slit must be >= 1");
  if (!(quantile_lo > 0.0 && quantile_lo < quantile_hi && quantile_hi < 1.0)) {
    throw DomainError("seed_trajectories: need 0 < quantile_lo < quantile_hi < 1");
  }
  if (!(z0 >= 0.0)) throw DomainError("seed_trajectories: z0 must be non-negative");
  const auto& g = ctx.grating();
  const boost::math::normal_distribution<double> unit;
  std::vector<double> offsets(per_slit);
  for (std::size_t i = 0; i < per_slit; ++i) {
    const double q = per_slit == 1
                         ? 0.5 * (quantile_lo + quantile_hi)
                         : quantile_lo + (quantile_hi - quantile_lo) * static_cast<double>(i) /
                                             static_cast<double>(per_slit - 1);
    offsets[i] = q == 0.5 ? 0.0 : boost::math::quantile(unit, q) * g.sigma;
  }
  std::vector<Seed> seeds;
  seeds.reserve(g.n_slits * per_slit);
  for (std::size_t n = 0; n < g.n_slits; ++n) {
    for (double off : offsets) seeds.push_back({g.slit_centers[n] + off, z0, n, off});
  }
  return seeds;
}

inline Trajectory integrate_trajectory(const Seed& seed, double z_end, const EvalContext& ctx,
                                       const IntegratorConfig& cfg) {
  Trajectory t = integrate_trajectory(seed.x, seed.z, z_end, ctx, cfg);
  t.seed_slit = seed.slit;
  t.seed_offset = seed.offset;
  return t;
}

/// Integrates every seed independently; output order follows the seeds.
inline std::vector<Trajectory> integrate_batch(std::span<const Seed> seeds, double z_end,
                                               const EvalContext& ctx, const IntegratorConfig& cfg,
                                               unsigned threads = 1) {
  std::vector<Trajectory> out(seeds.size());
  parallel_for(seeds.size(), threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) out[i] = integrate_trajectory(seeds[i], z_end, ctx, cfg);
  });
  return out;
}

}  // namespace talbot

#endif  // TALBOT_BOHM_HPP
