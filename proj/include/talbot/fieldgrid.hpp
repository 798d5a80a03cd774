#ifndef TALBOT_FIELDGRID_HPP
#define TALBOT_FIELDGRID_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <vector>

#include "talbot/errors.hpp"
#include "talbot/parallel.hpp"
#include "talbot/qcore.hpp"

namespace talbot {

/// Point i of n evenly spaced points on [lo, hi]. The upper half is measured
/// back from hi, so a grid with lo = -hi is exactly mirror-symmetric, and
/// refining to 2n - 1 points reproduces the old points bit-exactly.
inline double grid_point(double lo, double hi, std::size_t i, std::size_t n) {
  const double den = static_cast<double>(n - 1);
  if (2 * i <= n - 1) return lo + (hi - lo) * (static_cast<double>(i) / den);
  return hi - (hi - lo) * (static_cast<double>(n - 1 - i) / den);
}

struct GridSpec {
  double x_min = 0.0, x_max = 0.0;
  std::size_t nx = 0;
  double z_min = 0.0, z_max = 0.0;
  std::size_t nz = 0;

  void validate() const {
    if (!(x_min < x_max)) throw DomainError("grid: need x_min < x_max");
    if (!(z_min > 0.0 && z_min < z_max)) throw DomainError("grid: need 0 < z_min < z_max");
    if (nx < 2 || nz < 2) throw DomainError("grid: need nx >= 2 and nz >= 2");
  }

  double x_at(std::size_t i) const { return grid_point(x_min, x_max, i, nx); }
  double z_at(std::size_t j) const { return grid_point(z_min, z_max, j, nz); }
};

/// Grid defaults: x over +-(n_slits/2 + 2) d, z from z_T/1000 to z_T, 1024 x 1024.
inline GridSpec default_grid(const EvalContext& ctx) {
  const auto& g = ctx.grating();
  const double half = (static_cast<double>(g.n_slits) / 2.0 + 2.0) * g.period;
  const double zt = ctx.talbot();
  return GridSpec{-half, half, 1024, zt / 1000.0, zt, 1024};
}

struct DensityField {
  GridSpec spec;
  std::vector<double> values;  // column-major: values[j * nx + i] = density(x_i, z_j)
  double global_max = 0.0;
  std::vector<double> column_max;  // per z_j

  double at(std::size_t i, std::size_t j) const { return values[j * spec.nx + i]; }
  std::span<const double> column(std::size_t j) const {
    return std::span<const double>(values).subspan(j * spec.nx, spec.nx);
  }
};

/// Point-samples the density on the grid. Columns are distributed over
/// threads; the result does not depend on the thread count.
inline DensityField sample_density(const EvalContext& ctx, const GridSpec& spec, unsigned threads = 1) {
  spec.validate();
  DensityField f;
  f.spec = spec;
  f.values.assign(spec.nx * spec.nz, 0.0);
  f.column_max.assign(spec.nz, 0.0);
  std::vector<double> xs(spec.nx);
  for (std::size_t i = 0; i < spec.nx; ++i) xs[i] = spec.x_at(i);

  parallel_for(spec.nz, threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t j = begin; j < end; ++j) {
      const ZSlice s = ctx.slice(spec.z_at(j));
      double* col = f.values.data() + j * spec.nx;
      double cmax = 0.0;
      for (std::size_t i = 0; i < spec.nx; ++i) {
        col[i] = density(xs[i], s, ctx.grating());
        cmax = std::max(cmax, col[i]);
      }
      f.column_max[j] = cmax;
    }
  });
  f.global_max = *std::max_element(f.column_max.begin(), f.column_max.end());
  return f;
}

enum class SectionAxis { fixed_x, fixed_z };

struct CrossSection {
  SectionAxis axis = SectionAxis::fixed_z;
  double coordinate = 0.0;  // the fixed x or z
  std::vector<double> positions;  // strictly increasing z (fixed_x) or x (fixed_z)
  std::vector<double> values;
};

/// Re-evaluates the density along a line of the domain (no interpolation).
inline CrossSection cross_section(const EvalContext& ctx, const GridSpec& domain, SectionAxis axis,
                                  double coordinate, std::size_t n_samples) {
  if (n_samples < 2) throw DomainError("cross_section: need at least two samples");
  if (!(domain.x_min < domain.x_max) || !(domain.z_min >= 0.0 && domain.z_min < domain.z_max)) {
    throw DomainError("cross_section: invalid domain");
  }
  CrossSection cs;
  cs.axis = axis;
  cs.coordinate = coordinate;
  cs.positions.resize(n_samples);
  cs.values.resize(n_samples);
  if (axis == SectionAxis::fixed_x) {
    if (coordinate < domain.x_min || coordinate > domain.x_max) {
      throw DomainError("cross_section: x outside the domain");
    }
    for (std::size_t k = 0; k < n_samples; ++k) {
      const double z = grid_point(domain.z_min, domain.z_max, k, n_samples);
      cs.positions[k] = z;
      cs.values[k] = density(coordinate, z, ctx);
    }
  } else {
    if (coordinate < domain.z_min || coordinate > domain.z_max) {
      throw DomainError("cross_section: z outside the domain");
    }
    const ZSlice s = ctx.slice(coordinate);
    for (std::size_t k = 0; k < n_samples; ++k) {
      const double x = grid_point(domain.x_min, domain.x_max, k, n_samples);
      cs.positions[k] = x;
      cs.values[k] = density(x, s, ctx.grating());
    }
  }
  return cs;
}

inline double pearson(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.size() < 2) throw DomainError("pearson: need equal sizes >= 2");
  const double n = static_cast<double>(a.size());
  const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
  const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = a[i] - ma;
    const double db = b[i] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (saa == 0.0 || sbb == 0.0) return 0.0;
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

/// Indices of strict interior local maxima.
inline std::vector<std::size_t> local_maxima(std::span<const double> v) {
  std::vector<std::size_t> out;
  for (std::size_t k = 1; k + 1 < v.size(); ++k) {
    if (v[k] > v[k - 1] && v[k] >= v[k + 1]) out.push_back(k);
  }
  return out;
}

struct RevivalMetrics {
  double full_revival_corr = 0.0;
  double half_revival_shift_corr = 0.0;
};

/// Talbot self-imaging check on a central window |x| <= window_half_width:
/// correlates density(x, z_ref) with density(x, z_ref + z_T), and with
/// density(x + d/2, z_ref + z_T/2), where z_ref = z_T / 50.
inline RevivalMetrics revival_metrics(const EvalContext& ctx, double window_half_width,
                                      std::size_t n_samples = 2048) {
  const auto& g = ctx.grating();
  if (g.n_slits < 16) throw DomainError("revival_metrics: grating needs at least 16 slits");
  if (2.0 * window_half_width < 4.0 * g.period) {
    throw DomainError("revival_metrics: window must cover at least 4 periods");
  }
  if (window_half_width + 0.5 * g.period > g.half_extent()) {
    throw DomainError("revival_metrics: window exceeds the grating extent");
  }
  if (n_samples < 2) throw DomainError("revival_metrics: need at least two samples");
  const double zt = ctx.talbot();
  const double z_ref = zt / 50.0;
  const ZSlice ref = ctx.slice(z_ref);
  const ZSlice full = ctx.slice(z_ref + zt);
  const ZSlice half = ctx.slice(z_ref + zt / 2.0);

  std::vector<double> base(n_samples), revived(n_samples), shifted(n_samples);
  for (std::size_t k = 0; k < n_samples; ++k) {
    const double x = grid_point(-window_half_width, window_half_width, k, n_samples);
    base[k] = density(x, ref, g);
    revived[k] = density(x, full, g);
    shifted[k] = density(x + 0.5 * g.period, half, g);
  }
  return {pearson(base, revived), pearson(base, shifted)};
}

}  // namespace talbot

#endif  // TALBOT_FIELDGRID_HPP
