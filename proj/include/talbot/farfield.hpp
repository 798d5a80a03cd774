#ifndef TALBOT_FARFIELD_HPP
#define TALBOT_FARFIELD_HPP

// Analytic far-field diffraction intensity
//
//   I(x, z) = I0(x, z) sin^2(N zeta / 2) / sin^2(zeta / 2)
//   D(z)    = m^2 sigma^4 + hbar^2 t^2 / 4,   t = z / v_z
//
// N is the number of slits. Two forms of zeta and I0 are provided:
//
//   consistent: zeta = x d m hbar t / (4 D)
//               I0   = sqrt(1/2pi) m sigma / sqrt(D) exp{-m^2 sigma^2 x^2 / (2 D)}
//   verbatim:   zeta = x d m hbar t / D
//               I0   = sqrt(1/pi) m sigma / sqrt(D) exp{-2 m^2 sigma^2 x^2 / D}
//
// The consistent form is the far-field limit of the Gaussian-slit sum in
// qcore.hpp: its zeta tends to m x d / (hbar t) = 2 pi d sin(theta) / lambda
// and its I0 is the single-packet density. The verbatim form has four times
// that phase and a narrower, non-normalized envelope; it is kept for
// comparison only.

#include <cmath>
#include <cstddef>
#include <numbers>

#include "talbot/constants.hpp"
#include "talbot/errors.hpp"
#include "talbot/qcore.hpp"

namespace talbot {

enum class FarFieldForm { consistent, verbatim };

struct FarFieldParams {
  BeamParams beam;
  GratingConfig grating;
  std::size_t n_for_formula = 1;
  FarFieldForm form = FarFieldForm::consistent;
};

inline FarFieldParams make_farfield(const EvalContext& ctx,
                                    FarFieldForm form = FarFieldForm::consistent) {
  return FarFieldParams{ctx.beam(), ctx.grating(), ctx.grating().n_slits, form};
}

inline double d_of_z(double z, const FarFieldParams& p) {
  if (!(z >= 0.0)) throw DomainError("d_of_z: z must be non-negative");
  const double m = p.beam.mass;
  const double s2 = p.grating.sigma * p.grating.sigma;
  const double t = z / p.beam.v_z;
  return m * m * s2 * s2 + constants::hbar * constants::hbar * t * t / 4.0;
}

inline double zeta(double x, double z, const FarFieldParams& p) {
  if (!(z > 0.0)) throw DomainError("zeta: z must be positive in the far field");
  const double t = z / p.beam.v_z;
  const double phase = x * p.grating.period * p.beam.mass * constants::hbar * t / d_of_z(z, p);
  return p.form == FarFieldForm::consistent ? phase / 4.0 : phase;
}

inline double envelope_i0(double x, double z, const FarFieldParams& p) {
  const double D = d_of_z(z, p);
  const double ms = p.beam.mass * p.grating.sigma;
  if (p.form == FarFieldForm::consistent) {
    return std::sqrt(0.5 / std::numbers::pi) * ms / std::sqrt(D) *
           std::exp(-ms * ms * x * x / (2.0 * D));
  }
  return std::sqrt(1.0 / std::numbers::pi) * ms / std::sqrt(D) *
         std::exp(-2.0 * ms * ms * x * x / D);
}

/// sin^2(N zeta/2) / sin^2(zeta/2), continuous through zeta = 2 pi j where it equals N^2.
inline double dirichlet_ratio(double zeta_value, std::size_t n) {
  if (n == 0) throw DomainError("dirichlet_ratio: need at least one source");
  const double nn = static_cast<double>(n);
  if (n == 1) return 1.0;
  // Reduce u = zeta/2 to r = u - j pi; the ratio is pi-periodic in u.
  const double u = 0.5 * zeta_value;
  const double r = u - std::nearbyint(u / std::numbers::pi) * std::numbers::pi;
  const double sr = std::sin(r);
  if (std::abs(sr) < 1e-8) {
    const double amp = nn * (1.0 - (nn * nn - 1.0) * r * r / 6.0);
    return amp * amp;
  }
  const double snr = std::sin(nn * r);
  return (snr * snr) / (sr * sr);
}

inline double farfield_intensity(double x, double z, const FarFieldParams& p) {
  return envelope_i0(x, z, p) * dirichlet_ratio(zeta(x, z, p), p.n_for_formula);
}

}  // namespace talbot

#endif  // TALBOT_FARFIELD_HPP
