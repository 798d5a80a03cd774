#ifndef TALBOT_QCORE_HPP
#define TALBOT_QCORE_HPP

// Gaussian-slit wavefunction behind an N-slit grating.
//
// Each slit emits a dispersing Gaussian packet
//
//   phi(x, x0, t) = (2 / (4 pi sigma_t^2))^(1/4) exp{-(x - x0)^2 / (4 sigma sigma_t)}
//   sigma_t       = sigma (1 + i (hbar / 2m) t / sigma^2)
//
// translated along z by exp{i(omega t - k_z z)} with t = z / v_z. The grating
// wavefunction is the mean of the per-slit packets and the density is its
// squared modulus.
//
// Two wave-number conventions coexist: packet_spectrum() takes k in cycles/m
// (explicit 2 pi factors), while BeamParams::k_z is in rad/m. They never meet
// in one expression.

#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "talbot/constants.hpp"
#include "talbot/errors.hpp"

namespace talbot {

using ComplexAmplitude = std::complex<double>;

struct BeamParams {
  double mass = 0.0;         // kg
  double wavelength = 0.0;   // m
  double k_z = 0.0;          // rad/m
  double v_z = 0.0;          // m/s
  double energy = 0.0;       // J
  double omega = 0.0;        // rad/s
  double temperature = 0.0;  // K
};

inline BeamParams beam_from_wavelength(double mass, double wavelength) {
  if (!(mass > 0.0) || !std::isfinite(mass)) {
    throw DomainError("beam mass must be positive");
  }
  if (!(wavelength > 0.0) || !std::isfinite(wavelength)) {
    throw DomainError("beam wavelength must be positive");
  }
  using namespace constants;
  BeamParams b;
  b.mass = mass;
  b.wavelength = wavelength;
  b.k_z = 2.0 * std::numbers::pi / wavelength;
  b.v_z = hbar * b.k_z / mass;
  b.energy = planck * planck / (2.0 * mass * wavelength * wavelength);
  b.omega = b.energy / hbar;
  b.temperature = b.energy / boltzmann;
  return b;
}

inline double talbot_length(double period, double wavelength) {
  if (!(period > 0.0) || !(wavelength > 0.0)) {
    throw DomainError("talbot_length: period and wavelength must be positive");
  }
  return 2.0 * period * period / wavelength;
}

struct GratingConfig {
  std::size_t n_slits = 0;
  double period = 0.0;  // m
  double sigma = 0.0;   // m, Gaussian half-width of each slit
  std::vector<double> slit_centers;

  /// Half the distance between the outermost slit centers.
  double half_extent() const { return 0.5 * static_cast<double>(n_slits - 1) * period; }
};

/// Builds a grating centered on x = 0: x_n = (n - (n_slits - 1)/2) d.
/// Mirror slits get exactly negated centers, which the symmetric sums below rely on.
inline GratingConfig make_grating(std::size_t n_slits, double period, double sigma) {
  if (n_slits < 1) throw DomainError("grating needs at least one slit");
  if (!(period > 0.0)) throw DomainError("grating period must be positive");
  if (!(sigma > 0.0)) throw DomainError("slit sigma must be positive");
  GratingConfig g;
  g.n_slits = n_slits;
  g.period = period;
  g.sigma = sigma;
  g.slit_centers.resize(n_slits);
  const double mid = 0.5 * static_cast<double>(n_slits - 1);
  for (std::size_t n = 0; n < n_slits; ++n) {
    g.slit_centers[n] = (static_cast<double>(n) - mid) * period;
  }
  return g;
}

inline ComplexAmplitude sigma_t(double sigma, double t, const BeamParams& beam) {
  if (!(sigma > 0.0)) throw DomainError("sigma_t: sigma must be positive");
  if (!(t >= 0.0)) throw DomainError("sigma_t: t must be non-negative");
  const double tau = constants::hbar / (2.0 * beam.mass) * t / (sigma * sigma);
  return {sigma, sigma * tau};
}

/// Quantities shared by every packet at one z.
struct ZSlice {
  double z = 0.0;
  double t = 0.0;
  ComplexAmplitude sigma_t;
  ComplexAmplitude prefactor;   // principal (2 / (4 pi sigma_t^2))^(1/4)
  ComplexAmplitude inv_width;   // 1 / (4 sigma sigma_t)
  ComplexAmplitude carrier;     // exp{i(omega t - k_z z)}
};

class EvalContext {
 public:
  EvalContext(BeamParams beam, GratingConfig grating)
      : beam_(std::move(beam)), grating_(std::move(grating)) {
    if (!(beam_.mass > 0.0) || !(beam_.v_z > 0.0)) {
      throw DomainError("EvalContext: beam is not initialized");
    }
    if (grating_.n_slits < 1 || grating_.slit_centers.size() != grating_.n_slits) {
      throw DomainError("EvalContext: grating is not initialized");
    }
  }

  const BeamParams& beam() const noexcept { return beam_; }
  const GratingConfig& grating() const noexcept { return grating_; }

  double talbot() const { return talbot_length(grating_.period, beam_.wavelength); }
  double time_at(double z) const { return z / beam_.v_z; }

  ZSlice slice(double z) const {
    if (!(z >= 0.0)) throw DomainError("z must be non-negative");
    ZSlice s;
    s.z = z;
    s.t = time_at(z);
    s.sigma_t = talbot::sigma_t(grating_.sigma, s.t, beam_);
    const ComplexAmplitude ratio = 2.0 / (4.0 * std::numbers::pi * s.sigma_t * s.sigma_t);
    s.prefactor = std::exp(0.25 * std::log(ratio));
    s.inv_width = 1.0 / (4.0 * grating_.sigma * s.sigma_t);
    s.carrier = std::polar(1.0, beam_.omega * s.t - beam_.k_z * z);
    return s;
  }

 private:
  BeamParams beam_;
  GratingConfig grating_;
};

namespace detail {

// exp() of anything below this is zero or subnormal in double precision.
inline constexpr double kNegligibleExponent = -745.0;

/// Sums term(n) over all slits, adding mirror pairs (n, N-1-n) first so the
/// result is bit-exactly even/odd in x whenever the terms are.
template <class Term>
ComplexAmplitude symmetric_sum(std::size_t n_slits, Term&& term) {
  ComplexAmplitude acc{0.0, 0.0};
  std::size_t lo = 0;
  std::size_t hi = n_slits;
  while (hi - lo >= 2) {
    --hi;
    acc += term(lo) + term(hi);
    ++lo;
  }
  if (hi > lo) acc += term(lo);
  return acc;
}

}  // namespace detail

inline ComplexAmplitude packet_psi(double x, double x0, const ZSlice& s) {
  const double dx = x - x0;
  return s.prefactor * s.carrier * std::exp(-dx * dx * s.inv_width);
}

inline ComplexAmplitude packet_psi(double x, double x0, double z, const EvalContext& ctx) {
  return packet_psi(x, x0, ctx.slice(z));
}

/// Fourier spectrum of the slit-plane packet, k in cycles/m.
inline ComplexAmplitude packet_spectrum(double k, double x0, double sigma) {
  if (!(sigma > 0.0)) throw DomainError("packet_spectrum: sigma must be positive");
  constexpr double pi = std::numbers::pi;
  const double amplitude =
      std::pow(8.0 * pi * sigma * sigma, 0.25) * std::exp(-4.0 * pi * pi * sigma * sigma * k * k);
  return std::polar(amplitude, -2.0 * pi * k * x0);
}

inline ComplexAmplitude superposed_psi(double x, const ZSlice& s, const GratingConfig& g) {
  const auto& centers = g.slit_centers;
  const ComplexAmplitude sum = detail::symmetric_sum(g.n_slits, [&](std::size_t n) {
    const double dx = x - centers[n];
    const ComplexAmplitude arg = -dx * dx * s.inv_width;
    if (arg.real() < detail::kNegligibleExponent) return ComplexAmplitude{};
    return std::exp(arg);
  });
  return s.prefactor * s.carrier * sum / static_cast<double>(g.n_slits);
}

inline ComplexAmplitude superposed_psi(double x, double z, const EvalContext& ctx) {
  return superposed_psi(x, ctx.slice(z), ctx.grating());
}

inline double density(double x, const ZSlice& s, const GratingConfig& g) {
  return std::norm(superposed_psi(x, s, g));
}

inline double density(double x, double z, const EvalContext& ctx) {
  return density(x, ctx.slice(z), ctx.grating());
}

}  // namespace talbot

#endif  // TALBOT_QCORE_HPP
