#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "talbot/farfield.hpp"
#include "talbot/fieldgrid.hpp"

using namespace talbot;
using fixtures::kSigma;

namespace {

double rel_err(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

FarFieldParams reference(std::size_t n_slits = 4, FarFieldForm form = FarFieldForm::consistent) {
  return make_farfield(fixtures::neutron_ctx(n_slits), form);
}

}  // namespace

TEST(DOfZ, SlitPlaneValue) {
  const FarFieldParams p = reference();
  const double m = p.beam.mass;
  EXPECT_LT(rel_err(d_of_z(0.0, p), m * m * kSigma * kSigma * kSigma * kSigma), 1e-15);
}

TEST(DOfZ, EqualTermPoint) {
  const FarFieldParams p = reference();
  const double m = p.beam.mass;
  const double t = 2.0 * m * kSigma * kSigma / constants::hbar;
  const double base = m * m * std::pow(kSigma, 4);
  EXPECT_LT(rel_err(d_of_z(t * p.beam.v_z, p), 2.0 * base), 1e-14);
}

TEST(DOfZ, HighPrecisionReference) {
  EXPECT_LT(rel_err(d_of_z(0.004, reference()), oracle::frozen::d_of_z_ref_4mm), 1e-14);
}

TEST(Zeta, OddAndZeroAtAxis) {
  const FarFieldParams p = reference();
  EXPECT_EQ(zeta(0.0, 0.004, p), 0.0);
  for (double x : {1e-6, 3.3e-5, 2e-4}) EXPECT_EQ(zeta(-x, 0.004, p), -zeta(x, 0.004, p));
}

TEST(Zeta, HighPrecisionReference) {
  EXPECT_LT(rel_err(zeta(1e-5, 0.004, reference(4, FarFieldForm::verbatim)),
                    oracle::frozen::zeta_verbatim_ref),
            1e-14);
  EXPECT_LT(rel_err(zeta(1e-5, 0.004, reference(4, FarFieldForm::consistent)),
                    oracle::frozen::zeta_consistent_ref),
            1e-14);
}

TEST(Zeta, ConsistentFormMatchesGratingEquationFarAway) {
  // zeta -> 2 pi d x / (lambda z) once the packet spreading dominates.
  const FarFieldParams p = reference();
  for (double z : {0.004, 0.1, 1.25}) {
    const double x = 1e-4 * z / 0.004;
    const double grating = 2.0 * std::numbers::pi * p.grating.period * x / (p.beam.wavelength * z);
    EXPECT_LT(rel_err(zeta(x, z, p), grating), 1e-6);
  }
}

TEST(Zeta, RejectsSlitPlane) { EXPECT_THROW(zeta(1e-6, 0.0, reference()), DomainError); }

TEST(Envelope, AxisValueAndEvenness) {
  for (FarFieldForm form : {FarFieldForm::consistent, FarFieldForm::verbatim}) {
    const FarFieldParams p = reference(4, form);
    const double z = 0.004;
    const double D = d_of_z(z, p);
    const double ms = p.beam.mass * kSigma;
    const double coeff = form == FarFieldForm::consistent ? std::sqrt(0.5 / std::numbers::pi)
                                                          : std::sqrt(1.0 / std::numbers::pi);
    EXPECT_LT(rel_err(envelope_i0(0.0, z, p), coeff * ms / std::sqrt(D)), 1e-15);
    for (double x : {1e-5, 2e-4, 7e-4}) EXPECT_EQ(envelope_i0(x, z, p), envelope_i0(-x, z, p));
  }
}

TEST(Envelope, ConsistentFormIsUnitNormalDensity) {
  const FarFieldParams p = reference();
  const double z = 0.004;
  const double sd = std::sqrt(d_of_z(z, p)) / (p.beam.mass * kSigma);
  const double total =
      oracle::trapezoid([&](double x) { return envelope_i0(x, z, p); }, -40.0 * sd, 40.0 * sd, 20000);
  EXPECT_NEAR(total, 1.0, 1e-6);
}

TEST(Envelope, VerbatimFormIntegratesToInverseRootTwo) {
  const FarFieldParams p = reference(4, FarFieldForm::verbatim);
  const double z = 0.004;
  const double sd = std::sqrt(d_of_z(z, p)) / (2.0 * p.beam.mass * kSigma);
  const double total =
      oracle::trapezoid([&](double x) { return envelope_i0(x, z, p); }, -40.0 * sd, 40.0 * sd, 20000);
  EXPECT_NEAR(total, 1.0 / std::sqrt(2.0), 1e-6);
}

TEST(Envelope, ConsistentFormIsTheSinglePacketDensity) {
  const EvalContext ctx = fixtures::neutron_ctx(1);
  const FarFieldParams p = make_farfield(ctx);
  for (double z : {1e-6, 0.004, 1.25}) {
    const double sd = oracle::spread(kSigma, z / ctx.beam().v_z, ctx.beam().mass);
    for (double u : {0.0, 0.7, 2.0}) {
      EXPECT_LT(rel_err(envelope_i0(u * sd, z, p), density(u * sd, z, ctx)), 1e-12);
    }
  }
}

TEST(DirichletRatio, SingleSourceIsOne) {
  for (double z : {-3.0, 0.0, 1.0, 100.0}) EXPECT_EQ(dirichlet_ratio(z, 1), 1.0);
  EXPECT_THROW(dirichlet_ratio(1.0, 0), DomainError);
}

TEST(DirichletRatio, ContinuousThroughPrincipalMaxima) {
  for (std::size_t n : {2u, 4u, 7u, 64u}) {
    const double n2 = static_cast<double>(n * n);
    for (int j : {0, 1, -3, 10}) {
      const double center = 2.0 * std::numbers::pi * j;
      EXPECT_NEAR(dirichlet_ratio(center, n), n2, 1e-9 * n2);
      for (double eps : {1e-3, 1e-6, 1e-9}) {
        const double dev = std::abs(dirichlet_ratio(center + eps, n) - n2);
        // The leading term N^2 (N^2 - 1) eps^2 / 12 stays under 1e-4 N^2 at eps = 1e-3 only for N <= 34.
        if (n <= 16) {
          EXPECT_LT(dev, 1e-4 * n2) << "n=" << n << " eps=" << eps;
        }
        // O(eps^2) with coefficient N^2 (N^2 - 1) / 12.
        EXPECT_LE(dev, n2 * (n2 - 1.0) / 12.0 * eps * eps * 1.01 + 1e-12 * n2);
      }
    }
  }
}

TEST(DirichletRatio, SubsidiaryMaximaAndZerosBetweenPrincipalPeaks) {
  for (std::size_t n : {3u, 4u, 5u, 8u}) {
    const std::size_t samples = 200000;
    std::vector<double> v(samples + 1);
    for (std::size_t k = 0; k <= samples; ++k) {
      v[k] = dirichlet_ratio(2.0 * std::numbers::pi * static_cast<double>(k) / samples, n);
    }
    std::size_t maxima = 0, zeros = 0;
    for (std::size_t k = 1; k < samples; ++k) {
      if (v[k] > v[k - 1] && v[k] > v[k + 1]) ++maxima;
      if (v[k] < v[k - 1] && v[k] <= v[k + 1] && v[k] < 1e-6) ++zeros;
    }
    EXPECT_EQ(maxima, n - 2) << "n = " << n;
    EXPECT_EQ(zeros, n - 1) << "n = " << n;
  }
}

TEST(FarFieldIntensity, AxisValueIsEnvelopeTimesNSquared) {
  const FarFieldParams p = reference();
  EXPECT_LT(rel_err(farfield_intensity(0.0, 0.004, p), 16.0 * envelope_i0(0.0, 0.004, p)), 1e-15);
}

TEST(FarFieldIntensity, SingleSlitIsEnvelope) {
  const FarFieldParams p = reference(1);
  for (double x : {0.0, 1e-5, 3e-4}) EXPECT_EQ(farfield_intensity(x, 0.004, p), envelope_i0(x, 0.004, p));
}

TEST(FarFieldIntensity, BoundedByEnvelopeTimesNSquared) {
  auto gen = oracle::rng(17);
  for (std::size_t n : {4u, 64u}) {
    const FarFieldParams p = reference(n);
    std::uniform_real_distribution<double> x(-0.5, 0.5);
    const double n2 = static_cast<double>(n * n);
    for (int i = 0; i < 2000; ++i) {
      const double xx = x(gen) * (n == 4 ? 4e-3 : 0.5);
      const double z = n == 4 ? 0.004 : 1.25;
      EXPECT_LE(farfield_intensity(xx, z, p), envelope_i0(xx, z, p) * n2 * (1.0 + 1e-12));
    }
  }
}

TEST(FarFieldIntensity, SubsidiaryMaximaAlongX) {
  const FarFieldParams p = reference(4);
  const double z = 0.004;
  const double spacing = p.beam.wavelength * z / p.grating.period;
  std::vector<double> v;
  const std::size_t samples = 20000;
  for (std::size_t k = 0; k <= samples; ++k) {
    // Stay clear of the principal peaks, whose maxima the envelope shifts slightly.
    v.push_back(farfield_intensity(spacing * (0.1 + 0.8 * static_cast<double>(k) / samples), z, p));
  }
  EXPECT_EQ(local_maxima(v).size(), 2u);
}

TEST(FarFieldIntensity, MatchesSimulatedDensityAtFourMillimetres) {
  const EvalContext ctx = fixtures::neutron_ctx(4);
  const FarFieldParams p = make_farfield(ctx);
  const double z = 0.004;
  const double spacing = ctx.beam().wavelength * z / ctx.grating().period;
  const ZSlice s = ctx.slice(z);
  std::vector<double> sim, ana;
  for (int k = 0; k <= 4096; ++k) {
    const double x = -2.5 * spacing + 5.0 * spacing * k / 4096.0;
    sim.push_back(density(x, s, ctx.grating()));
    ana.push_back(farfield_intensity(x, z, p));
  }
  const double sm = *std::max_element(sim.begin(), sim.end());
  const double am = *std::max_element(ana.begin(), ana.end());
  double worst = 0.0;
  for (std::size_t k = 0; k < sim.size(); ++k) worst = std::max(worst, std::abs(sim[k] / sm - ana[k] / am));
  EXPECT_LE(worst, 0.05);
  EXPECT_LE(worst, 1e-4);  // the consistent form is the exact far-field limit
}

TEST(FarFieldIntensity, VerbatimFormDisagreesWithSimulation) {
  const EvalContext ctx = fixtures::neutron_ctx(4);
  const FarFieldParams p = make_farfield(ctx, FarFieldForm::verbatim);
  const double z = 0.004;
  const ZSlice s = ctx.slice(z);
  const double sm = density(0.0, s, ctx.grating());
  const double am = farfield_intensity(0.0, z, p);
  double worst = 0.0;
  for (int k = 0; k <= 4096; ++k) {
    const double x = -1e-3 + 2e-3 * k / 4096.0;
    worst = std::max(worst, std::abs(density(x, s, ctx.grating()) / sm - farfield_intensity(x, z, p) / am));
  }
  EXPECT_GT(worst, 0.5);
}
