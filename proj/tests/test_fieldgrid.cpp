#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "talbot/fieldgrid.hpp"

using namespace talbot;
using fixtures::kLambda;
using fixtures::kPeriod;
using fixtures::kSigma;

namespace {

double rel_err(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

bool has_maximum_near(const CrossSection& cs, double target, double tolerance) {
  for (std::size_t k : local_maxima(cs.values)) {
    if (std::abs(cs.positions[k] - target) <= tolerance) return true;
  }
  return false;
}

}  // namespace

TEST(GridSpec, Validation) {
  EXPECT_NO_THROW((GridSpec{-1.0, 1.0, 2, 0.1, 1.0, 2}.validate()));
  EXPECT_THROW((GridSpec{1.0, 1.0, 2, 0.1, 1.0, 2}.validate()), DomainError);
  EXPECT_THROW((GridSpec{-1.0, 1.0, 2, 0.0, 1.0, 2}.validate()), DomainError);
  EXPECT_THROW((GridSpec{-1.0, 1.0, 2, 1.0, 0.5, 2}.validate()), DomainError);
  EXPECT_THROW((GridSpec{-1.0, 1.0, 1, 0.1, 1.0, 2}.validate()), DomainError);
  EXPECT_THROW((GridSpec{-1.0, 1.0, 2, 0.1, 1.0, 1}.validate()), DomainError);
}

TEST(GridSpec, DefaultsCoverGratingFromSmallZToTalbotLength) {
  const EvalContext ctx = fixtures::neutron_ctx(4);
  const GridSpec g = default_grid(ctx);
  EXPECT_DOUBLE_EQ(g.x_max, 4.0 * kPeriod);
  EXPECT_DOUBLE_EQ(g.x_min, -4.0 * kPeriod);
  EXPECT_DOUBLE_EQ(g.z_min, ctx.talbot() / 1000.0);
  EXPECT_DOUBLE_EQ(g.z_max, ctx.talbot());
  EXPECT_EQ(g.nx, 1024u);
  EXPECT_EQ(g.nz, 1024u);
}

TEST(SampleDensity, TwoByTwoSingleSlitClosedForm) {
  const EvalContext ctx = fixtures::neutron_ctx(1);
  const GridSpec spec{-kSigma, 2.0 * kSigma, 2, 1e-8, 1e-6, 2};
  const DensityField f = sample_density(ctx, spec);
  ASSERT_EQ(f.values.size(), 4u);
  for (std::size_t j = 0; j < 2; ++j) {
    const double z = spec.z_at(j);
    const double sd = oracle::spread(kSigma, z / ctx.beam().v_z, ctx.beam().mass);
    for (std::size_t i = 0; i < 2; ++i) {
      EXPECT_LT(rel_err(f.at(i, j), oracle::normal_pdf(spec.x_at(i), 0.0, sd)), 1e-12);
    }
    EXPECT_EQ(f.column_max[j], std::max(f.at(0, j), f.at(1, j)));
  }
  EXPECT_EQ(f.global_max, std::max(f.column_max[0], f.column_max[1]));
}

TEST(SampleDensity, MirrorSymmetricOnSymmetricGrid) {
  for (std::size_t n : {3u, 4u}) {
    const EvalContext ctx = fixtures::neutron_ctx(n);
    GridSpec spec = default_grid(ctx);
    spec.nx = 201;
    spec.nz = 37;
    const DensityField f = sample_density(ctx, spec);
    for (std::size_t j = 0; j < spec.nz; ++j) {
      for (std::size_t i = 0; i < spec.nx; ++i) EXPECT_EQ(f.at(i, j), f.at(spec.nx - 1 - i, j));
    }
  }
}

TEST(SampleDensity, MaximumInFirstColumnOnTransientDomain) {
  const EvalContext ctx = fixtures::neutron_ctx(4);
  const GridSpec spec{0.0, 1.4e-6, 1024, 5e-8, 3.8e-6, 1024};
  const DensityField f = sample_density(ctx, spec);
  EXPECT_EQ(f.column_max[0], f.global_max);
  for (double v : f.values) EXPECT_GE(v, 0.0);
  for (std::size_t j = 0; j < spec.nz; ++j) {
    const auto col = f.column(j);
    EXPECT_EQ(f.column_max[j], *std::max_element(col.begin(), col.end()));
  }
}

TEST(SampleDensity, MaximumInFirstColumnFromDefaultStart) {
  const EvalContext ctx = fixtures::neutron_ctx(4);
  GridSpec spec{0.0, 1.4e-6, 1024, ctx.talbot() / 1000.0, 3.8e-6, 512};
  const DensityField f = sample_density(ctx, spec);
  EXPECT_EQ(f.column_max[0], f.global_max);
}

TEST(SampleDensity, IndependentOfThreadCount) {
  const EvalContext ctx = fixtures::neutron_ctx(8);
  GridSpec spec = default_grid(ctx);
  spec.nx = 300;
  spec.nz = 101;
  const DensityField a = sample_density(ctx, spec, 1);
  const DensityField b = sample_density(ctx, spec, 5);
  const DensityField c = sample_density(ctx, spec, 1);
  EXPECT_EQ(a.values, b.values);
  EXPECT_EQ(a.values, c.values);
  EXPECT_EQ(a.column_max, b.column_max);
  EXPECT_EQ(a.global_max, b.global_max);
}

TEST(SampleDensity, RefinementKeepsExistingSamples) {
  const EvalContext ctx = fixtures::neutron_ctx(4);
  GridSpec coarse = default_grid(ctx);
  coarse.nx = 65;
  coarse.nz = 33;
  GridSpec fine = coarse;
  fine.nx = 2 * coarse.nx - 1;
  fine.nz = 2 * coarse.nz - 1;
  const DensityField a = sample_density(ctx, coarse);
  const DensityField b = sample_density(ctx, fine);
  for (std::size_t j = 0; j < coarse.nz; ++j) {
    for (std::size_t i = 0; i < coarse.nx; ++i) EXPECT_EQ(a.at(i, j), b.at(2 * i, 2 * j));
  }
}

TEST(SampleDensity, RejectsInvalidSpec) {
  const EvalContext ctx = fixtures::neutron_ctx(4);
  EXPECT_THROW(sample_density(ctx, GridSpec{0.0, 1.0, 4, 0.0, 1.0, 4}), DomainError);
}

TEST(CrossSection, FixedZMatchesPointEvaluation) {
  const EvalContext ctx = fixtures::neutron_ctx(4);
  const GridSpec domain{-3e-4, 3e-4, 2, 1e-6, 0.01, 2};
  const CrossSection cs = cross_section(ctx, domain, SectionAxis::fixed_z, 0.004, 4097);
  ASSERT_EQ(cs.positions.size(), 4097u);
  EXPECT_EQ(cs.coordinate, 0.004);
  for (std::size_t k = 1; k < cs.positions.size(); ++k) EXPECT_GT(cs.positions[k], cs.positions[k - 1]);
  for (std::size_t k = 0; k < cs.positions.size(); k += 97) {
    EXPECT_EQ(cs.values[k], density(cs.positions[k], 0.004, ctx));
  }
}

TEST(CrossSection, MidpointVanishesAtEndsAndPeaksAtQuarterPeriods) {
  const EvalContext ctx = fixtures::neutron_ctx(64);
  const double zt = ctx.talbot();
  const GridSpec domain{-3.0 * kPeriod, 3.0 * kPeriod, 2, zt / 1000.0, zt, 2};
  // x = 0 is the midpoint between the two central slits.
  const CrossSection cs = cross_section(ctx, domain, SectionAxis::fixed_x, 0.0, 2048);
  const double peak = *std::max_element(cs.values.begin(), cs.values.end());
  EXPECT_LT(cs.values.front(), 0.1 * peak);
  EXPECT_LT(cs.values.back(), 0.1 * peak);
  for (double f : {0.25, 0.5, 0.75}) EXPECT_TRUE(has_maximum_near(cs, f * zt, 0.02 * zt)) << f;
}

TEST(CrossSection, SingleSlitCenterDecreasesWithZ) {
  const EvalContext ctx = fixtures::neutron_ctx(1);
  const GridSpec domain{-kPeriod, kPeriod, 2, 1e-10, 5e-6, 2};
  const CrossSection cs = cross_section(ctx, domain, SectionAxis::fixed_x, 0.0, 1000);
  for (std::size_t k = 1; k < cs.values.size(); ++k) EXPECT_LT(cs.values[k], cs.values[k - 1]);
}

TEST(CrossSection, RejectsOutOfDomainCoordinates) {
  const EvalContext ctx = fixtures::neutron_ctx(4);
  const GridSpec domain{-1e-7, 1e-7, 2, 1e-9, 1e-6, 2};
  EXPECT_THROW(cross_section(ctx, domain, SectionAxis::fixed_x, 2e-7, 10), DomainError);
  EXPECT_THROW(cross_section(ctx, domain, SectionAxis::fixed_z, 2e-6, 10), DomainError);
  EXPECT_THROW(cross_section(ctx, domain, SectionAxis::fixed_z, 1e-10, 10), DomainError);
  EXPECT_THROW(cross_section(ctx, domain, SectionAxis::fixed_z, 1e-7, 1), DomainError);
}

TEST(Pearson, BasicIdentities) {
  const std::vector<double> a{1.0, 2.0, 3.0, 5.0};
  const std::vector<double> b{2.0, 4.0, 6.0, 10.0};
  const std::vector<double> c{-1.0, -2.0, -3.0, -5.0};
  EXPECT_NEAR(pearson(a, b), 1.0, 1e-15);
  EXPECT_NEAR(pearson(a, c), -1.0, 1e-15);
  EXPECT_EQ(pearson(a, std::vector<double>(4, 7.0)), 0.0);
  EXPECT_THROW(pearson(a, std::vector<double>{1.0}), DomainError);
}

TEST(LocalMaxima, StrictInteriorPeaks) {
  const std::vector<double> v{0.0, 1.0, 0.5, 0.5, 2.0, 3.0, 1.0, 4.0};
  EXPECT_EQ(local_maxima(v), (std::vector<std::size_t>{1, 5}));
}

TEST(Revival, SixtyFourSlitsSelfImage) {
  const EvalContext ctx = fixtures::neutron_ctx(64);
  const RevivalMetrics m = revival_metrics(ctx, 2.0 * kPeriod);
  EXPECT_GE(m.full_revival_corr, 0.90);
  EXPECT_GE(m.half_revival_shift_corr, 0.90);
}

TEST(Revival, RejectsUnsuitableGratingsAndWindows) {
  EXPECT_THROW(revival_metrics(fixtures::neutron_ctx(1), 2.0 * kPeriod), DomainError);
  EXPECT_THROW(revival_metrics(fixtures::neutron_ctx(8), 2.0 * kPeriod), DomainError);
  const EvalContext ctx = fixtures::neutron_ctx(64);
  EXPECT_THROW(revival_metrics(ctx, 1.5 * kPeriod), DomainError);
  EXPECT_THROW(revival_metrics(ctx, 32.0 * kPeriod), DomainError);
}

TEST(TalbotUnits, CarpetsAgreeAcrossPeriods) {
  // d = 10 lambda and d = 20 lambda with the same slit width, compared at equal z / z_T
  // on a central window measured in periods.
  const EvalContext narrow = fixtures::neutron_ctx(64, 10.0 * kLambda);
  const EvalContext wide = fixtures::neutron_ctx(64, 20.0 * kLambda);
  const std::size_t samples = 1024;
  for (double f : {0.25, 0.5, 0.75, 1.0}) {
    std::vector<double> a(samples), b(samples);
    const ZSlice sa = narrow.slice(f * narrow.talbot());
    const ZSlice sb = wide.slice(f * wide.talbot());
    for (std::size_t k = 0; k < samples; ++k) {
      const double u = -2.0 + 4.0 * static_cast<double>(k) / static_cast<double>(samples - 1);
      a[k] = density(u * narrow.grating().period, sa, narrow.grating());
      b[k] = density(u * wide.grating().period, sb, wide.grating());
    }
    EXPECT_GE(pearson(a, b), 0.8) << "z/z_T = " << f;
  }
}
