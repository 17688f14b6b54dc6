#include <random>

#include <gtest/gtest.h>

#include "coulomb/analysis.hpp"
#include "oracles.hpp"

using namespace coulomb;

namespace {

using std::numbers::pi;

double cauchy_cdf(double x) { return 0.5 + std::atan(x) / pi; }

GasModel cauchy_model() { return GasModel(Support(SupportKind::RealLine), 2.0, PotentialSpec::cauchy(), 2); }

}  // namespace

TEST(Ks, ThreePointExample) {
  const std::vector<double> x{-1.0, 0.0, 1.0};
  const auto r = ks_distance(x, ClosedFormLaw::cauchy());
  EXPECT_NEAR(r.statistic, oracle::ks(x, cauchy_cdf), 1e-15);
  EXPECT_NEAR(r.statistic, 0.25, 1e-15);
  EXPECT_EQ(r.sample_size, 3u);
  EXPECT_EQ(r.reference, "cauchy");
}

TEST(Ks, QuantileSamplesAreClose) {
  for (std::size_t n : {1u, 10u, 999u}) {
    std::vector<double> x;
    for (std::size_t i = 1; i <= n; ++i) x.push_back(std::tan(pi * (static_cast<double>(i) / (n + 1.0) - 0.5)));
    EXPECT_LE(ks_distance(x, ClosedFormLaw::cauchy()).statistic, 1.0 / (n + 1.0) + 1e-12);
  }
}

TEST(Ks, SingleSampleAtTheMedian) {
  EXPECT_NEAR(ks_distance(std::vector<double>{0.0}, ClosedFormLaw::cauchy()).statistic, 0.5, 1e-15);
}

TEST(Ks, EmptySampleRejected) {
  try {
    ks_distance(std::vector<double>{}, ClosedFormLaw::cauchy());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptySample);
  }
}

TEST(Ks, InvariantUnderMonotoneReparametrisation) {
  std::mt19937_64 rng(51);
  std::cauchy_distribution<double> c;
  std::vector<double> x(500), y(500);
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = c(rng);
    y[i] = std::atan(x[i]);
  }
  const double direct = ks_distance(x, ClosedFormLaw::cauchy()).statistic;
  const double mapped = ks_distance(y, [](double t) { return 0.5 + t / pi; }).statistic;
  EXPECT_NEAR(direct, mapped, 1e-12);
  EXPECT_NEAR(direct, oracle::ks(x, cauchy_cdf), 1e-15);
}

TEST(RadialCdf, Examples) {
  EXPECT_NEAR(radial_cdf_distance(std::vector<Complex>{Complex(0, 1)}, ClosedFormLaw::spherical()).statistic, 0.5, 1e-15);
  std::vector<Complex> z;
  const std::size_t n = 200;
  for (std::size_t i = 1; i <= n; ++i) {
    const double u = static_cast<double>(i) / (n + 1.0);
    z.push_back(std::polar(std::sqrt(u / (1.0 - u)), 0.1 * static_cast<double>(i)));
  }
  EXPECT_LE(radial_cdf_distance(z, ClosedFormLaw::spherical()).statistic, 1.0 / (n + 1.0) + 1e-12);
  EXPECT_THROW(radial_cdf_distance(std::vector<Complex>{}, ClosedFormLaw::spherical()), Error);
}

TEST(Angular, UniformAnglesAreClose) {
  std::vector<Complex> z;
  for (int i = 0; i < 100; ++i) z.push_back(std::polar(1.0 + i, 2.0 * pi * (i + 0.5) / 100.0));
  EXPECT_LE(angular_distance(z).statistic, 0.0051);
}

TEST(EquatorAngle, CauchyQuantilesAreUniform) {
  std::vector<Complex> z;
  for (int i = 1; i <= 100; ++i) z.emplace_back(std::tan(pi * (i / 101.0 - 0.5)), 0.0);
  EXPECT_LE(equator_angle_distance(z).statistic, 1.0 / 101.0 + 1e-12);
  EXPECT_LE(sphere_height_distance(std::vector<Complex>{Complex(0, 1)}).statistic, 0.5 + 1e-15);
}

TEST(Pool, OrdersByChainSweepParticle) {
  const Support s(SupportKind::RealLine);
  ChainResult a, b;
  a.samples = {Configuration(s, {1.0, 2.0}), Configuration(s, {3.0, 4.0})};
  b.samples = {Configuration(s, {5.0, 6.0})};
  const std::vector<ChainResult> chains{a, b};
  const auto pooled = pool(std::span<const ChainResult>(chains));
  const std::vector<Complex> expected{1.0, 2.0, 3.0, 4.0, 5.0, 6.0};
  EXPECT_EQ(pooled, expected);
}

TEST(RateGap, FineCauchyDiscretisation) {
  const auto g = make_grid(Support(SupportKind::RealLine), GridSpec{});
  auto masses = g.cell_masses(ClosedFormLaw::cauchy());
  double total = 0.0;
  for (double m : masses) total += m;
  for (double& m : masses) m /= total;
  const auto mu = PlaneMeasure::from_weights(g.positions, masses);
  const auto gap = rate_gap(mu, cauchy_model(), std::nullopt, g.self_log);
  EXPECT_LE(std::abs(gap.value), 0.05);
  EXPECT_EQ(gap.reference, "closed-form");
  EXPECT_EQ(gap.reference_energy, std::numbers::ln2);
}

TEST(RateGap, AtomicPairIsFlaggedOffDiagonal) {
  const auto gap = rate_gap(PlaneMeasure({{-1.0, 0.5}, {1.0, 0.5}}), cauchy_model());
  EXPECT_NEAR(gap.value, -std::numbers::ln2, 1e-15);
  EXPECT_EQ(gap.diagonal_policy, DiagonalPolicy::OffDiagonalOnly);
}

TEST(RateGap, MinimizerAgainstItself) {
  const GasModel q(Support(SupportKind::RealLine), 2.0, PotentialSpec::quadratic(), 1);
  GridSpec spec;
  spec.window = 2.0;
  spec.resolution = 200;
  spec.layout = GridLayout::Uniform;
  const auto r = grid_minimize(q, spec, SolverOptions{});
  const auto gap = rate_gap(r.measure, q, r.report.value, r.grid.self_log);
  EXPECT_LE(std::abs(gap.value), 1e-4);
  EXPECT_GE(gap.value, -1e-4);
  EXPECT_EQ(gap.reference, "supplied");
  try {
    rate_gap(r.measure, q);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NoReference);
  }
}

TEST(Median, OddAndEven) {
  EXPECT_EQ(median({3.0, 1.0, 2.0}), 2.0);
  EXPECT_EQ(median({4.0, 1.0, 2.0, 3.0}), 2.5);
  EXPECT_THROW(median({}), Error);
}
