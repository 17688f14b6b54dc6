#include <random>

#include <gtest/gtest.h>

#include "coulomb/analysis.hpp"
#include "coulomb/numerics.hpp"
#include "coulomb/sampler.hpp"
#include "oracles.hpp"
#ifdef COULOMB_HAVE_MATRIX
#include "coulomb/eigen_backend.hpp"
#endif

using namespace coulomb;

namespace {

GasModel cauchy_model(std::size_t n) { return GasModel(Support(SupportKind::RealLine), 2.0, PotentialSpec::cauchy(), n); }

const auto kCauchyV = [](Complex x) { return std::log1p(x.real() * x.real()); };

ChainParams short_chain(std::uint64_t seed = 7) {
  ChainParams p;
  p.sweeps = 300;
  p.seed = seed;
  return p;
}

}  // namespace

TEST(AcceptanceRatio, UnitCase) {
  const auto m = cauchy_model(2);
  const Configuration c(m, {0.0, 1.0});
  const double r = log_acceptance_ratio(c, m, 1, 2.0);
  const std::vector<Complex> before{0.0, 1.0}, after{0.0, 2.0};
  const double oracle_ratio = oracle::log_density(after, 2.0, kCauchyV) - oracle::log_density(before, 2.0, kCauchyV);
  EXPECT_NEAR(r, oracle_ratio, 1e-14);
  EXPECT_NEAR(r, 2.0 * std::log(2.0) - 2.0 * (std::log(5.0) - std::log(2.0)), 1e-14);
  EXPECT_NEAR(std::min(1.0, std::exp(r)), 0.640, 5e-4);
}

TEST(AcceptanceRatio, CoincidentAndOffSupportProposals) {
  const auto m = cauchy_model(2);
  const Configuration c(m, {0.0, 1.0});
  EXPECT_EQ(log_acceptance_ratio(c, m, 1, 0.0), -std::numeric_limits<double>::infinity());
  EXPECT_EQ(log_acceptance_ratio(c, m, 1, Complex(1, 1)), -std::numeric_limits<double>::infinity());
  EXPECT_THROW(log_acceptance_ratio(c, m, 2, 0.5), Error);
}

TEST(AcceptanceRatio, DetailedBalanceAgainstFullRecompute) {
  std::mt19937_64 rng(41);
  std::normal_distribution<double> g;
  const GasModel m(Support(SupportKind::ComplexPlane), 1.5,
                   PotentialSpec::poly_log("w", {{0.0, 0.1}, PolyVariable::AbsSquared, 0.5}, 2.0), 20);
  const auto v = [&](Complex x) { return m.potential()(x); };
  for (int t = 0; t < 200; ++t) {
    std::vector<Complex> pts(20);
    for (auto& p : pts) p = Complex(g(rng), g(rng)) * 2.0;
    const Configuration c(m, pts);
    const std::size_t i = static_cast<std::size_t>(t) % 20;
    const Complex proposal = pts[i] + Complex(g(rng), g(rng));
    auto moved = pts;
    moved[i] = proposal;
    const double full = oracle::log_density(moved, 1.5, v) - oracle::log_density(pts, 1.5, v);
    EXPECT_NEAR(log_acceptance_ratio(c, m, i, proposal), full, 1e-10);
  }
}

TEST(Chain, DeterministicForAFixedSeed) {
  const auto m = cauchy_model(16);
  const auto init = default_initial_configuration(m);
  const auto a = mh_chain(m, init, short_chain());
  const auto b = mh_chain(m, init, short_chain());
  ASSERT_EQ(a.samples.size(), b.samples.size());
  for (std::size_t s = 0; s < a.samples.size(); ++s) ASSERT_EQ(a.samples[s], b.samples[s]);
  EXPECT_EQ(a.stats.energy_trace, b.stats.energy_trace);
  const auto c = mh_chain(m, init, short_chain(8));
  EXPECT_NE(a.samples.back(), c.samples.back());
}

TEST(Chain, RecordsThinnedPostBurnInSweeps) {
  const auto m = cauchy_model(8);
  auto p = short_chain();
  p.burn_in = 100;
  p.thin = 10;
  const auto r = mh_chain(m, default_initial_configuration(m), p);
  ASSERT_EQ(r.samples.size(), 20u);
  EXPECT_EQ(r.sweeps.front(), 100u);
  EXPECT_EQ(r.sweeps.back(), 290u);
  EXPECT_EQ(r.stats.energy_trace.size(), 20u);
  EXPECT_NEAR(r.stats.energy_trace.back(), config_energy(r.samples.back(), m), 1e-9);
  EXPECT_GE(r.stats.acceptance_rate, 0.0);
  EXPECT_LE(r.stats.acceptance_rate, 1.0);
}

TEST(Chain, AdaptationTargetsAcceptanceAndFreezes) {
  const auto m = cauchy_model(32);
  auto p = short_chain();
  p.sweeps = 1500;
  const auto adapted = mh_chain(m, default_initial_configuration(m), p);
  EXPECT_NEAR(adapted.stats.acceptance_rate, kTargetAcceptance, 0.05);
  p.adapt = false;
  const auto fixed = mh_chain(m, default_initial_configuration(m), p);
  EXPECT_EQ(fixed.stats.final_step_scale, p.step_scale);
}

TEST(Chain, StaysOnTheSupportWithoutCoincidences) {
  for (auto kind : {SupportKind::HalfLine, SupportKind::UnitSegment, SupportKind::UnitCircle}) {
    const GasModel m(Support(kind), 2.0, PotentialSpec::poly_log("c", {{0.0}, PolyVariable::AbsSquared, 2.0}, 4.0), 10);
    const auto r = mh_chain(m, default_initial_configuration(m), short_chain());
    for (const auto& s : r.samples) {
      for (std::size_t i = 0; i < s.size(); ++i) {
        ASSERT_TRUE(m.support().contains(s[i]));
        for (std::size_t j = i + 1; j < s.size(); ++j) ASSERT_NE(s[i], s[j]);
      }
    }
  }
}

TEST(Chain, RejectsInvalidInput) {
  const auto m = cauchy_model(4);
  const auto init = default_initial_configuration(m);
  auto p = short_chain();
  p.burn_in = 300;
  EXPECT_THROW(mh_chain(m, init, p), Error);
  p = short_chain();
  p.thin = 0;
  EXPECT_THROW(mh_chain(m, init, p), Error);
  p = short_chain();
  p.step_scale = 0.0;
  EXPECT_THROW(mh_chain(m, init, p), Error);
  const GasModel weak(Support(SupportKind::RealLine), 2.0,
                      PotentialSpec::custom("v", [](Complex x) { return std::norm(x); }), 4);
  try {
    mh_chain(weak, Configuration(weak, {0.0, 1.0, 2.0, 3.0}), short_chain());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InadmissibleModel);
  }
  EXPECT_THROW(mh_chain(m, Configuration(m, {0.0, 1.0, 1.0, 2.0}), short_chain()), Error);
}

TEST(Chain, ParallelChainsMatchSequentialOnes) {
  const auto m = cauchy_model(12);
  const auto init = default_initial_configuration(m);
  set_thread_count(1);
  const auto one = run_chains(m, init, short_chain(), 4);
  set_thread_count(4);
  const auto four = run_chains(m, init, short_chain(), 4);
  set_thread_count(1);
  for (std::size_t c = 0; c < 4; ++c) {
    EXPECT_EQ(one[c].samples.back(), four[c].samples.back());
    EXPECT_EQ(one[c].samples.back(), mh_chain(m, init, short_chain(), c).samples.back());
  }
}

TEST(DefaultInitialConfiguration, UsesEqualMassQuantiles) {
  const auto c = default_initial_configuration(cauchy_model(4));
  EXPECT_NEAR(c[0].real(), std::tan(std::numbers::pi * (0.125 - 0.5)), 1e-15);
  const GasModel s(Support(SupportKind::ComplexPlane), 2.0, PotentialSpec::spherical(), 4);
  const auto z = default_initial_configuration(s);
  EXPECT_NEAR(std::norm(z[1]) / (1.0 + std::norm(z[1])), 0.375, 1e-14);
}

TEST(Ensembles, NeedABackend) {
  try {
    sample_cauchy_ensemble(4, 0, nullptr);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::BackendUnavailable);
  }
  EXPECT_THROW(sample_spherical_ensemble(4, 0, nullptr), Error);
}

#ifdef COULOMB_HAVE_MATRIX

TEST(Ensembles, SingleCauchyDrawIsStandardCauchy) {
  std::vector<double> x;
  for (std::uint64_t s = 0; s < 10000; ++s) x.push_back(sample_cauchy_ensemble(1, s, &eigen_backend())[0].real());
  EXPECT_LE(oracle::ks(x, [](double t) { return 0.5 + std::atan(t) / std::numbers::pi; }), 0.05);
}

TEST(Ensembles, PooledCauchyDrawsMatchTheLimitLaw) {
  std::vector<Configuration> draws;
  for (std::uint64_t s = 0; s < 200; ++s) draws.push_back(sample_cauchy_ensemble(64, s, &eigen_backend()));
  const auto pts = pool(std::span<const Configuration>(draws));
  EXPECT_LE(ks_distance(real_parts(pts), ClosedFormLaw::cauchy()).statistic, 0.03);
}

TEST(Ensembles, PooledSphericalDrawsMatchTheLimitLaw) {
  std::vector<Configuration> draws;
  for (std::uint64_t s = 0; s < 100; ++s) draws.push_back(sample_spherical_ensemble(64, s, &eigen_backend()));
  const auto pts = pool(std::span<const Configuration>(draws));
  EXPECT_LE(radial_cdf_distance(pts, ClosedFormLaw::spherical()).statistic, 0.05);
  EXPECT_LE(angular_distance(pts).statistic, 0.05);
}

TEST(Ensembles, Deterministic) {
  EXPECT_EQ(sample_cauchy_ensemble(32, 5, &eigen_backend()), sample_cauchy_ensemble(32, 5, &eigen_backend()));
  EXPECT_EQ(sample_spherical_ensemble(32, 5, &eigen_backend()), sample_spherical_ensemble(32, 5, &eigen_backend()));
  EXPECT_THROW(sample_cauchy_ensemble(513, 0, &eigen_backend()), Error);
}

TEST(Ensembles, HaarEigenvaluesLieOnTheUnitCircle) {
  std::mt19937_64 rng(42);
  std::normal_distribution<double> g;
  std::vector<Complex> m(25);
  for (auto& z : m) z = Complex(g(rng), g(rng));
  for (const auto& l : eigen_backend().haar_unitary_eigenvalues(m, 5)) EXPECT_NEAR(std::abs(l), 1.0, 1e-12);
}

#endif
