#include <gtest/gtest.h>

#include "coulomb/model.hpp"

using namespace coulomb;

namespace {

const Support kReal{SupportKind::RealLine};
const Support kPlane{SupportKind::ComplexPlane};

GasModel real_model(PotentialSpec v, std::size_t n = 3) { return GasModel(kReal, 2.0, std::move(v), n); }

double weight_at(const PlaneMeasure& mu, Complex p) {
  for (const auto& a : mu.atoms())
    if (a.position == p) return a.weight;
  return -1.0;
}

}  // namespace

TEST(EmpiricalMeasure, ThreeDistinctPoints) {
  const auto mu = empirical_measure(Configuration(kPlane, {0.0, 1.0, Complex(0, 1)}));
  ASSERT_EQ(mu.size(), 3u);
  for (Complex p : {Complex(0), Complex(1), Complex(0, 1)}) EXPECT_DOUBLE_EQ(weight_at(mu, p), 1.0 / 3.0);
}

TEST(EmpiricalMeasure, DuplicatesMerge) {
  const auto mu = empirical_measure(Configuration(kReal, {1.0, 1.0}));
  ASSERT_EQ(mu.size(), 1u);
  EXPECT_EQ(mu[0].weight, 1.0);
}

TEST(EmpiricalMeasure, MultiplicityCount) {
  const auto mu = empirical_measure(Configuration(kReal, {-1.0, 0.0, 1.0, 0.0}));
  ASSERT_EQ(mu.size(), 3u);
  EXPECT_EQ(weight_at(mu, -1.0), 0.25);
  EXPECT_EQ(weight_at(mu, 0.0), 0.5);
  EXPECT_EQ(weight_at(mu, 1.0), 0.25);
}

TEST(EmpiricalMeasure, WeightsSumToOneForManySizes) {
  for (std::size_t n = 1; n <= 97; n += 6) {
    std::vector<Complex> pts;
    for (std::size_t i = 0; i < n; ++i) pts.emplace_back(static_cast<double>(i % 5), 0.0);
    const auto mu = empirical_measure(Configuration(kReal, pts));
    double total = 0.0;
    for (const auto& a : mu.atoms()) total += a.weight;
    EXPECT_NEAR(total, 1.0, 1e-15) << n;
  }
}

TEST(DiscreteMeasure, ConstructionIsIdempotent) {
  const PlaneMeasure mu({{0.0, 0.2}, {1.0, 0.3}, {0.0, 0.1}, {Complex(0, 2), 0.4}});
  const PlaneMeasure again(std::vector<Atom<Complex>>(mu.atoms().begin(), mu.atoms().end()));
  EXPECT_EQ(mu, again);
  EXPECT_EQ(mu.size(), 3u);
}

TEST(DiscreteMeasure, RejectsBadMass) {
  EXPECT_THROW(PlaneMeasure({{0.0, 0.5}}), Error);
  EXPECT_THROW(PlaneMeasure({{0.0, 1.5}, {1.0, -0.5}}), Error);
  EXPECT_THROW(PlaneMeasure(std::vector<Atom<Complex>>{}), Error);
  EXPECT_NO_THROW(PlaneMeasure({{0.0, 0.5}, {1.0, 0.5 + 5e-13}}));
}

TEST(Configuration, RejectsPointsOffTheSupport) {
  try {
    Configuration(kReal, {0.0, Complex(1.0, 0.5)});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidConfiguration);
  }
  EXPECT_NO_THROW(Configuration(kReal, {Complex(1.0, 1e-13)}));
  EXPECT_THROW(Configuration(Support(SupportKind::HalfLine), {-0.5}), Error);
  EXPECT_THROW(Configuration(Support(SupportKind::UnitSegment), {1.5}), Error);
  EXPECT_THROW(Configuration(Support(SupportKind::UnitCircle), {0.5}), Error);
  EXPECT_NO_THROW(Configuration(Support(SupportKind::UnitCircle), {Complex(0.6, 0.8)}));
}

TEST(Configuration, LengthMustMatchModel) {
  EXPECT_THROW(Configuration(real_model(PotentialSpec::cauchy(), 3), {0.0, 1.0}), Error);
}

TEST(GasModel, RecordsWeakGrowthFlag) {
  EXPECT_TRUE(real_model(PotentialSpec::cauchy()).weakly_admissible());
  const auto no_witness = PotentialSpec::custom("v", [](Complex x) { return std::norm(x); });
  EXPECT_FALSE(real_model(no_witness).weakly_admissible());
  EXPECT_FALSE(GasModel(kReal, 3.0, PotentialSpec::cauchy(), 2).weakly_admissible());
  EXPECT_THROW(GasModel(kReal, -1.0, PotentialSpec::cauchy(), 2), Error);
  EXPECT_THROW(GasModel(kReal, 2.0, PotentialSpec::cauchy(), 0), Error);
}

TEST(Potentials, BuiltinValues) {
  EXPECT_DOUBLE_EQ(PotentialSpec::cauchy()(2.0), std::log(5.0));
  EXPECT_DOUBLE_EQ(PotentialSpec::spherical()(Complex(1, 1)), std::log(3.0));
  EXPECT_DOUBLE_EQ(PotentialSpec::quadratic()(3.0), 9.0);
  EXPECT_EQ(*PotentialSpec::cauchy().v_infinity(2.0, true), 0.0);
  EXPECT_EQ(*PotentialSpec::spherical().v_infinity(2.0, false), 0.0);
  EXPECT_EQ(*PotentialSpec::quadratic().v_infinity(2.0, true), std::numeric_limits<double>::infinity());
}

TEST(Potentials, PolyLogGradientMatchesDifferences) {
  const auto v = PotentialSpec::poly_log("p", {{0.5, -1.0, 0.25}, PolyVariable::AbsSquared, 0.7}, 2.0);
  for (Complex x : {Complex(0.3, -1.2), Complex(2.0, 0.5), Complex(-0.7, 0.0)}) {
    const double h = 1e-6;
    const Complex fd((v(x + h) - v(x - h)) / (2 * h), (v(x + Complex(0, h)) - v(x - Complex(0, h))) / (2 * h));
    EXPECT_NEAR(std::abs(v.gradient(x) - fd), 0.0, 1e-7);
  }
}

TEST(Admissibility, QuadraticIsStrong) {
  EXPECT_EQ(admissibility_check(real_model(PotentialSpec::quadratic())).growth, Growth::Strong);
}

TEST(Admissibility, CauchyIsWeakOnly) {
  const auto report = admissibility_check(real_model(PotentialSpec::cauchy()));
  EXPECT_EQ(report.growth, Growth::WeakOnly);
  EXPECT_EQ(report.probes.size(), static_cast<std::size_t>(kProbeLastScale - kProbeFirstScale + 1));
}

TEST(Admissibility, HalfCauchyIsInadmissible) {
  const auto half = PotentialSpec::poly_log("half-cauchy", {{}, PolyVariable::X, 0.5}, 2.0);
  EXPECT_EQ(admissibility_check(real_model(half)).growth, Growth::Inadmissible);
}

TEST(Admissibility, CauchyIsNeverStrong) {
  for (double bp : {2.0, 2.5, 3.0, 10.0}) {
    const auto v = PotentialSpec::cauchy().with_beta_prime(bp);
    EXPECT_NE(admissibility_check(real_model(v)).growth, Growth::Strong) << bp;
  }
}

TEST(Admissibility, NeedsDeclaredWitness) {
  const auto v = PotentialSpec::custom("v", [](Complex x) { return std::norm(x); });
  try {
    admissibility_check(real_model(v));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MissingBetaPrime);
  }
}

TEST(Support, NamesRoundTrip) {
  for (auto k : {SupportKind::RealLine, SupportKind::ComplexPlane, SupportKind::HalfLine, SupportKind::UnitSegment,
                 SupportKind::UnitCircle})
    EXPECT_EQ(Support::from_name(Support(k).name()).kind(), k);
  EXPECT_THROW(Support::from_name("torus"), Error);
}
