#include <algorithm>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "coulomb/equilibrium.hpp"
#include "oracles.hpp"

using namespace coulomb;

namespace {

using std::numbers::pi;

GasModel cauchy_model(std::size_t n = 1) {
  return GasModel(Support(SupportKind::RealLine), 2.0, PotentialSpec::cauchy(), n);
}
GasModel spherical_model(std::size_t n = 1) {
  return GasModel(Support(SupportKind::ComplexPlane), 2.0, PotentialSpec::spherical(), n);
}
GasModel quadratic_model(std::size_t n = 1) {
  return GasModel(Support(SupportKind::RealLine), 2.0, PotentialSpec::quadratic(), n);
}

GridSpec quadratic_grid() {
  GridSpec g;
  g.window = 2.0;
  g.resolution = 400;
  g.layout = GridLayout::Uniform;
  return g;
}

const MinimizerResult& cauchy_result() {
  static const MinimizerResult r = grid_minimize(cauchy_model(), GridSpec{}, SolverOptions{});
  return r;
}

const MinimizerResult& quadratic_result() {
  static const MinimizerResult r = grid_minimize(quadratic_model(), quadratic_grid(), SolverOptions{});
  return r;
}

}  // namespace

TEST(ClosedForm, CauchyDensityAtZero) {
  const auto law = closed_form(cauchy_model());
  EXPECT_EQ(law.name(), LawName::CauchyLaw);
  EXPECT_NEAR(law.density(0.0), 1.0 / pi, 1e-15);
  EXPECT_NEAR(law.cdf(1.0), 0.75, 1e-15);
}

TEST(ClosedForm, SphericalDensityAndRadialCdf) {
  const auto law = closed_form(spherical_model());
  EXPECT_NEAR(law.density(0.0), 1.0 / pi, 1e-15);
  const double radial = oracle::integrate([&](double r) { return 2.0 * pi * r * law.density(r); }, 0.0, 1.0);
  EXPECT_NEAR(law.cdf(1.0), radial, 1e-12);
  EXPECT_NEAR(law.cdf(1.0), 0.5, 1e-15);
}

TEST(ClosedForm, QuadraticHasNone) {
  try {
    closed_form(quadratic_model());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NoClosedForm);
  }
  EXPECT_FALSE(closed_form_energy(quadratic_model()).has_value());
  EXPECT_THROW(closed_form(GasModel(Support(SupportKind::RealLine), 1.0, PotentialSpec::cauchy(), 1)), Error);
}

TEST(ClosedForm, LawsIntegrateToOne) {
  const auto c = ClosedFormLaw::cauchy();
  const double line = oracle::integrate([&](double t) { return 2.0 * c.density(std::tan(t)) / std::pow(std::cos(t), 2); },
                                        0.0, pi / 2);
  EXPECT_NEAR(line, 1.0, 1e-9);
  const auto s = ClosedFormLaw::spherical();
  const double plane = oracle::integrate(
      [&](double t) {
        const double r = std::tan(t);
        return 2.0 * pi * r * s.density(r) / std::pow(std::cos(t), 2);
      },
      0.0, pi / 2);
  EXPECT_NEAR(plane, 1.0, 1e-9);
  EXPECT_NEAR(ClosedFormLaw::sphere_uniform().density(project(1.0)) * pi, 1.0, 1e-15);
}

TEST(ClosedForm, EnergiesAgainstQuadrature) {
  // I = E log(1/|T x - T y|) for the uniform laws (W = 0): on the equator
  // circle chord = sin(phi/2), on the sphere chord^2 = (1 - cos gamma)/2.
  const double circle = oracle::integrate_singular([](double phi) { return -std::log(std::sin(phi / 2.0)) / pi; }, 0.0, pi);
  EXPECT_NEAR(*closed_form_energy(cauchy_model()), circle, 1e-10);
  const double sphere =
      oracle::integrate_singular([](double c) { return -0.25 * std::log((1.0 - c) / 2.0); }, -1.0, 1.0);
  EXPECT_NEAR(*closed_form_energy(spherical_model()), sphere, 1e-10);
}

TEST(Grid, CompactifiedRealGridIsEqualArc) {
  const auto g = make_grid(Support(SupportKind::RealLine), GridSpec{});
  ASSERT_EQ(g.size(), 400u);
  const double arc = 2.0 * (2.0 * std::atan(100.0)) / 400;
  for (const auto& c : g.cells) EXPECT_NEAR(2.0 * std::atan(c.a1) - 2.0 * std::atan(c.a0), arc, 1e-12);
  EXPECT_NEAR(g.cells.front().a0, -100.0, 1e-9);
  EXPECT_NEAR(g.cells.back().a1, 100.0, 1e-9);
}

TEST(Grid, CellRulesAverageCorrectly) {
  const GridCell rect{GridCell::Shape::Rectangle, 0.0, 2.0, 1.0, 2.0};
  const auto r = cell_rule(rect, 3);
  double mean = 0.0;
  for (std::size_t i = 0; i < r.nodes.size(); ++i) mean += r.weights[i] * std::norm(r.nodes[i]);
  EXPECT_NEAR(mean, 4.0 / 3.0 + 7.0 / 3.0, 1e-13);
  // Sphere-area rule on a sector: mean of x3 = |x|^2/(1+|x|^2) is the mid height.
  const GridCell sector{GridCell::Shape::Sector, 0.5, 2.0, 0.0, 1.0};
  const auto s = cell_rule(sector, 8);
  mean = 0.0;
  for (std::size_t i = 0; i < s.nodes.size(); ++i) mean += s.weights[i] * project(s.nodes[i]).x3();
  EXPECT_NEAR(mean, 0.5 * (0.2 + 0.8), 1e-13);
  EXPECT_THROW(cell_rule(rect, 5), Error);
}

TEST(Grid, RejectsBadSpecs) {
  GridSpec small;
  small.resolution = 8;
  EXPECT_THROW(make_grid(Support(SupportKind::RealLine), small), Error);
  EXPECT_THROW(make_grid(Support(SupportKind::UnitCircle), GridSpec{}), Error);
}

TEST(GridMinimize, CauchyMatchesClosedForm) {
  const auto& r = cauchy_result();
  EXPECT_TRUE(r.converged);
  EXPECT_LE(r.gap, 1e-4);
  EXPECT_NEAR(r.report.value, std::numbers::ln2, 0.05);
  EXPECT_LE(window_l1_distance(r, ClosedFormLaw::cauchy()), 0.05);
  ASSERT_TRUE(r.captured_mass.has_value());
  EXPECT_NEAR(*r.captured_mass, 1.0 - 2.0 * std::atan(1.0 / 100.0) / pi, 1e-12);
}

TEST(GridMinimize, PushforwardOfCauchyMinimizerIsUniformOnTheEquator) {
  const auto& r = cauchy_result();
  // Weighted KS of equator angles against uniform on (-pi, pi].
  std::vector<std::pair<double, double>> atoms;
  for (const auto& a : r.measure.atoms()) atoms.emplace_back(equator_angle(project(a.position)), a.weight);
  std::sort(atoms.begin(), atoms.end());
  double cum = 0.0, worst = 0.0;
  for (const auto& [angle, w] : atoms) {
    const double f = (angle + pi) / (2.0 * pi);
    worst = std::max({worst, std::abs(cum - f), std::abs(cum + w - f)});
    cum += w;
  }
  EXPECT_LE(worst, 0.05);
}

TEST(GridMinimize, QuadraticConcentratesOnTheSemicircleSupport) {
  const auto& r = quadratic_result();
  EXPECT_TRUE(r.converged);
  const double edge = std::sqrt(2.0) + 0.1;
  double inside = 0.0;
  for (const auto& a : r.measure.atoms())
    if (std::abs(a.position.real()) <= edge) inside += a.weight;
  EXPECT_GE(inside, 0.99);
}

TEST(GridMinimize, QuadraticSatisfiesEulerLagrange) {
  // U = 2 int log(1/|x-y|) dmu + x^2 is constant where mu charges and not
  // smaller off the support.
  const auto& r = quadratic_result();
  // Probes on cell boundaries, away from the atoms.
  std::vector<Complex> support, outside;
  for (const auto& c : r.grid.cells) {
    if (std::abs(c.a0) < 1.2) support.emplace_back(c.a0, 0.0);
    if (std::abs(c.a0) > 1.6) outside.emplace_back(c.a0, 0.0);
  }
  const auto u_in = el_residual(r.measure, quadratic_model(), support);
  const auto u_out = el_residual(r.measure, quadratic_model(), outside);
  const auto [lo, hi] = std::minmax_element(u_in.begin(), u_in.end());
  EXPECT_LE(*hi - *lo, 0.05);
  for (double u : u_out) EXPECT_GE(u, *lo - 0.05);
  // Semicircle on [-R, R]: int log|x-y| dmu = x^2/R^2 - 1/2 + log(R/2), so
  // with R = sqrt 2 the constant is 1 + log 2.
  EXPECT_NEAR(0.5 * (*hi + *lo), 1.0 + std::numbers::ln2, 0.05);
}

TEST(GridMinimize, EvenPotentialGivesSymmetricWeights) {
  const auto& r = cauchy_result();
  const auto w = r.measure.weights();
  const auto& grid = r.grid;
  ASSERT_EQ(r.measure.size(), grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) EXPECT_NEAR(w[i], w[grid.size() - 1 - i], 1e-9);
}

TEST(GridMinimize, UniqueAcrossInitialisations) {
  GridSpec g;
  g.resolution = 200;
  SolverOptions opt;
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u;
  std::vector<double> energies;
  for (int t = 0; t < 3; ++t) {
    opt.initial_weights.assign(g.resolution, 0.0);
    for (auto& w : opt.initial_weights) w = u(rng);
    energies.push_back(grid_minimize(cauchy_model(), g, opt).objective);
  }
  const auto [lo, hi] = std::minmax_element(energies.begin(), energies.end());
  EXPECT_LE(*hi - *lo, 2.0 * opt.tol);
}

TEST(GridMinimize, ObjectiveNonIncreasingAndGapNonNegative) {
  GridSpec g;
  g.resolution = 100;
  SolverOptions opt;
  opt.polish = false;
  opt.max_iter = 500;
  const auto r = grid_minimize(cauchy_model(), g, opt);
  EXPECT_GE(r.gap, 0.0);
  ASSERT_GT(r.objective_trace.size(), 2u);
  for (std::size_t k = 1; k < r.objective_trace.size(); ++k)
    EXPECT_LE(r.objective_trace[k], r.objective_trace[k - 1] + 1e-14) << k;
}

TEST(GridMinimize, ProjectedGradientAgreesWithFrankWolfe) {
  SolverOptions pg;
  pg.method = SolverMethod::ProjectedGradient;
  const auto a = grid_minimize(quadratic_model(), quadratic_grid(), pg);
  EXPECT_TRUE(a.converged);
  EXPECT_NEAR(a.objective, quadratic_result().objective, 1e-4);
}

TEST(GridMinimize, RejectsUnsupportedModels) {
  const GasModel circle(Support(SupportKind::UnitCircle), 2.0, PotentialSpec::spherical(), 1);
  EXPECT_THROW(grid_minimize(circle, GridSpec{}, SolverOptions{}), Error);
  const GasModel weak(Support(SupportKind::RealLine), 2.0,
                      PotentialSpec::custom("v", [](Complex x) { return std::norm(x); }), 1);
  try {
    grid_minimize(weak, GridSpec{}, SolverOptions{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InadmissibleModel);
  }
}

TEST(FeketeDescent, QuadraticPair) {
  const auto m = quadratic_model(2);
  const auto r = fekete_descent(m, Configuration(m, {-1.0, 1.0}), 0.0, 10000);
  const double a = oracle::grid_argmax([](double s) { return 2.0 * std::log(2.0 * s) - 4.0 * s * s; }, 0.01, 3.0);
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.config[0].real(), -a, 1e-6);
  EXPECT_NEAR(r.config[1].real(), a, 1e-6);
  EXPECT_NEAR(a, 0.5, 1e-7);
}

TEST(FeketeDescent, CauchyPair) {
  const auto m = cauchy_model(2);
  const auto r = fekete_descent(m, Configuration(m, {-2.0, 2.0}), 0.0, 10000);
  const double a =
      oracle::grid_argmax([](double s) { return 2.0 * std::log(2.0 * s) - 4.0 * std::log1p(s * s); }, 0.01, 5.0);
  EXPECT_LE(r.gradient_norm, 1e-8);
  EXPECT_NEAR(r.config[1].real(), a, 1e-6);
  EXPECT_NEAR(r.config[0].real(), -r.config[1].real(), 1e-9);
}

TEST(FeketeDescent, LogDensityNeverDecreases) {
  const auto m = spherical_model(12);
  std::vector<Complex> pts;
  for (int i = 0; i < 12; ++i) pts.push_back(std::polar(0.2 + 0.3 * i, 2.1 * i));
  const auto r = fekete_descent(m, Configuration(m, pts), 0.0, 300);
  for (std::size_t k = 1; k < r.log_density_trace.size(); ++k)
    EXPECT_GE(r.log_density_trace[k], r.log_density_trace[k - 1]);
}

TEST(FeketeDescent, FixedPointsBalanceForces) {
  const auto m = quadratic_model(6);
  const auto r = fekete_descent(m, Configuration(m, {-2.0, -1.0, -0.3, 0.2, 0.9, 1.7}), 0.0, 20000);
  ASSERT_TRUE(r.converged);
  for (std::size_t i = 0; i < 6; ++i) {
    double force = 0.0;
    for (std::size_t j = 0; j < 6; ++j)
      if (j != i) force += 2.0 / (r.config[i].real() - r.config[j].real());
    EXPECT_NEAR(force, 6.0 * 2.0 * r.config[i].real(), 1e-8);
  }
}

TEST(ElResidual, CauchyLawIsFlat) {
  const std::vector<Complex> probes{0.0, 1.0, 5.0, 20.0};
  for (double u : el_residual(ClosedFormLaw::cauchy(), cauchy_model(), probes)) EXPECT_NEAR(u, 0.0, 1e-6);
}

TEST(ElResidual, SphericalLawIsFlat) {
  const std::vector<Complex> probes{0.0, Complex(0.6, 0.8), Complex(0, 3)};
  const auto u = el_residual(ClosedFormLaw::spherical(), spherical_model(), probes);
  for (double v : u) EXPECT_NEAR(v, u[0], 1e-5);
  EXPECT_NEAR(u[0], 0.0, 1e-5);
}

TEST(ElResidual, SingularAtAnAtom) {
  const auto u = el_residual(PlaneMeasure({{0.5, 1.0}}), cauchy_model(), std::vector<Complex>{0.5});
  EXPECT_EQ(u[0], std::numeric_limits<double>::infinity());
}
