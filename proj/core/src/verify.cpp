#include "coulomb/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>

#include "coulomb/energy.hpp"
#include "coulomb/geometry.hpp"
#include "coulomb/sampler.hpp"

namespace coulomb {

namespace {

constexpr double kPointTolerance = 1e-12;
constexpr double kAggregateTolerance = 1e-10;

double relative(double value, double reference) {
  if (value == reference) return 0.0;
  return std::abs(value - reference) / std::max(1.0, std::abs(reference));
}

class Inputs {
 public:
  explicit Inputs(std::uint64_t seed, std::uint64_t stream) : rng_(make_stream(seed, stream)) {}

  /// Modulus log-uniform on [1e-6, 1e6], with occasional exact zeros.
  Complex plane_point() {
    if (unit_(rng_) < 0.01) return 0.0;
    const double r = std::pow(10.0, -6.0 + 12.0 * unit_(rng_));
    return std::polar(r, 2.0 * std::numbers::pi * unit_(rng_));
  }
  Complex real_point() {
    const Complex z = plane_point();
    return {unit_(rng_) < 0.5 ? std::abs(z) : -std::abs(z), 0.0};
  }
  /// Moderate scale for many-particle inputs, where huge spreads would make
  /// every pair term dominated by one point.
  Complex moderate_point(bool real) {
    const double r = std::pow(10.0, -2.0 + 4.0 * unit_(rng_));
    if (real) return {unit_(rng_) < 0.5 ? r : -r, 0.0};
    return std::polar(r, 2.0 * std::numbers::pi * unit_(rng_));
  }
  double uniform() { return unit_(rng_); }

 private:
  std::mt19937_64 rng_;
  std::uniform_real_distribution<double> unit_;
};

std::vector<GasModel> models(std::size_t n) {
  PolyLogPotential weak{{0.25}, PolyVariable::AbsSquared, 0.75};
  return {GasModel(Support(SupportKind::RealLine), 2.0, PotentialSpec::cauchy(), n),
          GasModel(Support(SupportKind::ComplexPlane), 2.0, PotentialSpec::spherical(), n),
          GasModel(Support(SupportKind::RealLine), 2.0, PotentialSpec::quadratic(), n),
          GasModel(Support(SupportKind::ComplexPlane), 1.0,
                   PotentialSpec::poly_log("weak", weak, 1.5), n)};
}

struct Tracker {
  IdentityCheck check;
  void record(double deviation) {
    if (!(deviation <= check.max_deviation)) check.max_deviation = std::isnan(deviation) ? INFINITY : deviation;
    ++check.trials;
  }
  IdentityCheck finish() {
    check.passed = check.max_deviation <= check.tolerance;
    return check;
  }
};

Tracker tracker(std::string name, double tolerance) { return {{std::move(name), 0, 0.0, tolerance, false}}; }

}  // namespace

bool VerifyReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const IdentityCheck& c) { return c.passed; });
}

VerifyReport verify_identities(const VerifyOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  VerifyReport report;

  auto metric = tracker("metric", kPointTolerance);
  auto pole = tracker("pole", kPointTolerance);
  auto round_trip = tracker("round-trip", kPointTolerance);
  auto kernel = tracker("kernel-transport", kPointTolerance);
  {
    Inputs in(options.seed, 0);
    const auto gases = models(2);
    std::vector<CompactifiedPotential> compact;
    for (const auto& m : gases) compact.push_back(compactified_potential(m));
    for (std::size_t t = 0; t < options.pairs; ++t) {
      const std::size_t which = t % gases.size();
      const bool real = gases[which].support().kind() == SupportKind::RealLine;
      const Complex x = real ? in.real_point() : in.plane_point();
      Complex y = real ? in.real_point() : in.plane_point();
      if (y == x) y += 1.0;
      const auto zx = project(x), zy = project(y);

      metric.record(relative(chordal_distance(x, y), distance(zx, zy)));
      const double n = zx.norm();
      pole.record(relative(1.0 - n * n, 1.0 / (1.0 + std::norm(x))));
      const Complex back = unproject(zx);
      round_trip.record(std::abs(back - x) / std::max(1.0, std::abs(x)));
      kernel.record(relative(kernel_sphere(zx, zy, compact[which]), kernel_planar(x, y, gases[which])));
    }
  }

  auto density = tracker("density-transport", kAggregateTolerance);
  {
    Inputs in(options.seed, 1);
    const auto gases = models(options.particles);
    std::vector<Complex> pts(options.particles);
    for (std::size_t t = 0; t < options.configurations; ++t) {
      const auto& model = gases[t % gases.size()];
      const bool real = model.support().kind() == SupportKind::RealLine;
      for (auto& p : pts) p = in.moderate_point(real);
      const Configuration config(model, pts);
      const double planar = log_density(config, model);
      if (!std::isfinite(planar)) continue;
      density.record(relative(log_density_sphere(config, model), planar));
    }
  }

  auto energy = tracker("energy-transport", kAggregateTolerance);
  {
    Inputs in(options.seed, 2);
    const auto gases = models(1);
    for (std::size_t t = 0; t < options.measures; ++t) {
      const auto& model = gases[t % gases.size()];
      const bool real = model.support().kind() == SupportKind::RealLine;
      std::vector<Atom<Complex>> atoms(options.atoms);
      double total = 0.0;
      for (auto& a : atoms) {
        a.position = in.moderate_point(real);
        a.weight = 0.05 + in.uniform();
        total += a.weight;
      }
      for (auto& a : atoms) a.weight /= total;
      // Normalize the rounding residue into the first atom.
      double sum = 0.0;
      for (std::size_t i = 1; i < atoms.size(); ++i) sum += atoms[i].weight;
      atoms[0].weight = 1.0 - sum;
      const PlaneMeasure mu(std::move(atoms));
      const double planar = measure_energy(mu, model).value;
      energy.record(relative(measure_energy(pushforward(mu), model).value, planar));
    }
  }

  report.checks = {metric.finish(), pole.finish(),    round_trip.finish(),
                   kernel.finish(), density.finish(), energy.finish()};
  report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace coulomb
