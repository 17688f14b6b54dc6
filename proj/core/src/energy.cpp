#include "coulomb/energy.hpp"

#include <atomic>
#include <cmath>
#include <limits>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "coulomb/numerics.hpp"

namespace coulomb {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// log(1/d) with the coincidence convention.
double log_inverse(double d) { return d < kCoincidenceThreshold ? kInf : -std::log(d); }

template <class Point, class Distance>
EnergyReport pair_energy(std::span<const Atom<Point>> atoms, double beta, std::span<const double> potential,
                         Distance&& dist, std::span<const double> self_log) {
  const std::size_t n = atoms.size();
  const bool regularized = !self_log.empty();
  if (regularized && self_log.size() != n)
    throw Error(ErrorCode::InvalidArgument, "self-energy list does not match the atom count");
  const double half_beta = 0.5 * beta;
  const double value = block_sum(n, [&](std::size_t i) {
    CompensatedSum row;
    for (std::size_t j = 0; j < n; ++j) {
      double k;
      if (j == i) {
        if (!regularized) continue;
        k = half_beta * self_log[i] + potential[i];
      } else {
        k = half_beta * log_inverse(dist(atoms[i].position, atoms[j].position)) +
            0.5 * (potential[i] + potential[j]);
      }
      // Zero-weight atoms contribute nothing, even against a singular kernel.
      if (atoms[j].weight != 0.0) row.add(atoms[j].weight * k);
    }
    return atoms[i].weight == 0.0 ? 0.0 : atoms[i].weight * row.value();
  });
  return {value, regularized ? DiagonalPolicy::RegularizedSelfEnergy : DiagonalPolicy::OffDiagonalOnly,
          regularized ? n * n : n * (n - 1)};
}

EnergyReport plane_energy(const PlaneMeasure& mu, const GasModel& model, std::span<const double> self_log) {
  std::vector<double> v;
  v.reserve(mu.size());
  for (const auto& a : mu.atoms()) v.push_back(model.potential()(a.position));
  return pair_energy(mu.atoms(), model.beta(), v, [](Complex x, Complex y) { return std::abs(x - y); },
                     self_log);
}

EnergyReport sphere_energy(const SphereMeasure& mu, const GasModel& model, std::span<const double> self_log) {
  const auto w = compactified_potential(model);
  std::vector<double> v;
  v.reserve(mu.size());
  for (const auto& a : mu.atoms()) v.push_back(w(a.position));
  return pair_energy(mu.atoms(), model.beta(), v,
                     [](const SpherePoint& z, const SpherePoint& u) { return distance(z, u); }, self_log);
}

std::vector<double> signed_weights(const SphereMeasure& mu, const SphereMeasure& nu) {
  if (mu.size() != nu.size())
    throw Error(ErrorCode::MismatchedSupports, "measures have different atom counts");
  std::vector<double> s(mu.size());
  for (std::size_t a = 0; a < mu.size(); ++a) {
    if (!(mu[a].position == nu[a].position))
      throw Error(ErrorCode::MismatchedSupports, "atom " + std::to_string(a) + " differs between measures");
    s[a] = mu[a].weight - nu[a].weight;
  }
  return s;
}

double signed_energy(const SphereMeasure& mu, std::span<const double> s, std::span<const double> self_log) {
  const std::size_t n = s.size();
  return block_sum(n, [&](std::size_t a) {
    if (s[a] == 0.0) return 0.0;
    CompensatedSum row;
    for (std::size_t b = 0; b < n; ++b) {
      if (s[b] == 0.0) continue;
      if (b == a) {
        if (!self_log.empty()) row.add(s[b] * self_log[a]);
        continue;
      }
      row.add(s[b] * log_inverse(distance(mu[a].position, mu[b].position)));
    }
    return s[a] * row.value();
  });
}

}  // namespace

std::string_view to_string(DiagonalPolicy policy) {
  return policy == DiagonalPolicy::OffDiagonalOnly ? "OffDiagonalOnly" : "RegularizedSelfEnergy";
}

double interval_self_log(double length) {
  if (!(length > 0.0)) throw Error(ErrorCode::InvalidArgument, "cell length must be positive");
  return -std::log(length) + kIntervalSelfLog;
}

double square_self_log(double area) {
  if (!(area > 0.0)) throw Error(ErrorCode::InvalidArgument, "cell area must be positive");
  return -0.5 * std::log(area) + kSquareSelfLog;
}

double rectangle_self_log(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw Error(ErrorCode::InvalidArgument, "rectangle sides must be positive");
  // Scale to the unit-area rectangle, then integrate the difference density
  // (a-u)(b-v) against log(u^2+v^2); the v-integral is closed form.
  const double scale = std::sqrt(a * b);
  const double p = a / scale, q = b / scale;
  auto inner = [q](double u) {
    const double l = std::log(u * u + q * q);
    const double t1 = q * (q * l - 2.0 * q + 2.0 * u * std::atan2(q, u));
    const double t2 = 0.5 * (u * u + q * q) * l - 0.5 * q * q - (u > 0.0 ? u * u * std::log(u) : 0.0);
    return t1 - t2;
  };
  boost::math::quadrature::tanh_sinh<double> quad;
  const double integral = quad.integrate([&](double u) { return (p - u) * inner(u); }, 0.0, p);
  return -std::log(scale) - 2.0 * integral / (p * p * q * q);
}

double kernel_planar(Complex x, Complex y, const GasModel& model) {
  const double d = std::abs(x - y);
  if (d < kCoincidenceThreshold) return kInf;
  const auto& v = model.potential();
  return 0.5 * model.beta() * log_inverse(d) + 0.5 * (v(x) + v(y));
}

double kernel_sphere(const SpherePoint& z, const SpherePoint& w, const CompactifiedPotential& potential) {
  const double d = distance(z, w);
  if (d < kCoincidenceThreshold) return kInf;
  return 0.5 * potential.beta() * log_inverse(d) + 0.5 * (potential(z) + potential(w));
}

double kernel_sphere(const SpherePoint& z, const SpherePoint& w, const GasModel& model) {
  return kernel_sphere(z, w, compactified_potential(model));
}

EnergyReport measure_energy(const PlaneMeasure& mu, const GasModel& model) { return plane_energy(mu, model, {}); }

EnergyReport measure_energy(const SphereMeasure& mu, const GasModel& model) {
  return sphere_energy(mu, model, {});
}

EnergyReport measure_energy(const PlaneMeasure& mu, const GasModel& model, std::span<const double> self_log) {
  if (self_log.empty()) throw Error(ErrorCode::InvalidArgument, "regularized energy needs self-energies");
  return plane_energy(mu, model, self_log);
}

EnergyReport measure_energy(const SphereMeasure& mu, const GasModel& model, std::span<const double> self_log) {
  if (self_log.empty()) throw Error(ErrorCode::InvalidArgument, "regularized energy needs self-energies");
  return sphere_energy(mu, model, self_log);
}

double config_energy(const Configuration& config, const GasModel& model) {
  const auto x = config.points();
  const std::size_t n = x.size();
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = model.potential()(x[i]);
  const double half_beta = 0.5 * model.beta();
  std::atomic<bool> coincident{false};
  const double total = block_sum(n, [&](std::size_t i) {
    CompensatedSum row;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const double d = std::abs(x[i] - x[j]);
      if (d < kCoincidenceThreshold) {
        coincident = true;
        return kInf;
      }
      row.add(half_beta * -std::log(d) + 0.5 * (v[i] + v[j]));
    }
    return row.value();
  });
  if (coincident) throw Error(ErrorCode::CoincidentPoints, "configuration has coincident points");
  const auto nn = static_cast<double>(n);
  return total / (nn * nn);
}

double log_density(const Configuration& config, const GasModel& model) {
  const auto x = config.points();
  const std::size_t n = x.size();
  const double interaction = block_sum(n, [&](std::size_t i) {
    CompensatedSum row;
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = std::abs(x[i] - x[j]);
      if (d < kCoincidenceThreshold) return -kInf;
      row.add(std::log(d));
    }
    return row.value();
  });
  if (interaction == -kInf) return -kInf;
  CompensatedSum confinement;
  for (const auto& xi : x) confinement.add(model.potential()(xi));
  return model.beta() * interaction - static_cast<double>(n) * confinement.value();
}

double log_density_sphere(const Configuration& config, const GasModel& model) {
  const auto w = compactified_potential(model);
  const std::size_t n = config.size();
  std::vector<SpherePoint> z;
  z.reserve(n);
  for (const auto& xi : config.points()) z.push_back(project(xi));
  const double interaction = block_sum(n, [&](std::size_t i) {
    CompensatedSum row;
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = distance(z[i], z[j]);
      if (d < kCoincidenceThreshold) return -kInf;
      row.add(std::log(d));
    }
    return row.value();
  });
  if (interaction == -kInf) return -kInf;
  CompensatedSum jacobian, confinement;
  for (const auto& zi : z) {
    const double r = zi.norm();
    jacobian.add(std::log(1.0 - r * r));
    confinement.add(w(zi));
  }
  const double beta = model.beta();
  return beta * interaction + 0.5 * beta * jacobian.value() - static_cast<double>(n) * confinement.value();
}

double signed_log_energy(const SphereMeasure& mu, const SphereMeasure& nu) {
  const auto s = signed_weights(mu, nu);
  return signed_energy(mu, s, {});
}

double signed_log_energy(const SphereMeasure& mu, const SphereMeasure& nu, std::span<const double> self_log) {
  const auto s = signed_weights(mu, nu);
  if (self_log.size() != s.size())
    throw Error(ErrorCode::InvalidArgument, "self-energy list does not match the atom count");
  return signed_energy(mu, s, self_log);
}

}  // namespace coulomb
