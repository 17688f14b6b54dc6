#pragma once

#include <numbers>
#include <span>
#include <string_view>

#include "coulomb/geometry.hpp"
#include "coulomb/model.hpp"

namespace coulomb {

enum class DiagonalPolicy { OffDiagonalOnly, RegularizedSelfEnergy };

std::string_view to_string(DiagonalPolicy policy);

/// Discrete image of the weighted energy. For atomic measures the true
/// energy is +inf; the policy records which surrogate produced `value`.
struct EnergyReport {
  double value;
  DiagonalPolicy diagonal_policy;
  std::size_t pair_count;
};

/// Separations below this are treated as coincident points.
inline constexpr double kCoincidenceThreshold = 1e-300;

/// Mean of log(1/|x-y|) over a unit interval squared is 3/2.
inline constexpr double kIntervalSelfLog = 1.5;
/// Mean of log(1/|x-y|) over a unit square squared: 25/12 - pi/3 - log(2)/3.
inline constexpr double kSquareSelfLog = 25.0 / 12.0 - std::numbers::pi / 3.0 - std::numbers::ln2 / 3.0;

/// Cell average of log(1/|x-y|) for an interval cell of the given length.
double interval_self_log(double length);
/// Same for a two-dimensional cell, using the square of equal area.
double square_self_log(double area);
/// Cell average of log(1/|x-y|) over an a-by-b rectangle.
double rectangle_self_log(double a, double b);

/// (beta/2) log(1/|x-y|) + V(x)/2 + V(y)/2; +inf when x = y.
double kernel_planar(Complex x, Complex y, const GasModel& model);

/// (beta/2) log(1/|z-w|) + W(z)/2 + W(w)/2 with W the compactified potential.
double kernel_sphere(const SpherePoint& z, const SpherePoint& w, const CompactifiedPotential& potential);
double kernel_sphere(const SpherePoint& z, const SpherePoint& w, const GasModel& model);

/// Sum over ordered pairs of distinct atoms of w_a w_b K(p_a, p_b).
EnergyReport measure_energy(const PlaneMeasure& mu, const GasModel& model);
EnergyReport measure_energy(const SphereMeasure& mu, const GasModel& model);

/// RegularizedSelfEnergy: adds w_a^2 ((beta/2) self_log[a] + V(p_a)) for each
/// atom, where self_log[a] is the cell average of log(1/|x-y|) of atom a.
EnergyReport measure_energy(const PlaneMeasure& mu, const GasModel& model, std::span<const double> self_log);
EnergyReport measure_energy(const SphereMeasure& mu, const GasModel& model, std::span<const double> self_log);

/// (1/N^2) sum_{i != j} F_V(x_i, x_j); throws CoincidentPoints.
double config_energy(const Configuration& config, const GasModel& model);

/// Unnormalised log-weight beta sum_{i<j} log|x_i - x_j| - N sum_i V(x_i);
/// -inf on coincident points.
double log_density(const Configuration& config, const GasModel& model);

/// The same log-weight written with z_i = T(x_i):
///   beta sum_{i<j} log|z_i - z_j| + (beta/2) sum_i log(1 - |z_i|^2) - N sum_i W(z_i).
double log_density_sphere(const Configuration& config, const GasModel& model);

/// Off-diagonal logarithmic energy of mu - nu. Both measures must list the
/// same positions in the same order (weights may be zero).
double signed_log_energy(const SphereMeasure& mu, const SphereMeasure& nu);
/// With the regularized diagonal (mu_a - nu_a)^2 self_log[a].
double signed_log_energy(const SphereMeasure& mu, const SphereMeasure& nu, std::span<const double> self_log);

}  // namespace coulomb
