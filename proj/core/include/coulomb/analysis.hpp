#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "coulomb/energy.hpp"
#include "coulomb/equilibrium.hpp"
#include "coulomb/sampler.hpp"

namespace coulomb {

struct FitReport {
  double statistic;
  std::size_t sample_size;
  std::string reference;
};

using Cdf = std::function<double(double)>;

/// Kolmogorov-Smirnov statistic sup_i max(|i/n - F(x_(i))|, |(i-1)/n - F(x_(i))|).
/// Throws EmptySample.
FitReport ks_distance(std::span<const double> samples, const Cdf& cdf, std::string reference = "custom");
FitReport ks_distance(std::span<const double> samples, const ClosedFormLaw& law);

/// KS statistic of the moduli |x_k| against a radial CDF.
FitReport radial_cdf_distance(std::span<const Complex> samples, const Cdf& radial_cdf,
                              std::string reference = "custom");
FitReport radial_cdf_distance(std::span<const Complex> samples, const ClosedFormLaw& law);

/// KS statistic of arg x_k in [0, 2 pi) against the uniform law.
FitReport angular_distance(std::span<const Complex> samples);

/// KS statistic of the equator angles of T(x_k) against the uniform law on
/// (-pi, pi]; for real samples this is the push-forward check.
FitReport equator_angle_distance(std::span<const Complex> samples);

/// KS statistic of the heights x3 of T(x_k) against the uniform law on [0, 1].
FitReport sphere_height_distance(std::span<const Complex> samples);

/// All particle positions of all samples, in (chain, sweep, particle) order.
std::vector<Complex> pool(std::span<const ChainResult> chains);
std::vector<Complex> pool(std::span<const Configuration> configs);
std::vector<double> real_parts(std::span<const Complex> points);

struct RateGap {
  double value;
  double energy;
  double reference_energy;
  /// "closed-form" or "supplied".
  std::string reference;
  DiagonalPolicy diagonal_policy;
};

/// measure_energy(mu) minus the minimal energy: the closed-form value when
/// the model has one, else `reference_energy` (typically a converged grid
/// minimizer's report value). With self_log the regularized energy is used.
/// Throws NoReference when neither is available.
RateGap rate_gap(const PlaneMeasure& mu, const GasModel& model, std::optional<double> reference_energy = std::nullopt,
                 std::span<const double> self_log = {});

double median(std::vector<double> values);

}  // namespace coulomb
