#include "coulomb/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace coulomb {

FitReport ks_distance(std::span<const double> samples, const Cdf& cdf, std::string reference) {
  if (samples.empty()) throw Error(ErrorCode::EmptySample, "no samples to test");
  std::vector<double> x(samples.begin(), samples.end());
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = cdf(x[i]);
    d = std::max({d, std::abs(static_cast<double>(i + 1) / n - f), std::abs(static_cast<double>(i) / n - f)});
  }
  return {d, x.size(), std::move(reference)};
}

FitReport ks_distance(std::span<const double> samples, const ClosedFormLaw& law) {
  return ks_distance(samples, [&law](double t) { return law.cdf(t); }, std::string(to_string(law.name())));
}

FitReport radial_cdf_distance(std::span<const Complex> samples, const Cdf& radial_cdf, std::string reference) {
  std::vector<double> r;
  r.reserve(samples.size());
  for (const auto& z : samples) r.push_back(std::abs(z));
  return ks_distance(r, radial_cdf, std::move(reference));
}

FitReport radial_cdf_distance(std::span<const Complex> samples, const ClosedFormLaw& law) {
  if (law.name() != LawName::SphericalLaw)
    throw Error(ErrorCode::InvalidArgument, "radial distance needs a rotation-invariant planar law");
  return radial_cdf_distance(samples, [&law](double t) { return law.cdf(t); }, std::string(to_string(law.name())));
}

FitReport angular_distance(std::span<const Complex> samples) {
  using std::numbers::pi;
  std::vector<double> a;
  a.reserve(samples.size());
  for (const auto& z : samples) {
    const double t = std::arg(z);
    a.push_back(t < 0.0 ? t + 2.0 * pi : t);
  }
  return ks_distance(a, [](double t) { return std::clamp(t / (2.0 * pi), 0.0, 1.0); }, "angle-uniform");
}

FitReport equator_angle_distance(std::span<const Complex> samples) {
  std::vector<double> a;
  a.reserve(samples.size());
  for (const auto& z : samples) a.push_back(equator_angle(project(z)));
  const auto law = ClosedFormLaw::circle_uniform();
  return ks_distance(a, [&law](double t) { return law.cdf(t); }, std::string(to_string(law.name())));
}

FitReport sphere_height_distance(std::span<const Complex> samples) {
  std::vector<double> h;
  h.reserve(samples.size());
  for (const auto& z : samples) h.push_back(project(z).x3());
  const auto law = ClosedFormLaw::sphere_uniform();
  return ks_distance(h, [&law](double t) { return law.cdf(t); }, std::string(to_string(law.name())));
}

std::vector<Complex> pool(std::span<const ChainResult> chains) {
  std::vector<Complex> out;
  for (const auto& c : chains) {
    const auto part = pool(c.samples);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

std::vector<Complex> pool(std::span<const Configuration> configs) {
  std::vector<Complex> out;
  for (const auto& c : configs) out.insert(out.end(), c.points().begin(), c.points().end());
  return out;
}

std::vector<double> real_parts(std::span<const Complex> points) {
  std::vector<double> out;
  out.reserve(points.size());
  for (const auto& z : points) out.push_back(z.real());
  return out;
}

RateGap rate_gap(const PlaneMeasure& mu, const GasModel& model, std::optional<double> reference_energy,
                 std::span<const double> self_log) {
  std::string source;
  double reference;
  if (const auto exact = closed_form_energy(model)) {
    reference = *exact;
    source = "closed-form";
  } else if (reference_energy) {
    reference = *reference_energy;
    source = "supplied";
  } else {
    throw Error(ErrorCode::NoReference,
                "no closed-form minimal energy for '" + model.potential().name() + "' and no reference supplied");
  }
  const auto report = self_log.empty() ? measure_energy(mu, model) : measure_energy(mu, model, self_log);
  return {report.value - reference, report.value, reference, source, report.diagonal_policy};
}

double median(std::vector<double> values) {
  if (values.empty()) throw Error(ErrorCode::EmptySample, "median of nothing");
  const auto mid = values.begin() + static_cast<std::ptrdiff_t>(values.size() / 2);
  std::nth_element(values.begin(), mid, values.end());
  if (values.size() % 2 == 1) return *mid;
  const double upper = *mid;
  const double lower = *std::max_element(values.begin(), mid);
  return 0.5 * (lower + upper);
}

}  // namespace coulomb
