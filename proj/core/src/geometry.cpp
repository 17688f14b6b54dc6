#include "coulomb/geometry.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace coulomb {

SpherePoint SpherePoint::from_coordinates(double x1, double x2, double x3) {
  if (x1 == 0.0 && x2 == 0.0 && x3 == 1.0) return north_pole();
  const double residual = x1 * x1 + x2 * x2 + (x3 - 0.5) * (x3 - 0.5) - 0.25;
  if (!(std::abs(residual) <= kSphereTolerance))
    throw Error(ErrorCode::InvalidArgument, "coordinates do not lie on the Riemann sphere");
  return SpherePoint(x1, x2, x3, false);
}

SpherePoint SpherePoint::north_pole() { return SpherePoint(0.0, 0.0, 1.0, true); }

double SpherePoint::norm() const { return std::sqrt(x1_ * x1_ + x2_ * x2_ + x3_ * x3_); }

SpherePoint project(Complex x) {
  if (!std::isfinite(x.real()) || !std::isfinite(x.imag()))
    throw Error(ErrorCode::InvalidArgument, "cannot project a non-finite point");
  const double r = std::abs(x);
  if (r > kFarField) {
    const Complex unit = x / r;
    const double t = 1.0 / r;
    const double s = 1.0 / (1.0 + t * t);
    return SpherePoint(unit.real() * t * s, unit.imag() * t * s, s, false);
  }
  const double denom = 1.0 + r * r;
  return SpherePoint(x.real() / denom, x.imag() / denom, (r * r) / denom, false);
}

Complex unproject(const SpherePoint& z) {
  if (z.is_pole()) throw Error(ErrorCode::PoleNotInvertible, "the north pole has no finite preimage");
  const Complex w(z.x1(), z.x2());
  // x3 / (1 - x3) = |x|^2, so x = w / (1 - x3) = x3 / conj(w); the second
  // form avoids the cancellation in 1 - x3 near the pole.
  if (z.x3() > 0.5) return z.x3() / std::conj(w);
  return w / (1.0 - z.x3());
}

double chordal_distance(Complex x, Complex y) {
  const double d = std::abs(x - y);
  if (d == 0.0) return 0.0;
  const double ax = std::abs(x), ay = std::abs(y);
  const double result = d / (std::sqrt(1.0 + ax * ax) * std::sqrt(1.0 + ay * ay));
  if (std::isfinite(result)) return std::min(result, 1.0);
  // Both moduli overflow when squared: rescale by 1/|x| and 1/|y|.
  const double sx = ax > 1.0 ? std::sqrt(1.0 / (ax * ax) + 1.0) * ax : std::sqrt(1.0 + ax * ax);
  const double sy = ay > 1.0 ? std::sqrt(1.0 / (ay * ay) + 1.0) * ay : std::sqrt(1.0 + ay * ay);
  return std::min((d / sx) / sy, 1.0);
}

double distance(const SpherePoint& z, const SpherePoint& w) {
  const auto a = z.coordinates();
  const auto b = w.coordinates();
  return std::hypot(a[0] - b[0], a[1] - b[1], a[2] - b[2]);
}

double equator_angle(const SpherePoint& z) {
  if (z.is_pole()) return std::numbers::pi;
  return std::atan2(z.x1(), 0.5 - z.x3());
}

double longitude(const SpherePoint& z) {
  const double phi = std::atan2(z.x2(), z.x1());
  return phi < 0.0 ? phi + 2.0 * std::numbers::pi : phi;
}

SphereMeasure pushforward(const PlaneMeasure& mu) {
  std::vector<Atom<SpherePoint>> atoms;
  atoms.reserve(mu.size());
  for (const auto& atom : mu.atoms()) atoms.push_back({project(atom.position), atom.weight});
  return SphereMeasure(std::move(atoms));
}

double CompactifiedPotential::at_plane(Complex x) const {
  const double v = potential_(x);
  if (v == std::numeric_limits<double>::infinity()) return v;
  return v - 0.5 * beta_ * std::log1p(std::norm(x));
}

double CompactifiedPotential::operator()(const SpherePoint& z) const {
  if (z.is_pole()) return at_infinity_;
  return at_plane(unproject(z));
}

CompactifiedPotential compactified_potential(const GasModel& model) {
  if (!model.weakly_admissible())
    throw Error(ErrorCode::InadmissibleModel,
                "no declared growth exponent beta' > 1 with beta' >= beta for '" +
                    model.potential().name() + "'");
  constexpr double kInf = std::numeric_limits<double>::infinity();
  if (model.support().is_bounded())
    return CompactifiedPotential(model.potential(), model.beta(), kInf, false);

  const auto exact = model.potential().v_infinity(model.beta(), model.support().is_real());
  if (exact) {
    if (*exact == -kInf)
      throw Error(ErrorCode::InadmissibleModel, "compactified potential is -inf at infinity");
    return CompactifiedPotential(model.potential(), model.beta(), *exact, false);
  }

  // Probe estimate: infimum over the two largest dyadic scales.
  double estimate = kInf;
  for (int k = kProbeLastScale - 1; k <= kProbeLastScale; ++k) {
    const double r = std::ldexp(1.0, k);
    for (const auto& ray : probe_rays(model.support())) {
      const Complex x = r * ray;
      estimate = std::min(estimate, model.potential()(x) - 0.5 * model.beta() * std::log1p(r * r));
    }
  }
  return CompactifiedPotential(model.potential(), model.beta(), estimate, true);
}

}  // namespace coulomb
