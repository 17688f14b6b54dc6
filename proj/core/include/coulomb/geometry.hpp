#pragma once

#include <array>
#include <compare>

#include "coulomb/model.hpp"

namespace coulomb {

/// Point of the Riemann sphere of radius 1/2 centred at (0, 0, 1/2). The
/// north pole is a distinct state, never the image of a finite point.
class SpherePoint {
 public:
  /// Validates the sphere equation within kSphereTolerance. The exact
  /// coordinates (0, 0, 1) produce the north pole.
  static SpherePoint from_coordinates(double x1, double x2, double x3);
  static SpherePoint north_pole();

  bool is_pole() const { return pole_; }
  double x1() const { return x1_; }
  double x2() const { return x2_; }
  double x3() const { return x3_; }
  std::array<double, 3> coordinates() const { return {x1_, x2_, x3_}; }
  /// Euclidean norm of the point seen from the origin of R^3.
  double norm() const;

  friend bool operator==(const SpherePoint&, const SpherePoint&) = default;

 private:
  friend SpherePoint project(Complex x);
  SpherePoint(double x1, double x2, double x3, bool pole) : x1_(x1), x2_(x2), x3_(x3), pole_(pole) {}

  double x1_;
  double x2_;
  double x3_;
  bool pole_;
};

inline constexpr double kSphereTolerance = 1e-12;
/// Beyond this modulus project() switches to the 1/|x| form.
inline constexpr double kFarField = 1e8;

template <>
struct PointLess<SpherePoint> {
  bool operator()(const SpherePoint& a, const SpherePoint& b) const {
    if (a.is_pole() != b.is_pole()) return b.is_pole();
    return a.coordinates() < b.coordinates();
  }
};

using SphereMeasure = DiscreteMeasure<SpherePoint>;

/// Inverse stereographic projection (Re x, Im x, |x|^2) / (1 + |x|^2).
SpherePoint project(Complex x);

/// Inverse of project; throws PoleNotInvertible at the north pole.
Complex unproject(const SpherePoint& z);

/// |x - y| / (sqrt(1+|x|^2) sqrt(1+|y|^2)), the R^3 distance of the images.
double chordal_distance(Complex x, Complex y);

/// Euclidean R^3 distance between sphere points.
double distance(const SpherePoint& z, const SpherePoint& w);

/// Angle of a point on the great circle {x2 = 0}, measured from the south
/// pole, in (-pi, pi]. For x real, equator_angle(project(x)) = 2 atan(x).
double equator_angle(const SpherePoint& z);

/// Longitude and height of a sphere point, used for uniformity checks.
double longitude(const SpherePoint& z);

/// Atom-wise image of a planar measure; weights are carried unchanged.
SphereMeasure pushforward(const PlaneMeasure& mu);

/// The potential transported to the sphere:
///   W(T x) = V(x) - (beta/2) log(1 + |x|^2), W(infinity) = liminf at infinity.
class CompactifiedPotential {
 public:
  double operator()(const SpherePoint& z) const;
  /// W(T x) evaluated from the planar point directly.
  double at_plane(Complex x) const;
  double at_infinity() const { return at_infinity_; }
  /// True when the value at infinity is a probe estimate rather than exact.
  bool infinity_is_approximate() const { return approximate_; }
  double beta() const { return beta_; }

 private:
  friend CompactifiedPotential compactified_potential(const GasModel& model);
  CompactifiedPotential(PotentialSpec potential, double beta, double at_infinity, bool approximate)
      : potential_(std::move(potential)), beta_(beta), at_infinity_(at_infinity), approximate_(approximate) {}

  PotentialSpec potential_;
  double beta_;
  double at_infinity_;
  bool approximate_;
};

/// Throws InadmissibleModel when the weak-growth flag is unset or the value
/// at infinity is -inf.
CompactifiedPotential compactified_potential(const GasModel& model);

}  // namespace coulomb
