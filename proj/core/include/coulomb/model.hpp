#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "coulomb/error.hpp"

namespace coulomb {

using Complex = std::complex<double>;

/// Tolerance on the imaginary part (or on |x| - 1 for the circle) used by the
/// support membership predicates.
inline constexpr double kMembershipTolerance = 1e-12;

enum class SupportKind { RealLine, ComplexPlane, HalfLine, UnitSegment, UnitCircle };

class Support {
 public:
  constexpr explicit Support(SupportKind kind) : kind_(kind) {}

  SupportKind kind() const { return kind_; }
  bool contains(Complex x) const;

  /// True for the supports embedded in the real axis.
  bool is_real() const;
  bool is_bounded() const;
  /// Only the real line and the complex plane are accepted by the equilibrium solvers.
  bool solver_supported() const {
    return kind_ == SupportKind::RealLine || kind_ == SupportKind::ComplexPlane;
  }

  std::string_view name() const;
  static Support from_name(std::string_view name);

  friend bool operator==(const Support&, const Support&) = default;

 private:
  SupportKind kind_;
};

enum class PolyVariable { X, AbsSquared };

/// V(x) = p(t) + c * log(1 + |x|^2), where t is either x itself (real
/// supports only) or |x|^2. Coefficients are in ascending degree.
struct PolyLogPotential {
  std::vector<double> coefficients;
  PolyVariable variable = PolyVariable::AbsSquared;
  double log_coeff = 0.0;

  double operator()(Complex x) const;
  /// dV/dRe x + i dV/dIm x.
  Complex gradient(Complex x) const;
  /// liminf of V(x) - (beta/2) log(1+|x|^2) as |x| -> infinity along the
  /// support; -inf when the potential is too weak.
  double limit_at_infinity(double beta, bool real_support) const;
};

/// A named potential with its evaluation rule and growth metadata.
class PotentialSpec {
 public:
  using Evaluator = std::function<double(Complex)>;

  /// log(1 + x^2) on the real line.
  static PotentialSpec cauchy();
  /// log(1 + |x|^2) on the complex plane.
  static PotentialSpec spherical();
  /// x^2 on the real line.
  static PotentialSpec quadratic();
  static PotentialSpec builtin(std::string_view name);

  static PotentialSpec poly_log(std::string name, PolyLogPotential form,
                                std::optional<double> beta_prime = std::nullopt,
                                std::optional<double> v_infinity = std::nullopt);
  /// Opaque potential. The gradient falls back to central differences and
  /// the value at infinity must be declared or estimated.
  static PotentialSpec custom(std::string name, Evaluator evaluate,
                              std::optional<double> beta_prime = std::nullopt,
                              std::optional<double> v_infinity = std::nullopt);

  const std::string& name() const { return name_; }
  double operator()(Complex x) const { return evaluate_(x); }
  Complex gradient(Complex x) const;

  std::optional<double> beta_prime() const { return beta_prime_; }
  std::optional<double> declared_v_infinity() const { return v_infinity_; }
  const std::optional<PolyLogPotential>& form() const { return form_; }
  bool is_builtin() const { return builtin_; }

  /// Closed-form value of V(x) - (beta/2)log(1+|x|^2) at infinity: the
  /// declared value when present, otherwise derived from the poly-log form.
  std::optional<double> v_infinity(double beta, bool real_support) const;

  PotentialSpec with_beta_prime(double beta_prime) const;

 private:
  PotentialSpec() = default;

  std::string name_;
  Evaluator evaluate_;
  std::optional<PolyLogPotential> form_;
  std::optional<double> beta_prime_;
  std::optional<double> v_infinity_;
  bool builtin_ = false;
};

class GasModel {
 public:
  GasModel(Support support, double beta, PotentialSpec potential, std::size_t n);

  const Support& support() const { return support_; }
  double beta() const { return beta_; }
  const PotentialSpec& potential() const { return potential_; }
  std::size_t n() const { return n_; }

  /// beta' is declared with beta' > 1 and beta' >= beta (always true on
  /// bounded supports, where no growth condition is needed).
  bool weakly_admissible() const { return weakly_admissible_; }

  GasModel with_n(std::size_t n) const { return GasModel(support_, beta_, potential_, n); }

 private:
  Support support_;
  double beta_;
  PotentialSpec potential_;
  std::size_t n_;
  bool weakly_admissible_;
};

class Configuration {
 public:
  /// Validates length against model.n() and membership in the support.
  Configuration(const GasModel& model, std::vector<Complex> points);
  /// Membership-only validation.
  Configuration(const Support& support, std::vector<Complex> points);

  std::span<const Complex> points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  Complex operator[](std::size_t i) const { return points_[i]; }

  friend bool operator==(const Configuration&, const Configuration&) = default;

 private:
  std::vector<Complex> points_;
};

template <class Point>
struct Atom {
  Point position;
  double weight;
};

template <class Point>
struct PointLess;

template <>
struct PointLess<Complex> {
  bool operator()(const Complex& a, const Complex& b) const {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  }
};

/// Finitely many weighted atoms with pairwise-distinct positions and unit
/// total mass. Duplicate positions are merged (weights summed) in order of
/// first appearance.
template <class Point>
class DiscreteMeasure {
 public:
  explicit DiscreteMeasure(std::vector<Atom<Point>> atoms);

  static DiscreteMeasure from_weights(std::span<const Point> positions,
                                      std::span<const double> weights);

  std::span<const Atom<Point>> atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }
  const Atom<Point>& operator[](std::size_t i) const { return atoms_[i]; }
  std::vector<Point> positions() const;
  std::vector<double> weights() const;

  friend bool operator==(const DiscreteMeasure& a, const DiscreteMeasure& b) {
    if (a.atoms_.size() != b.atoms_.size()) return false;
    for (std::size_t i = 0; i < a.atoms_.size(); ++i) {
      if (a.atoms_[i].position != b.atoms_[i].position ||
          a.atoms_[i].weight != b.atoms_[i].weight)
        return false;
    }
    return true;
  }

 private:
  std::vector<Atom<Point>> atoms_;
};

inline constexpr double kMassTolerance = 1e-12;

template <class Point>
DiscreteMeasure<Point>::DiscreteMeasure(std::vector<Atom<Point>> atoms) {
  std::map<Point, std::size_t, PointLess<Point>> index;
  // Neumaier summation of the total mass.
  double sum = 0.0, carry = 0.0;
  for (auto& atom : atoms) {
    if (!(atom.weight >= 0.0) || !std::isfinite(atom.weight))
      throw Error(ErrorCode::InvalidArgument, "atom weights must be finite and nonnegative");
    const double t = sum + atom.weight;
    carry += std::abs(sum) >= std::abs(atom.weight) ? (sum - t) + atom.weight
                                                    : (atom.weight - t) + sum;
    sum = t;
    auto [it, inserted] = index.try_emplace(atom.position, atoms_.size());
    if (inserted)
      atoms_.push_back(atom);
    else
      atoms_[it->second].weight += atom.weight;
  }
  if (atoms_.empty()) throw Error(ErrorCode::InvalidArgument, "measure has no atoms");
  if (std::abs(sum + carry - 1.0) > kMassTolerance)
    throw Error(ErrorCode::InvalidArgument,
                "atom weights sum to " + std::to_string(sum + carry) + ", expected 1");
}

template <class Point>
DiscreteMeasure<Point> DiscreteMeasure<Point>::from_weights(std::span<const Point> positions,
                                                            std::span<const double> weights) {
  if (positions.size() != weights.size())
    throw Error(ErrorCode::InvalidArgument, "positions and weights differ in length");
  std::vector<Atom<Point>> atoms;
  atoms.reserve(positions.size());
  for (std::size_t i = 0; i < positions.size(); ++i) atoms.push_back({positions[i], weights[i]});
  return DiscreteMeasure(std::move(atoms));
}

template <class Point>
std::vector<Point> DiscreteMeasure<Point>::positions() const {
  std::vector<Point> out;
  out.reserve(atoms_.size());
  for (const auto& a : atoms_) out.push_back(a.position);
  return out;
}

template <class Point>
std::vector<double> DiscreteMeasure<Point>::weights() const {
  std::vector<double> out;
  out.reserve(atoms_.size());
  for (const auto& a : atoms_) out.push_back(a.weight);
  return out;
}

using PlaneMeasure = DiscreteMeasure<Complex>;

/// Mass (multiplicity)/N at each distinct point of the configuration.
PlaneMeasure empirical_measure(const Configuration& config);

enum class Growth { Strong, WeakOnly, Inadmissible };

std::string_view to_string(Growth growth);

struct GrowthProbe {
  double radius;
  Complex point;
  double value;   ///< V(x)
  double ratio;   ///< V(x) / (beta' log|x|)
  double excess;  ///< V(x) - beta' log|x|
};

struct Admissibility {
  Growth growth;
  double beta_prime;
  /// Per dyadic radius, the probe along the worst ray.
  std::vector<GrowthProbe> probes;
  std::string note;
};

/// Probe-grid classification of the growth conditions over radii 2^4..2^40.
///
/// Strong when the smallest ratio V/(beta' log|x|) exceeds 1 by more than
/// kStrongMargin; Inadmissible when V - beta' log|x| decreases over the last
/// eight scales, ends below kInadmissibleFloor, and drops on average by at
/// least kInadmissibleSlope per octave; WeakOnly otherwise. This is a
/// heuristic: a liminf cannot be decided from finitely many samples.
Admissibility admissibility_check(const GasModel& model);

inline constexpr int kProbeFirstScale = 4;
inline constexpr int kProbeLastScale = 40;
inline constexpr double kStrongMargin = 1e-9;
inline constexpr double kInadmissibleFloor = -20.0;
inline constexpr double kInadmissibleSlope = 0.1;

/// Unit directions along which growth probes are taken for this support.
std::vector<Complex> probe_rays(const Support& support);

}  // namespace coulomb
