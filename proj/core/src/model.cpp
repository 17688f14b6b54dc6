#include "coulomb/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace coulomb {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double horner(std::span<const double> coefficients, double t) {
  double acc = 0.0;
  for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) acc = acc * t + *it;
  return acc;
}

double horner_derivative(std::span<const double> coefficients, double t) {
  double acc = 0.0;
  for (std::size_t k = coefficients.size(); k-- > 1;) acc = acc * t + static_cast<double>(k) * coefficients[k];
  return acc;
}

}  // namespace

bool Support::contains(Complex x) const {
  if (!std::isfinite(x.real()) || !std::isfinite(x.imag())) return false;
  const bool on_axis = std::abs(x.imag()) <= kMembershipTolerance;
  switch (kind_) {
    case SupportKind::RealLine: return on_axis;
    case SupportKind::ComplexPlane: return true;
    case SupportKind::HalfLine: return on_axis && x.real() >= 0.0;
    case SupportKind::UnitSegment: return on_axis && x.real() >= 0.0 && x.real() <= 1.0;
    case SupportKind::UnitCircle: return std::abs(std::abs(x) - 1.0) <= kMembershipTolerance;
  }
  return false;
}

bool Support::is_real() const {
  return kind_ == SupportKind::RealLine || kind_ == SupportKind::HalfLine ||
         kind_ == SupportKind::UnitSegment;
}

bool Support::is_bounded() const {
  return kind_ == SupportKind::UnitSegment || kind_ == SupportKind::UnitCircle;
}

std::string_view Support::name() const {
  switch (kind_) {
    case SupportKind::RealLine: return "real";
    case SupportKind::ComplexPlane: return "complex";
    case SupportKind::HalfLine: return "half-line";
    case SupportKind::UnitSegment: return "unit-segment";
    case SupportKind::UnitCircle: return "unit-circle";
  }
  return "unknown";
}

Support Support::from_name(std::string_view name) {
  for (auto kind : {SupportKind::RealLine, SupportKind::ComplexPlane, SupportKind::HalfLine,
                    SupportKind::UnitSegment, SupportKind::UnitCircle}) {
    if (Support(kind).name() == name) return Support(kind);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown support '" + std::string(name) + "'");
}

double PolyLogPotential::operator()(Complex x) const {
  const double abs2 = std::norm(x);
  const double t = variable == PolyVariable::X ? x.real() : abs2;
  double value = horner(coefficients, t);
  if (log_coeff != 0.0) value += log_coeff * std::log1p(abs2);
  return value;
}

Complex PolyLogPotential::gradient(Complex x) const {
  const double abs2 = std::norm(x);
  Complex g = log_coeff * 2.0 * x / (1.0 + abs2);
  if (variable == PolyVariable::X) {
    g += horner_derivative(coefficients, x.real());
  } else {
    g += horner_derivative(coefficients, abs2) * 2.0 * x;
  }
  return g;
}

double PolyLogPotential::limit_at_infinity(double beta, bool real_support) const {
  std::size_t degree = 0;
  for (std::size_t k = coefficients.size(); k-- > 1;) {
    if (coefficients[k] != 0.0) {
      degree = k;
      break;
    }
  }
  if (degree >= 1) {
    const double lead = coefficients[degree];
    if (variable == PolyVariable::AbsSquared) return lead > 0.0 ? kInf : -kInf;
    // A polynomial in x grows to +inf in both directions only for even degree.
    if (real_support && degree % 2 == 0 && lead > 0.0) return kInf;
    return -kInf;
  }
  const double constant = coefficients.empty() ? 0.0 : coefficients[0];
  const double excess = log_coeff - beta / 2.0;
  if (excess > 0.0) return kInf;
  if (excess < 0.0) return -kInf;
  return constant;
}

PotentialSpec PotentialSpec::cauchy() {
  auto spec = poly_log("cauchy", PolyLogPotential{{}, PolyVariable::AbsSquared, 1.0}, 2.0);
  spec.builtin_ = true;
  return spec;
}

PotentialSpec PotentialSpec::spherical() {
  auto spec = poly_log("spherical", PolyLogPotential{{}, PolyVariable::AbsSquared, 1.0}, 2.0);
  spec.builtin_ = true;
  return spec;
}

PotentialSpec PotentialSpec::quadratic() {
  auto spec = poly_log("quadratic", PolyLogPotential{{0.0, 0.0, 1.0}, PolyVariable::X, 0.0}, 2.0);
  spec.builtin_ = true;
  return spec;
}

PotentialSpec PotentialSpec::builtin(std::string_view name) {
  if (name == "cauchy") return cauchy();
  if (name == "spherical") return spherical();
  if (name == "quadratic") return quadratic();
  throw Error(ErrorCode::InvalidArgument, "unknown built-in potential '" + std::string(name) + "'");
}

PotentialSpec PotentialSpec::poly_log(std::string name, PolyLogPotential form,
                                      std::optional<double> beta_prime,
                                      std::optional<double> v_infinity) {
  PotentialSpec spec;
  spec.name_ = std::move(name);
  spec.form_ = form;
  spec.evaluate_ = [form = std::move(form)](Complex x) { return form(x); };
  spec.beta_prime_ = beta_prime;
  spec.v_infinity_ = v_infinity;
  return spec;
}

PotentialSpec PotentialSpec::custom(std::string name, Evaluator evaluate,
                                    std::optional<double> beta_prime,
                                    std::optional<double> v_infinity) {
  if (!evaluate) throw Error(ErrorCode::InvalidArgument, "custom potential needs an evaluator");
  PotentialSpec spec;
  spec.name_ = std::move(name);
  spec.evaluate_ = std::move(evaluate);
  spec.beta_prime_ = beta_prime;
  spec.v_infinity_ = v_infinity;
  return spec;
}

Complex PotentialSpec::gradient(Complex x) const {
  if (form_) return form_->gradient(x);
  const double h = 1e-6 * std::max(1.0, std::abs(x));
  const double dre = (evaluate_(x + h) - evaluate_(x - h)) / (2.0 * h);
  const Complex ih(0.0, h);
  const double dim = (evaluate_(x + ih) - evaluate_(x - ih)) / (2.0 * h);
  return {dre, std::isfinite(dim) ? dim : 0.0};
}

std::optional<double> PotentialSpec::v_infinity(double beta, bool real_support) const {
  if (v_infinity_) return v_infinity_;
  if (form_) return form_->limit_at_infinity(beta, real_support);
  return std::nullopt;
}

PotentialSpec PotentialSpec::with_beta_prime(double beta_prime) const {
  PotentialSpec copy = *this;
  copy.beta_prime_ = beta_prime;
  return copy;
}

GasModel::GasModel(Support support, double beta, PotentialSpec potential, std::size_t n)
    : support_(support), beta_(beta), potential_(std::move(potential)), n_(n) {
  if (!(beta_ > 0.0) || !std::isfinite(beta_))
    throw Error(ErrorCode::InvalidArgument, "beta must be a finite positive number");
  if (n_ < 1) throw Error(ErrorCode::InvalidArgument, "particle count must be at least 1");
  const auto& form = potential_.form();
  if (form && form->variable == PolyVariable::X && !support_.is_real())
    throw Error(ErrorCode::InvalidArgument, "a polynomial in x needs a real support");
  const auto bp = potential_.beta_prime();
  weakly_admissible_ = support_.is_bounded() || (bp && *bp > 1.0 && *bp >= beta_);
}

Configuration::Configuration(const Support& support, std::vector<Complex> points)
    : points_(std::move(points)) {
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (!support.contains(points_[i]))
      throw Error(ErrorCode::InvalidConfiguration,
                  "point " + std::to_string(i) + " lies outside the " +
                      std::string(support.name()) + " support");
  }
}

Configuration::Configuration(const GasModel& model, std::vector<Complex> points)
    : Configuration(model.support(), std::move(points)) {
  if (points_.size() != model.n())
    throw Error(ErrorCode::InvalidConfiguration,
                "configuration has " + std::to_string(points_.size()) + " points, model expects " +
                    std::to_string(model.n()));
}

PlaneMeasure empirical_measure(const Configuration& config) {
  if (config.size() == 0) throw Error(ErrorCode::InvalidArgument, "empty configuration");
  std::map<Complex, std::size_t, PointLess<Complex>> index;
  std::vector<Complex> order;
  std::vector<std::size_t> counts;
  for (const auto& x : config.points()) {
    auto [it, inserted] = index.try_emplace(x, order.size());
    if (inserted) {
      order.push_back(x);
      counts.push_back(1);
    } else {
      ++counts[it->second];
    }
  }
  const auto n = static_cast<double>(config.size());
  std::vector<Atom<Complex>> atoms;
  atoms.reserve(order.size());
  for (std::size_t i = 0; i < order.size(); ++i)
    atoms.push_back({order[i], static_cast<double>(counts[i]) / n});
  return PlaneMeasure(std::move(atoms));
}

std::string_view to_string(Growth growth) {
  switch (growth) {
    case Growth::Strong: return "Strong";
    case Growth::WeakOnly: return "WeakOnly";
    case Growth::Inadmissible: return "Inadmissible";
  }
  return "Unknown";
}

std::vector<Complex> probe_rays(const Support& support) {
  switch (support.kind()) {
    case SupportKind::RealLine: return {Complex(1.0, 0.0), Complex(-1.0, 0.0)};
    case SupportKind::HalfLine: return {Complex(1.0, 0.0)};
    case SupportKind::ComplexPlane: {
      std::vector<Complex> rays;
      for (int k = 0; k < 8; ++k) rays.push_back(std::polar(1.0, k * std::numbers::pi / 4.0));
      return rays;
    }
    case SupportKind::UnitSegment:
    case SupportKind::UnitCircle: return {};
  }
  return {};
}

Admissibility admissibility_check(const GasModel& model) {
  const auto beta_prime = model.potential().beta_prime();
  if (!beta_prime)
    throw Error(ErrorCode::MissingBetaPrime,
                "potential '" + model.potential().name() + "' declares no growth exponent");
  Admissibility result{Growth::Strong, *beta_prime, {}, {}};
  if (model.support().is_bounded()) {
    result.note = "bounded support: no growth condition required";
    return result;
  }

  const auto rays = probe_rays(model.support());
  double min_ratio = kInf;
  for (int k = kProbeFirstScale; k <= kProbeLastScale; ++k) {
    const double r = std::ldexp(1.0, k);
    const double log_r = std::log(r);
    std::optional<GrowthProbe> worst;
    for (const auto& ray : rays) {
      const Complex x = r * ray;
      const double v = model.potential()(x);
      if (std::isnan(v)) throw Error(ErrorCode::InvalidArgument, "potential evaluates to NaN");
      GrowthProbe probe{r, x, v, v / (*beta_prime * log_r), v - *beta_prime * log_r};
      if (!worst || probe.excess < worst->excess) worst = probe;
    }
    min_ratio = std::min(min_ratio, worst->ratio);
    result.probes.push_back(*worst);
  }

  if (min_ratio > 1.0 + kStrongMargin) {
    result.growth = Growth::Strong;
    result.note = "V/(beta' log|x|) stays above 1 on every probe";
    return result;
  }

  constexpr std::size_t kTail = 8;
  const auto& p = result.probes;
  const std::size_t last = p.size() - 1;
  bool decreasing = true;
  for (std::size_t i = p.size() - kTail; i < last; ++i) decreasing = decreasing && p[i + 1].excess < p[i].excess;
  const double slope = (p[last - kTail + 1].excess - p[last].excess) / static_cast<double>(kTail - 1);
  if (decreasing && p[last].excess < kInadmissibleFloor && slope >= kInadmissibleSlope) {
    result.growth = Growth::Inadmissible;
    result.note = "V - beta' log|x| decreases without visible bound";
  } else {
    result.growth = Growth::WeakOnly;
    result.note = "V - beta' log|x| bounded below on probes but the ratio test fails";
  }
  return result;
}

}  // namespace coulomb
