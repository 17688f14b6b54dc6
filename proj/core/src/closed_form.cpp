#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "coulomb/equilibrium.hpp"

namespace coulomb {

namespace {

using std::numbers::pi;

constexpr double kQuadratureBudget = 1e-8;

bool is_log_one_plus_square(const GasModel& model) {
  const auto& form = model.potential().form();
  if (!form || form->log_coeff != 1.0) return false;
  return std::all_of(form->coefficients.begin(), form->coefficients.end(), [](double c) { return c == 0.0; });
}

void check_budget(double error, double scale, const char* what) {
  if (!(error <= kQuadratureBudget * std::max(1.0, scale)))
    throw Error(ErrorCode::QuadratureFailure, std::string(what) + ": error estimate " + std::to_string(error));
}

/// int log(1/|x - y|) dmu(y) for the Cauchy law, with y = tan(phi/2) so that
/// mu becomes dphi / (2 pi) on (-pi, pi). The integrand is split at the
/// probe's angle; offsets from that endpoint are taken from the quadrature's
/// complement argument to keep the log singularity accurate.
double cauchy_log_potential(double x) {
  const double phi_x = 2.0 * std::atan(x);
  const double c_x = std::cos(phi_x / 2.0);
  // x - tan(phi/2) = sin((phi_x - phi)/2) / (cos(phi_x/2) cos(phi/2)).
  boost::math::quadrature::tanh_sinh<double> quad;
  double err_left = 0.0, err_right = 0.0;
  // On [-pi, phi_x], xc > 0 measures phi_x - phi near the right end.
  const double left = quad.integrate(
      [&](double phi, double xc) {
        const double offset = xc > 0.0 ? xc : phi_x - phi;
        const double cos_half = xc < 0.0 ? std::sin(-xc / 2.0) : std::cos(phi / 2.0);
        const double d = std::abs(std::sin(offset / 2.0)) / (std::abs(c_x) * std::abs(cos_half));
        return -std::log(d);
      },
      -pi, phi_x, 1e-12, &err_left);
  const double right = quad.integrate(
      [&](double phi, double xc) {
        const double offset = xc < 0.0 ? -xc : phi - phi_x;
        const double cos_half = xc > 0.0 ? std::sin(xc / 2.0) : std::cos(phi / 2.0);
        const double d = std::abs(std::sin(offset / 2.0)) / (std::abs(c_x) * std::abs(cos_half));
        return -std::log(d);
      },
      phi_x, pi, 1e-12, &err_right);
  check_budget(err_left + err_right, std::abs(left) + std::abs(right), "Cauchy log potential");
  return (left + right) / (2.0 * pi);
}

/// int log(1/|x - y|) dmu(y) for the spherical law in polar coordinates
/// y = r e^{i(arg x + psi)}, with s = r^2/(1+r^2) uniform under mu.
double spherical_log_potential(Complex x) {
  const double a = std::abs(x);
  const double s_x = a * a / (1.0 + a * a);
  boost::math::quadrature::tanh_sinh<double> inner_quad;
  boost::math::quadrature::tanh_sinh<double> outer_quad;
  double worst_inner = 0.0;

  auto ring = [&](double s) {
    const double r = std::sqrt(s / (1.0 - s));
    if (a == 0.0) return -std::log(r);
    double err = 0.0;
    const double value = inner_quad.integrate(
        [&](double psi, double xc) {
          // Distance from psi to the nearest multiple of 2 pi.
          const double off = xc != 0.0 ? std::abs(xc) : std::min(psi, 2.0 * pi - psi);
          // |a - r e^{i psi}|^2 = (a - r)^2 + 4 a r sin^2(psi/2).
          const double sn = std::sin(off / 2.0);
          const double d2 = (a - r) * (a - r) + 4.0 * a * r * sn * sn;
          return -0.5 * std::log(d2);
        },
        0.0, 2.0 * pi, 1e-12, &err);
    worst_inner = std::max(worst_inner, err);
    return value / (2.0 * pi);
  };

  double err_outer = 0.0, total = 0.0;
  if (s_x > 0.0) {
    double e1 = 0.0, e2 = 0.0;
    total += outer_quad.integrate([&](double s) { return ring(s); }, 0.0, s_x, 1e-10, &e1);
    total += outer_quad.integrate([&](double s) { return ring(s); }, s_x, 1.0, 1e-10, &e2);
    err_outer = e1 + e2;
  } else {
    total = outer_quad.integrate([&](double s) { return ring(s); }, 0.0, 1.0, 1e-10, &err_outer);
  }
  check_budget(err_outer + worst_inner, std::abs(total), "spherical log potential");
  return total;
}

}  // namespace

std::string_view to_string(LawName name) {
  switch (name) {
    case LawName::CauchyLaw: return "cauchy";
    case LawName::SphericalLaw: return "spherical";
    case LawName::CircleUniform: return "circle-uniform";
    case LawName::SphereUniform: return "sphere-uniform";
  }
  return "unknown";
}

double ClosedFormLaw::density(Complex x) const {
  switch (name_) {
    case LawName::CauchyLaw: return 1.0 / (pi * (1.0 + x.real() * x.real()));
    case LawName::SphericalLaw: {
      const double q = 1.0 + std::norm(x);
      return 1.0 / (pi * q * q);
    }
    default: throw Error(ErrorCode::InvalidArgument, "sphere laws take sphere points");
  }
}

double ClosedFormLaw::density(const SpherePoint&) const {
  if (is_planar()) throw Error(ErrorCode::InvalidArgument, "planar laws take planar points");
  return 1.0 / pi;
}

double ClosedFormLaw::cdf(double t) const {
  switch (name_) {
    case LawName::CauchyLaw: return 0.5 + std::atan(t) / pi;
    case LawName::SphericalLaw: {
      if (t <= 0.0) return 0.0;
      if (t > 1e150) return 1.0;
      return t * t / (1.0 + t * t);
    }
    case LawName::CircleUniform: return std::clamp((t + pi) / (2.0 * pi), 0.0, 1.0);
    case LawName::SphereUniform: return std::clamp(t, 0.0, 1.0);
  }
  return 0.0;
}

ClosedFormLaw ClosedFormLaw::pushforward() const {
  switch (name_) {
    case LawName::CauchyLaw: return circle_uniform();
    case LawName::SphericalLaw: return sphere_uniform();
    default: throw Error(ErrorCode::InvalidArgument, "law already lives on the sphere");
  }
}

ClosedFormLaw closed_form(const GasModel& model) {
  if (model.beta() == 2.0 && is_log_one_plus_square(model)) {
    if (model.support().kind() == SupportKind::RealLine) return ClosedFormLaw::cauchy();
    if (model.support().kind() == SupportKind::ComplexPlane) return ClosedFormLaw::spherical();
  }
  throw Error(ErrorCode::NoClosedForm, "no closed-form minimizer for potential '" + model.potential().name() +
                                           "' on the " + std::string(model.support().name()) + " support");
}

std::optional<double> closed_form_energy(const GasModel& model) {
  try {
    const auto law = closed_form(model);
    return law.name() == LawName::CauchyLaw ? std::numbers::ln2 : 0.5;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::NoClosedForm) return std::nullopt;
    throw;
  }
}

std::vector<double> el_residual(const PlaneMeasure& mu, const GasModel& model, std::span<const Complex> probes) {
  std::vector<double> out;
  out.reserve(probes.size());
  for (const auto& x : probes) {
    double acc = 0.0;
    bool singular = false;
    for (const auto& atom : mu.atoms()) {
      if (atom.weight == 0.0) continue;
      const double d = std::abs(x - atom.position);
      if (d < kCoincidenceThreshold) {
        singular = true;
        break;
      }
      acc -= atom.weight * std::log(d);
    }
    out.push_back(singular ? std::numeric_limits<double>::infinity()
                           : model.beta() * acc + model.potential()(x));
  }
  return out;
}

std::vector<double> el_residual(const ClosedFormLaw& law, const GasModel& model, std::span<const Complex> probes) {
  if (!law.is_planar()) throw Error(ErrorCode::InvalidArgument, "effective potential needs a planar law");
  std::vector<double> out;
  out.reserve(probes.size());
  for (const auto& x : probes) {
    const double log_potential =
        law.name() == LawName::CauchyLaw ? cauchy_log_potential(x.real()) : spherical_log_potential(x);
    out.push_back(model.beta() * log_potential + model.potential()(x));
  }
  return out;
}

}  // namespace coulomb
