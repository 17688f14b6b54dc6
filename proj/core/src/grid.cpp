#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss.hpp>

#include "coulomb/equilibrium.hpp"

namespace coulomb {

namespace {

using std::numbers::pi;

double height_to_radius(double t) { return std::sqrt(t / (1.0 - t)); }
double radius_to_height(double r) { return r * r / (1.0 + r * r); }

void check_spec(const Support& support, const GridSpec& spec) {
  if (!support.solver_supported())
    throw Error(ErrorCode::InvalidArgument,
                "grid solver supports only the real line and the complex plane, not " + std::string(support.name()));
  if (!(spec.window > 0.0) || !std::isfinite(spec.window))
    throw Error(ErrorCode::InvalidArgument, "grid window must be positive and finite");
  if (spec.resolution < kMinGridResolution)
    throw Error(ErrorCode::InvalidArgument, "grid resolution must be at least " + std::to_string(kMinGridResolution));
  if (spec.angular_resolution != 0 && spec.angular_resolution < 3)
    throw Error(ErrorCode::InvalidArgument, "angular resolution must be at least 3");
}

void add_interval(Grid& g, double a0, double a1, double mid) {
  g.positions.emplace_back(mid, 0.0);
  g.cells.push_back({GridCell::Shape::Interval, a0, a1, 0.0, 0.0});
  g.self_log.push_back(interval_self_log(a1 - a0));
}

Grid real_grid(const GridSpec& spec) {
  Grid g;
  const std::size_t n = spec.resolution;
  const double l = spec.window;
  if (spec.layout == GridLayout::Uniform) {
    const double h = 2.0 * l / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double a0 = -l + h * static_cast<double>(i);
      add_interval(g, a0, a0 + h, a0 + 0.5 * h);
    }
    return g;
  }
  // Equal arcs of the circle x = tan(theta / 2).
  const double theta_max = 2.0 * std::atan(l);
  const double dt = 2.0 * theta_max / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t0 = -theta_max + dt * static_cast<double>(i);
    add_interval(g, std::tan(t0 / 2.0), std::tan((t0 + dt) / 2.0), std::tan((t0 + 0.5 * dt) / 2.0));
  }
  return g;
}

Grid plane_grid(const GridSpec& spec) {
  Grid g;
  const std::size_t n = spec.resolution;
  const double l = spec.window;
  if (spec.layout == GridLayout::Uniform) {
    const double h = 2.0 * l / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        const double a0 = -l + h * static_cast<double>(i);
        const double b0 = -l + h * static_cast<double>(j);
        g.positions.emplace_back(a0 + 0.5 * h, b0 + 0.5 * h);
        g.cells.push_back({GridCell::Shape::Rectangle, a0, a0 + h, b0, b0 + h});
        g.self_log.push_back(square_self_log(h * h));
      }
    }
    return g;
  }
  // Equal-area cells on the sphere: heights x3 = r^2/(1+r^2) equispaced
  // up to the window radius, equal longitudes.
  const std::size_t sectors = spec.angular_resolution == 0 ? n : spec.angular_resolution;
  const double top = l * l / (1.0 + l * l);
  const double dh = top / static_cast<double>(n);
  const double da = 2.0 * pi / static_cast<double>(sectors);
  for (std::size_t k = 0; k < n; ++k) {
    const double t0 = dh * static_cast<double>(k);
    const double tc = t0 + 0.5 * dh;
    const double r0 = height_to_radius(t0), r1 = height_to_radius(t0 + dh), rc = height_to_radius(tc);
    // On the sphere the cell is close to a flat rectangle: dh / (2 rho) along
    // the meridian by rho * da along the parallel, rho = sqrt(x3 (1 - x3)).
    const double rho = std::sqrt(tc * (1.0 - tc));
    const double sphere_self = rectangle_self_log(dh / (2.0 * rho), rho * da);
    for (std::size_t j = 0; j < sectors; ++j) {
      const double a0 = da * static_cast<double>(j);
      const GridCell cell{GridCell::Shape::Sector, r0, r1, a0, a0 + da};
      // log(1/|x-y|) = log(1/|Tx-Ty|) - log(1+|x|^2)/2 - log(1+|y|^2)/2.
      const auto rule = cell_rule(cell, kCellRuleOrder);
      double lift = 0.0;
      for (std::size_t i = 0; i < rule.nodes.size(); ++i) lift += rule.weights[i] * std::log1p(std::norm(rule.nodes[i]));
      g.positions.push_back(std::polar(rc, a0 + 0.5 * da));
      g.cells.push_back(cell);
      g.self_log.push_back(sphere_self - lift);
    }
  }
  return g;
}

}  // namespace

std::string_view to_string(GridLayout layout) {
  return layout == GridLayout::Uniform ? "uniform" : "compactified";
}

GridLayout grid_layout_from_name(std::string_view name) {
  if (name == "uniform") return GridLayout::Uniform;
  if (name == "compactified") return GridLayout::Compactified;
  throw Error(ErrorCode::InvalidArgument, "unknown grid layout '" + std::string(name) + "'");
}

Grid make_grid(const Support& support, const GridSpec& spec) {
  check_spec(support, spec);
  Grid g = support.kind() == SupportKind::RealLine ? real_grid(spec) : plane_grid(spec);
  // log(1/|Tx-Ty|) = log(1/|x-y|) + log(1+|x|^2)/2 + log(1+|y|^2)/2.
  g.sphere_self_log.reserve(g.size());
  for (std::size_t a = 0; a < g.size(); ++a) {
    const auto rule = cell_rule(g.cells[a], kCellRuleOrder);
    double lift = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) lift += rule.weights[i] * std::log1p(std::norm(rule.nodes[i]));
    g.sphere_self_log.push_back(g.self_log[a] + lift);
  }
  return g;
}

namespace {

template <unsigned N>
void unit_gauss(std::vector<double>& x, std::vector<double>& w) {
  // Gauss-Legendre on [0, 1], assembled from the symmetric half-rule.
  using Rule = boost::math::quadrature::gauss<double, N>;
  const auto& abscissa = Rule::abscissa();
  const auto& weight = Rule::weights();
  for (std::size_t i = 0; i < abscissa.size(); ++i) {
    x.push_back(0.5 * (1.0 - abscissa[i]));
    w.push_back(0.5 * weight[i]);
    if (abscissa[i] == 0.0) continue;
    x.push_back(0.5 * (1.0 + abscissa[i]));
    w.push_back(0.5 * weight[i]);
  }
}

}  // namespace

CellRule cell_rule(const GridCell& cell, unsigned order) {
  std::vector<double> x, w;
  switch (order) {
    case 1: unit_gauss<1>(x, w); break;
    case 3: unit_gauss<3>(x, w); break;
    case 8: unit_gauss<8>(x, w); break;
    default: throw Error(ErrorCode::InvalidArgument, "cell rules come in orders 1, 3 and 8");
  }
  const std::size_t m = x.size();
  CellRule rule;
  switch (cell.shape) {
    case GridCell::Shape::Interval:
      for (std::size_t i = 0; i < m; ++i) {
        rule.nodes.emplace_back(cell.a0 + (cell.a1 - cell.a0) * x[i], 0.0);
        rule.weights.push_back(w[i]);
      }
      break;
    case GridCell::Shape::Rectangle:
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
          rule.nodes.emplace_back(cell.a0 + (cell.a1 - cell.a0) * x[i], cell.b0 + (cell.b1 - cell.b0) * x[j]);
          rule.weights.push_back(w[i] * w[j]);
        }
      break;
    case GridCell::Shape::Sector: {
      const double t0 = radius_to_height(cell.a0), t1 = radius_to_height(cell.a1);
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
          const double r = height_to_radius(t0 + (t1 - t0) * x[i]);
          rule.nodes.push_back(std::polar(r, cell.b0 + (cell.b1 - cell.b0) * x[j]));
          rule.weights.push_back(w[i] * w[j]);
        }
      break;
    }
  }
  return rule;
}

std::vector<double> Grid::cell_masses(const ClosedFormLaw& law) const {
  if (!law.is_planar()) throw Error(ErrorCode::InvalidArgument, "cell masses need a planar law");
  std::vector<double> out;
  out.reserve(cells.size());
  for (const auto& c : cells) {
    switch (c.shape) {
      case GridCell::Shape::Interval:
        if (law.name() != LawName::CauchyLaw)
          throw Error(ErrorCode::InvalidArgument, "interval cells need a law on the real line");
        out.push_back(law.cdf(c.a1) - law.cdf(c.a0));
        break;
      case GridCell::Shape::Sector:
        if (law.name() != LawName::SphericalLaw)
          throw Error(ErrorCode::InvalidArgument, "sector cells need a rotation-invariant law");
        out.push_back((law.cdf(c.a1) - law.cdf(c.a0)) * (c.b1 - c.b0) / (2.0 * pi));
        break;
      case GridCell::Shape::Rectangle: {
        if (law.name() != LawName::SphericalLaw)
          throw Error(ErrorCode::InvalidArgument, "rectangle cells need a law on the plane");
        using Rule = boost::math::quadrature::gauss<double, 15>;
        out.push_back(Rule::integrate(
            [&](double u) {
              return Rule::integrate([&](double v) { return law.density(Complex(u, v)); }, c.b0, c.b1);
            },
            c.a0, c.a1));
        break;
      }
    }
  }
  return out;
}

}  // namespace coulomb
