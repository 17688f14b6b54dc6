#include "coulomb/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "coulomb/numerics.hpp"

namespace coulomb {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
/// Kw is rebuilt from scratch this often to flush incremental drift.
constexpr std::size_t kRefreshEvery = 1000;
constexpr std::size_t kMaxPolishRounds = 2000;

/// Dense K_ab = F_V(p_a, p_b) with the regularized diagonal. Atoms where V is
/// infinite are forbidden: their rows stay zero and their weight stays zero.
struct Problem {
  std::size_t n = 0;
  std::vector<double> k;
  std::vector<char> allowed;

  double at(std::size_t a, std::size_t b) const { return k[a * n + b]; }
  const double* row(std::size_t a) const { return k.data() + a * n; }
};

/// Cells closer than this many combined diameters use the cell-averaged
/// kernel instead of the point value.
constexpr double kNearField = 1.5;
constexpr unsigned kFarRuleOrder = 3;

double cell_diameter(const GridCell& c) {
  switch (c.shape) {
    case GridCell::Shape::Interval: return c.a1 - c.a0;
    case GridCell::Shape::Rectangle: return std::hypot(c.a1 - c.a0, c.b1 - c.b0);
    case GridCell::Shape::Sector: return std::hypot(c.a1 - c.a0, c.a1 * (c.b1 - c.b0));
  }
  return 0.0;
}

/// Two-dimensional grids are treated as piecewise-constant densities
/// (Galerkin): potentials are cell averages and near pairs of cells use the
/// averaged kernel. Point values alone make the quadratic form indefinite on
/// the zero-sum subspace.
Problem build_problem(const GasModel& model, const Grid& grid) {
  Problem p;
  p.n = grid.size();
  const bool planar = !grid.cells.empty() && grid.cells.front().shape != GridCell::Shape::Interval;
  std::vector<CellRule> rules, coarse;
  std::vector<double> v(p.n), diam(p.n);
  p.allowed.assign(p.n, 0);
  for (std::size_t a = 0; a < p.n; ++a) {
    if (planar) {
      rules.push_back(cell_rule(grid.cells[a]));
      coarse.push_back(cell_rule(grid.cells[a], kFarRuleOrder));
      CompensatedSum avg;
      for (std::size_t i = 0; i < rules[a].nodes.size(); ++i)
        avg.add(rules[a].weights[i] * model.potential()(rules[a].nodes[i]));
      v[a] = avg.value();
      diam[a] = cell_diameter(grid.cells[a]);
    } else {
      v[a] = model.potential()(grid.positions[a]);
    }
    p.allowed[a] = std::isfinite(v[a]) ? 1 : 0;
  }
  if (std::none_of(p.allowed.begin(), p.allowed.end(), [](char c) { return c != 0; }))
    throw Error(ErrorCode::InvalidArgument, "the potential is infinite at every grid atom");
  const double half_beta = 0.5 * model.beta();
  p.k.assign(p.n * p.n, 0.0);
  auto averaged = [](const CellRule& ra, const CellRule& rb) {
    CompensatedSum s;
    for (std::size_t i = 0; i < ra.nodes.size(); ++i)
      for (std::size_t j = 0; j < rb.nodes.size(); ++j)
        s.add(-ra.weights[i] * rb.weights[j] * std::log(std::abs(ra.nodes[i] - rb.nodes[j])));
    return s.value();
  };
  auto log_inverse = [&](std::size_t a, std::size_t b) {
    if (!planar) return -std::log(std::abs(grid.positions[a] - grid.positions[b]));
    if (std::abs(grid.positions[a] - grid.positions[b]) < kNearField * (diam[a] + diam[b]))
      return averaged(rules[a], rules[b]);
    return averaged(coarse[a], coarse[b]);
  };
  for (std::size_t a = 0; a < p.n; ++a) {
    if (!p.allowed[a]) continue;
    p.k[a * p.n + a] = half_beta * grid.self_log[a] + v[a];
    for (std::size_t b = a + 1; b < p.n; ++b) {
      if (!p.allowed[b]) continue;
      const double k = half_beta * log_inverse(a, b) + 0.5 * (v[a] + v[b]);
      p.k[a * p.n + b] = k;
      p.k[b * p.n + a] = k;
    }
  }
  return p;
}

void multiply(const Problem& p, const std::vector<double>& w, std::vector<double>& out) {
  out.assign(p.n, 0.0);
  for (std::size_t a = 0; a < p.n; ++a) {
    if (!p.allowed[a]) continue;
    const double* r = p.row(a);
    CompensatedSum s;
    for (std::size_t b = 0; b < p.n; ++b)
      if (w[b] != 0.0) s.add(r[b] * w[b]);
    out[a] = s.value();
  }
}

double dot(const std::vector<double>& x, const std::vector<double>& y) {
  CompensatedSum s;
  for (std::size_t i = 0; i < x.size(); ++i) s.add(x[i] * y[i]);
  return s.value();
}

/// Frank-Wolfe gap w.g - min_a g_a with g = 2 K w.
double fw_gap(const Problem& p, const std::vector<double>& w, const std::vector<double>& kw) {
  double lo = kInf;
  for (std::size_t a = 0; a < p.n; ++a)
    if (p.allowed[a]) lo = std::min(lo, kw[a]);
  return 2.0 * (dot(w, kw) - lo);
}

std::vector<double> start_weights(const Problem& p, const std::vector<double>& init) {
  std::vector<double> w(p.n, 0.0);
  if (init.empty()) {
    for (std::size_t a = 0; a < p.n; ++a) w[a] = p.allowed[a] ? 1.0 : 0.0;
  } else {
    if (init.size() != p.n)
      throw Error(ErrorCode::InvalidArgument, "initial weights do not match the grid size");
    for (std::size_t a = 0; a < p.n; ++a) {
      if (!(init[a] >= 0.0) || !std::isfinite(init[a]))
        throw Error(ErrorCode::InvalidArgument, "initial weights must be finite and nonnegative");
      w[a] = p.allowed[a] ? init[a] : 0.0;
    }
  }
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  if (!(total > 0.0)) throw Error(ErrorCode::InvalidArgument, "initial weights have no mass on allowed atoms");
  for (auto& x : w) x /= total;
  return w;
}

struct SolveState {
  std::vector<double> w;
  std::vector<double> kw;
  double gap = kInf;
  std::size_t iterations = 0;
  std::vector<double> trace;
};

/// Away-step Frank-Wolfe with exact line search on the quadratic.
void frank_wolfe(const Problem& p, SolveState& st, double tol, std::size_t max_iter) {
  auto& w = st.w;
  auto& kw = st.kw;
  multiply(p, w, kw);
  double wkw = dot(w, kw);
  for (std::size_t it = 0; it < max_iter; ++it) {
    std::size_t s = p.n, v = p.n;
    for (std::size_t a = 0; a < p.n; ++a) {
      if (!p.allowed[a]) continue;
      if (s == p.n || kw[a] < kw[s]) s = a;
      if (w[a] > 0.0 && (v == p.n || kw[a] > kw[v])) v = a;
    }
    st.gap = 2.0 * (wkw - kw[s]);
    if (st.gap <= tol) break;
    const double fw_slope = 2.0 * (kw[s] - wkw);
    const double away_slope = 2.0 * (wkw - kw[v]);
    const bool toward = -fw_slope >= -away_slope || w[v] >= 1.0;
    double slope, curvature, gamma_max;
    if (toward) {
      slope = fw_slope;
      curvature = p.at(s, s) - 2.0 * kw[s] + wkw;
      gamma_max = 1.0;
    } else {
      slope = away_slope;
      curvature = wkw - 2.0 * kw[v] + p.at(v, v);
      gamma_max = w[v] / (1.0 - w[v]);
    }
    const double gamma = curvature > 0.0 ? std::clamp(-slope / (2.0 * curvature), 0.0, gamma_max) : gamma_max;
    if (gamma == 0.0) break;
    if (toward) {
      const double* col = p.row(s);
      for (std::size_t a = 0; a < p.n; ++a) {
        w[a] *= 1.0 - gamma;
        kw[a] = (1.0 - gamma) * kw[a] + gamma * col[a];
      }
      w[s] += gamma;
    } else {
      const double* col = p.row(v);
      for (std::size_t a = 0; a < p.n; ++a) {
        w[a] *= 1.0 + gamma;
        kw[a] = (1.0 + gamma) * kw[a] - gamma * col[a];
      }
      w[v] = gamma == gamma_max ? 0.0 : w[v] - gamma;
    }
    ++st.iterations;
    if (st.iterations % kRefreshEvery == 0) multiply(p, w, kw);
    wkw = dot(w, kw);
    st.trace.push_back(wkw);
  }
  multiply(p, w, kw);
  st.gap = fw_gap(p, w, kw);
}

/// Euclidean projection onto the simplex over allowed atoms.
void project_simplex(const Problem& p, std::vector<double>& x) {
  std::vector<double> u;
  for (std::size_t a = 0; a < p.n; ++a)
    if (p.allowed[a]) u.push_back(x[a]);
  std::sort(u.begin(), u.end(), std::greater<>());
  double cum = 0.0, theta = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    cum += u[j];
    const double t = (cum - 1.0) / static_cast<double>(j + 1);
    if (u[j] - t > 0.0) theta = t;
  }
  for (std::size_t a = 0; a < p.n; ++a) x[a] = p.allowed[a] ? std::max(x[a] - theta, 0.0) : 0.0;
}

double spectral_bound(const Problem& p) {
  std::vector<double> x(p.n, 0.0), y;
  for (std::size_t a = 0; a < p.n; ++a) x[a] = p.allowed[a] ? 1.0 + 1e-3 * static_cast<double>(a % 7) : 0.0;
  double lambda = 0.0;
  for (int it = 0; it < 100; ++it) {
    multiply(p, x, y);
    lambda = std::sqrt(dot(y, y));
    if (!(lambda > 0.0)) break;
    for (std::size_t a = 0; a < p.n; ++a) x[a] = y[a] / lambda;
  }
  return lambda;
}

/// Accelerated projected gradient with function-value restarts.
void projected_gradient(const Problem& p, SolveState& st, double tol, std::size_t max_iter) {
  const double step = 1.0 / (2.2 * spectral_bound(p));
  auto x = st.w;
  auto y = x;
  std::vector<double> ky;
  double t = 1.0;
  multiply(p, x, st.kw);
  double fx = dot(x, st.kw);
  for (std::size_t it = 0; it < max_iter; ++it) {
    st.gap = fw_gap(p, x, st.kw);
    if (st.gap <= tol) break;
    multiply(p, y, ky);
    auto next = y;
    for (std::size_t a = 0; a < p.n; ++a) next[a] -= step * 2.0 * ky[a];
    project_simplex(p, next);
    std::vector<double> kn;
    multiply(p, next, kn);
    const double fn = dot(next, kn);
    if (fn > fx) {
      // Restart momentum from the current iterate.
      t = 1.0;
      y = x;
      ++st.iterations;
      st.trace.push_back(fx);
      continue;
    }
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    for (std::size_t a = 0; a < p.n; ++a) y[a] = next[a] + (t - 1.0) / t_next * (next[a] - x[a]);
    t = t_next;
    x = std::move(next);
    st.kw = std::move(kn);
    fx = fn;
    ++st.iterations;
    st.trace.push_back(fx);
  }
  st.w = std::move(x);
  multiply(p, st.w, st.kw);
  st.gap = fw_gap(p, st.w, st.kw);
}

/// Minimises x^T K_SS x over {sum x = 1} by conjugate gradients on the
/// zero-sum subspace, starting from x0 (which must sum to one).
std::vector<double> affine_minimizer(const Problem& p, const std::vector<std::size_t>& active,
                                     const std::vector<double>& x0) {
  const std::size_t m = active.size();
  auto apply = [&](const std::vector<double>& d, std::vector<double>& out) {
    out.assign(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
      const double* r = p.row(active[i]);
      double s = 0.0;
      for (std::size_t j = 0; j < m; ++j) s += r[active[j]] * d[j];
      out[i] = s;
    }
  };
  auto center = [&](std::vector<double>& v) {
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(m);
    for (auto& e : v) e -= mean;
  };
  std::vector<double> x = x0, r, kd;
  apply(x, r);
  for (auto& e : r) e = -e;
  center(r);
  auto d = r;
  double rr = std::inner_product(r.begin(), r.end(), r.begin(), 0.0);
  const double stop = 1e-28 * std::max(1.0, rr);
  for (std::size_t it = 0; it < 4 * m && rr > stop; ++it) {
    apply(d, kd);
    center(kd);
    const double dkd = std::inner_product(d.begin(), d.end(), kd.begin(), 0.0);
    if (!(dkd > 0.0)) break;
    const double alpha = rr / dkd;
    for (std::size_t i = 0; i < m; ++i) {
      x[i] += alpha * d[i];
      r[i] -= alpha * kd[i];
    }
    center(r);
    const double rr_next = std::inner_product(r.begin(), r.end(), r.begin(), 0.0);
    for (std::size_t i = 0; i < m; ++i) d[i] = r[i] + rr_next / rr * d[i];
    rr = rr_next;
  }
  return x;
}

/// Primal active-set refinement of a feasible point: solve the equality
/// problem on the support, walk back to feasibility when weights go
/// negative, and admit atoms whose gradient falls below the multiplier.
void polish(const Problem& p, SolveState& st) {
  auto w = st.w;
  std::vector<char> in(p.n, 0);
  for (std::size_t a = 0; a < p.n; ++a) in[a] = w[a] > 0.0 ? 1 : 0;
  std::vector<double> kw;
  for (std::size_t round = 0; round < kMaxPolishRounds; ++round) {
    std::vector<std::size_t> active;
    std::vector<double> x0;
    for (std::size_t a = 0; a < p.n; ++a)
      if (in[a]) {
        active.push_back(a);
        x0.push_back(w[a]);
      }
    const auto target = affine_minimizer(p, active, x0);
    double alpha = 1.0;
    std::size_t blocking = p.n;
    for (std::size_t i = 0; i < active.size(); ++i) {
      if (target[i] < 0.0) {
        const double a = x0[i] / (x0[i] - target[i]);
        if (a < alpha) {
          alpha = a;
          blocking = active[i];
        }
      }
    }
    for (std::size_t i = 0; i < active.size(); ++i) {
      w[active[i]] = std::max(0.0, x0[i] + alpha * (target[i] - x0[i]));
    }
    if (blocking != p.n) {
      w[blocking] = 0.0;
      for (auto a : active)
        if (w[a] == 0.0) in[a] = 0;
      const double total = std::accumulate(w.begin(), w.end(), 0.0);
      for (auto& e : w) e /= total;
      continue;
    }
    multiply(p, w, kw);
    double multiplier = 0.0;
    for (auto a : active) multiplier += kw[a];
    multiplier /= static_cast<double>(active.size());
    bool entered = false;
    const double slack = 1e-12 * std::max(1.0, std::abs(multiplier));
    for (std::size_t a = 0; a < p.n; ++a) {
      if (!p.allowed[a] || in[a] || kw[a] >= multiplier - slack) continue;
      in[a] = 1;
      entered = true;
    }
    if (!entered) break;
  }
  multiply(p, w, kw);
  const double gap = fw_gap(p, w, kw);
  if (gap < st.gap && dot(w, kw) <= dot(st.w, st.kw) + 1e-12) {
    st.w = std::move(w);
    st.kw = std::move(kw);
    st.gap = gap;
  }
}

}  // namespace

std::string_view to_string(SolverMethod method) {
  return method == SolverMethod::FrankWolfe ? "frank-wolfe" : "projected-gradient";
}

MinimizerResult grid_minimize(const GasModel& model, const GridSpec& spec, const SolverOptions& options) {
  if (!(options.tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "solver tolerance must be positive");
  if (options.max_iter == 0) throw Error(ErrorCode::InvalidArgument, "max_iter must be positive");
  if (!model.weakly_admissible())
    throw Error(ErrorCode::InadmissibleModel, "grid_minimize needs a weakly admissible model");
  auto grid = make_grid(model.support(), spec);
  const auto problem = build_problem(model, grid);

  SolveState st;
  st.w = start_weights(problem, options.initial_weights);
  if (options.method == SolverMethod::FrankWolfe)
    frank_wolfe(problem, st, options.tol, options.max_iter);
  else
    projected_gradient(problem, st, options.tol, options.max_iter);
  if (options.polish) polish(problem, st);

  const double total = std::accumulate(st.w.begin(), st.w.end(), 0.0);
  for (auto& x : st.w) x /= total;
  auto measure = PlaneMeasure::from_weights(grid.positions, st.w);
  auto report = measure_energy(measure, model, grid.self_log);

  std::optional<double> captured;
  try {
    const auto masses = grid.cell_masses(closed_form(model));
    captured = std::accumulate(masses.begin(), masses.end(), 0.0);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NoClosedForm) throw;
  }
  const bool converged = st.gap <= options.tol;
  multiply(problem, st.w, st.kw);
  const double objective = dot(st.w, st.kw);
  return MinimizerResult{std::move(grid), std::move(measure), report,   objective,
                         st.gap,          st.iterations,      converged, captured,
                         std::move(st.trace)};
}

MinimizerResult grid_minimize(const GasModel& model, const GridSpec& spec, double tol, std::size_t max_iter) {
  SolverOptions options;
  options.tol = tol;
  options.max_iter = max_iter;
  return grid_minimize(model, spec, options);
}

double window_l1_distance(const MinimizerResult& result, const ClosedFormLaw& law) {
  const auto masses = result.grid.cell_masses(law);
  const double total = std::accumulate(masses.begin(), masses.end(), 0.0);
  if (result.measure.size() != masses.size())
    throw Error(ErrorCode::MismatchedSupports, "minimizer and grid differ in size");
  CompensatedSum l1;
  for (std::size_t a = 0; a < masses.size(); ++a) l1.add(std::abs(result.measure[a].weight - masses[a] / total));
  return l1.value();
}

std::vector<Complex> log_density_gradient(const Configuration& config, const GasModel& model) {
  const auto x = config.points();
  const std::size_t n = x.size();
  const double nn = static_cast<double>(n);
  std::vector<Complex> g(n);
  for (std::size_t i = 0; i < n; ++i) {
    Complex acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const Complex d = x[i] - x[j];
      const double d2 = std::norm(d);
      if (d2 == 0.0) throw Error(ErrorCode::CoincidentPoints, "gradient undefined at coincident points");
      acc += d / d2;
    }
    g[i] = model.beta() * acc - nn * model.potential().gradient(x[i]);
    if (model.support().is_real()) g[i] = Complex(g[i].real(), 0.0);
  }
  return g;
}

DescentResult fekete_descent(const GasModel& model, const Configuration& init, double step, std::size_t max_iter,
                             double grad_tol) {
  if (init.size() != model.n())
    throw Error(ErrorCode::InvalidConfiguration, "initial configuration has the wrong number of points");
  if (step < 0.0) throw Error(ErrorCode::InvalidArgument, "step must be nonnegative");
  const double base_step = step == 0.0 ? 0.1 / static_cast<double>(model.n()) : step;
  const bool circle = model.support().kind() == SupportKind::UnitCircle;

  Configuration current = init;
  double value = log_density(current, model);
  if (!std::isfinite(value)) throw Error(ErrorCode::CoincidentPoints, "initial configuration has coincident points");
  DescentResult out{current, 0, 0.0, value, false, {value}};

  auto moved = [&](const std::vector<Complex>& g, double alpha) {
    std::vector<Complex> y(current.points().begin(), current.points().end());
    for (std::size_t i = 0; i < y.size(); ++i) {
      if (circle) {
        // Tangential component of the gradient along i x.
        const double t = (g[i] * std::conj(Complex(0.0, 1.0) * y[i])).real();
        y[i] *= std::polar(1.0, alpha * t);
      } else {
        y[i] += alpha * g[i];
      }
    }
    return y;
  };

  auto projected_gradient = [&](const Configuration& c, double& g2) {
    auto g = log_density_gradient(c, model);
    if (circle)
      for (std::size_t i = 0; i < g.size(); ++i) {
        const Complex tangent = Complex(0.0, 1.0) * c[i];
        g[i] = (g[i] * std::conj(tangent)).real() * tangent;
      }
    g2 = 0.0;
    for (const auto& gi : g) g2 += std::norm(gi);
    return g;
  };

  for (std::size_t it = 0; it < max_iter; ++it) {
    double g2 = 0.0;
    const auto g = projected_gradient(current, g2);
    out.gradient_norm = std::sqrt(g2);
    if (out.gradient_norm <= grad_tol) {
      out.converged = true;
      break;
    }
    bool accepted = false;
    for (double alpha = base_step; alpha > 1e-30; alpha *= 0.5) {
      try {
        Configuration trial(model, moved(g, alpha));
        const double tv = log_density(trial, model);
        if (!std::isfinite(tv)) continue;
        // Near the mode the Armijo gain drops below the rounding of the
        // log-density. There the value cannot rank steps, so a step must
        // shrink the gradient and stay within rounding of the current value.
        const double resolution = 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(value));
        bool ok = false;
        if (alpha * g2 >= resolution) {
          ok = tv >= value + 1e-4 * alpha * g2;
        } else if (tv >= value - resolution) {
          double trial_g2 = 0.0;
          projected_gradient(trial, trial_g2);
          ok = trial_g2 < g2;
        }
        if (ok) {
          current = std::move(trial);
          value = tv;
          accepted = true;
          break;
        }
      } catch (const Error& e) {
        if (e.code() != ErrorCode::InvalidConfiguration && e.code() != ErrorCode::InvalidArgument) throw;
      }
    }
    if (!accepted) break;
    ++out.iterations;
    out.log_density_trace.push_back(value);
  }
  if (!out.converged) {
    double g2 = 0.0;
    projected_gradient(current, g2);
    out.gradient_norm = std::sqrt(g2);
    out.converged = out.gradient_norm <= grad_tol;
  }
  out.config = std::move(current);
  out.log_density = value;
  return out;
}

}  // namespace coulomb
