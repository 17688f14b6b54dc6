#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "coulomb/energy.hpp"
#include "coulomb/geometry.hpp"
#include "coulomb/model.hpp"

namespace coulomb {

enum class LawName { CauchyLaw, SphericalLaw, CircleUniform, SphereUniform };

std::string_view to_string(LawName name);

/// Limiting measures known in closed form.
///
/// CauchyLaw lives on R with density 1/(pi(1+x^2)); SphericalLaw on C with
/// density 1/(pi(1+|x|^2)^2). Their push-forwards are the uniform laws on the
/// great circle {x2 = 0} and on the whole Riemann sphere (both of total
/// length/area pi, hence density 1/pi).
class ClosedFormLaw {
 public:
  static ClosedFormLaw cauchy() { return ClosedFormLaw(LawName::CauchyLaw); }
  static ClosedFormLaw spherical() { return ClosedFormLaw(LawName::SphericalLaw); }
  static ClosedFormLaw circle_uniform() { return ClosedFormLaw(LawName::CircleUniform); }
  static ClosedFormLaw sphere_uniform() { return ClosedFormLaw(LawName::SphereUniform); }

  LawName name() const { return name_; }
  bool is_planar() const { return name_ == LawName::CauchyLaw || name_ == LawName::SphericalLaw; }

  /// Planar laws: Lebesgue density at x. Sphere laws: density with respect
  /// to arc length / surface area.
  double density(Complex x) const;
  double density(const SpherePoint& z) const;

  /// CauchyLaw: CDF. SphericalLaw: radial CDF r^2/(1+r^2). CircleUniform: CDF
  /// of the equator angle on (-pi, pi]. SphereUniform: CDF of the height x3.
  double cdf(double t) const;

  ClosedFormLaw pushforward() const;

 private:
  explicit ClosedFormLaw(LawName name) : name_(name) {}
  LawName name_;
};

/// Throws NoClosedForm unless the model is log(1+|x|^2) at beta = 2 on R or C.
ClosedFormLaw closed_form(const GasModel& model);

/// Minimal weighted energy for models with a closed-form minimizer:
/// log 2 on R, 1/2 on C.
std::optional<double> closed_form_energy(const GasModel& model);

enum class GridLayout {
  /// Equal spacing in the plane; square window on C.
  Uniform,
  /// Equal spacing on the compactified support: equal angles on the
  /// circle for R, equal-area polar cells on the sphere for C (disk window).
  Compactified,
};

std::string_view to_string(GridLayout layout);
GridLayout grid_layout_from_name(std::string_view name);

struct GridSpec {
  /// Half-width of the interval / square, or radius of the disk.
  double window = 100.0;
  /// Atoms per axis (radial rings for the compactified plane grid).
  std::size_t resolution = 400;
  GridLayout layout = GridLayout::Compactified;
  /// Angular sectors for the compactified plane grid; 0 means `resolution`.
  std::size_t angular_resolution = 0;
};

inline constexpr std::size_t kMinGridResolution = 16;

struct GridCell {
  enum class Shape { Interval, Rectangle, Sector } shape;
  /// Interval: [a0, a1]. Rectangle: [a0, a1] x [b0, b1]. Sector: radii
  /// [a0, a1], angles [b0, b1].
  double a0, a1, b0, b1;
};

/// Product Gauss rule for averaging over a cell, weights summing to one.
/// Intervals and rectangles use Lebesgue measure; sectors use the sphere
/// area element, i.e. equal weight per unit of x3 and of angle.
struct CellRule {
  std::vector<Complex> nodes;
  std::vector<double> weights;
};

inline constexpr unsigned kCellRuleOrder = 8;

/// Orders 1, 3 and 8 per axis are available.
CellRule cell_rule(const GridCell& cell, unsigned order = kCellRuleOrder);

struct Grid {
  std::vector<Complex> positions;
  std::vector<GridCell> cells;
  /// Cell average of log(1/|x-y|) for each atom (sector cells average with
  /// the sphere area element).
  std::vector<double> self_log;
  /// The same cell averages of log(1/|Tx-Ty|), for energies of the
  /// pushed-forward grid measure.
  std::vector<double> sphere_self_log;

  std::size_t size() const { return positions.size(); }
  /// Unnormalised closed-form mass of each cell.
  std::vector<double> cell_masses(const ClosedFormLaw& law) const;
};

Grid make_grid(const Support& support, const GridSpec& spec);

enum class SolverMethod { FrankWolfe, ProjectedGradient };

std::string_view to_string(SolverMethod method);

struct SolverOptions {
  SolverMethod method = SolverMethod::FrankWolfe;
  double tol = 1e-4;
  std::size_t max_iter = 200000;
  /// Starting weights (normalised internally); uniform when empty.
  std::vector<double> initial_weights;
  /// Finish with an active-set solve on the identified support.
  bool polish = true;
};

struct MinimizerResult {
  Grid grid;
  PlaneMeasure measure;
  /// Regularized energy of `measure` (point kernel off the diagonal).
  EnergyReport report;
  /// Value of the solver's quadratic form at the final weights; equals
  /// report.value on the real line, and uses cell-averaged kernels and
  /// potentials on two-dimensional grids.
  double objective;
  double gap;
  std::size_t iterations;
  bool converged;
  /// Closed-form mass inside the window, when a closed form exists.
  std::optional<double> captured_mass;
  /// Objective after each first-order iteration.
  std::vector<double> objective_trace;
};

/// Minimises the regularized discrete energy over weight vectors on the
/// grid. The returned gap is the Frank-Wolfe duality gap of the final
/// weights; `converged` is false (best iterate returned) when it exceeds tol.
MinimizerResult grid_minimize(const GasModel& model, const GridSpec& grid, const SolverOptions& options);
MinimizerResult grid_minimize(const GasModel& model, const GridSpec& grid, double tol, std::size_t max_iter);

/// Sum of |w_a - p_a| with p the closed-form cell masses renormalised to the
/// window.
double window_l1_distance(const MinimizerResult& result, const ClosedFormLaw& law);

/// Gradient of log_density with respect to each particle (complex form;
/// imaginary parts are zero on real supports).
std::vector<Complex> log_density_gradient(const Configuration& config, const GasModel& model);

struct DescentResult {
  Configuration config;
  std::size_t iterations;
  double gradient_norm;
  double log_density;
  bool converged;
  std::vector<double> log_density_trace;
};

inline constexpr double kDescentGradientTolerance = 1e-10;

/// Gradient ascent on log_density with Armijo backtracking (factor 1/2).
/// Each iteration starts from `step`; zero selects 0.1/N. Steps that leave
/// the support or merge two points are rejected by the line search.
DescentResult fekete_descent(const GasModel& model, const Configuration& init, double step, std::size_t max_iter,
                             double grad_tol = kDescentGradientTolerance);

/// Effective potential U(x) = beta * int log(1/|x-y|) dmu(y) + V(x).
std::vector<double> el_residual(const PlaneMeasure& mu, const GasModel& model, std::span<const Complex> probes);
/// Closed-form path by adaptive quadrature, split at the probe's
/// singularity. Throws QuadratureFailure when the error budget is exceeded.
std::vector<double> el_residual(const ClosedFormLaw& law, const GasModel& model, std::span<const Complex> probes);

}  // namespace coulomb
