#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "coulomb/analysis.hpp"
#include "coulomb/energy.hpp"
#include "coulomb/equilibrium.hpp"
#include "coulomb/geometry.hpp"
#include "coulomb/model.hpp"
#include "coulomb/sampler.hpp"

namespace coulomb {

using Json = nlohmann::ordered_json;

/// Shortest decimal text that reads back to the same double ("%.17g";
/// "inf", "-inf", "nan" for the special values).
std::string format_double(double x);

/// {name, params, beta_prime, v_infinity}. Built-ins have empty params;
/// poly-log potentials carry {coefficients, variable: "x" | "abs2",
/// log_coeff}. Potentials given only as an evaluator cannot be written.
Json potential_to_json(const PotentialSpec& spec);
/// Throws ValidationError naming the offending field.
PotentialSpec potential_from_json(const Json& j);

Json to_json(const EnergyReport& report);
Json to_json(const FitReport& report);
Json to_json(const RateGap& gap);
/// {energy, gap, iterations, captured_mass} plus solver details.
Json to_json(const MinimizerResult& result);
/// {acceptance_rate, final_step_scale, energy_trace_summary}.
Json to_json(const ChainStats& stats);

/// `x,weight` when every atom is real and real_columns is set, else `re,im,weight`.
void write_plane_measure(std::ostream& out, const PlaneMeasure& mu, bool real_columns);
void write_sphere_measure(std::ostream& out, const SphereMeasure& mu);
/// Reads either plane layout; throws ParseError with the line number.
PlaneMeasure read_plane_measure(std::istream& in);

/// `chain,sweep,particle,re,im`, merged by (chain, sweep).
void write_samples(std::ostream& out, std::span<const ChainResult> chains);

struct SampleRow {
  std::size_t chain;
  std::size_t sweep;
  std::size_t particle;
  Complex position;
};

std::vector<SampleRow> read_samples(std::istream& in);

}  // namespace coulomb
