#include "coulomb/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <thread>

#include "coulomb/energy.hpp"
#include "coulomb/numerics.hpp"

namespace coulomb {

namespace {

using std::numbers::pi;

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
/// Robbins-Monro gain exponent: gain (t+1)^-0.6 at sweep t.
constexpr double kAdaptExponent = 0.6;
/// The incremental energy is recomputed from scratch this often.
constexpr std::size_t kResyncSweeps = 100;

struct Totals {
  double log_pairs;  ///< sum_{i<j} log|x_i - x_j|
  double potential;  ///< sum_i V(x_i)
};

Totals exact_totals(std::span<const Complex> x, const GasModel& model) {
  CompensatedSum pairs, pot;
  for (std::size_t i = 0; i < x.size(); ++i) {
    pot.add(model.potential()(x[i]));
    for (std::size_t j = i + 1; j < x.size(); ++j) pairs.add(std::log(std::abs(x[i] - x[j])));
  }
  return {pairs.value(), pot.value()};
}

/// (1/N^2) sum_{i != j} F_V(x_i, x_j) from the two running totals.
double energy_from(const Totals& t, const GasModel& model, std::size_t n) {
  const double nn = static_cast<double>(n);
  return (-model.beta() * t.log_pairs + (nn - 1.0) * t.potential) / (nn * nn);
}

struct MoveDelta {
  double log_ratio;
  double log_pairs;
  double potential;
};

MoveDelta move_delta(std::span<const Complex> x, const GasModel& model, std::size_t i, Complex proposal) {
  if (!model.support().contains(proposal)) return {kNegInf, 0.0, 0.0};
  const double v_new = model.potential()(proposal);
  if (v_new == std::numeric_limits<double>::infinity()) return {kNegInf, 0.0, 0.0};
  CompensatedSum pairs;
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (j == i) continue;
    const double d_new = std::abs(proposal - x[j]);
    if (d_new < kCoincidenceThreshold) return {kNegInf, 0.0, 0.0};
    pairs.add(std::log(d_new) - std::log(std::abs(x[i] - x[j])));
  }
  const double dv = v_new - model.potential()(x[i]);
  const double dp = pairs.value();
  return {model.beta() * dp - static_cast<double>(x.size()) * dv, dp, dv};
}

}  // namespace

std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

std::size_t ChainParams::resolved_burn_in() const { return burn_in.value_or(std::min(kDefaultBurnIn, sweeps / 2)); }

void validate(const ChainParams& params) {
  if (params.sweeps == 0) throw Error(ErrorCode::InvalidArgument, "sweeps must be positive");
  if (params.resolved_burn_in() >= params.sweeps)
    throw Error(ErrorCode::InvalidArgument, "burn_in must be smaller than sweeps");
  if (params.thin == 0) throw Error(ErrorCode::InvalidArgument, "thin must be at least 1");
  if (!(params.step_scale > 0.0) || !std::isfinite(params.step_scale))
    throw Error(ErrorCode::InvalidArgument, "step_scale must be positive and finite");
}

double log_acceptance_ratio(const Configuration& config, const GasModel& model, std::size_t i, Complex proposal) {
  if (i >= config.size()) throw Error(ErrorCode::InvalidArgument, "particle index out of range");
  return move_delta(config.points(), model, i, proposal).log_ratio;
}

Configuration default_initial_configuration(const GasModel& model) {
  const std::size_t n = model.n();
  const double nn = static_cast<double>(n);
  std::vector<Complex> x(n);
  const double golden = 2.0 * pi * (1.0 - 1.0 / std::numbers::phi);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = (static_cast<double>(i) + 0.5) / nn;
    switch (model.support().kind()) {
      case SupportKind::RealLine: x[i] = std::tan(pi * (u - 0.5)); break;
      case SupportKind::ComplexPlane:
        x[i] = std::polar(std::sqrt(u / (1.0 - u)), golden * static_cast<double>(i));
        break;
      case SupportKind::HalfLine: x[i] = std::tan(0.5 * pi * u); break;
      case SupportKind::UnitSegment: x[i] = u; break;
      case SupportKind::UnitCircle: x[i] = std::polar(1.0, 2.0 * pi * u); break;
    }
  }
  return Configuration(model, std::move(x));
}

ChainResult mh_chain(const GasModel& model, const Configuration& init, const ChainParams& params,
                     std::uint64_t stream) {
  validate(params);
  if (!model.weakly_admissible())
    throw Error(ErrorCode::InadmissibleModel, "mh_chain needs a weakly admissible model");
  if (init.size() != model.n())
    throw Error(ErrorCode::InvalidConfiguration, "initial configuration has the wrong number of points");
  for (const auto& p : init.points())
    if (!model.support().contains(p))
      throw Error(ErrorCode::InvalidConfiguration, "initial configuration leaves the support");
  if (!std::isfinite(log_density(init, model)))
    throw Error(ErrorCode::CoincidentPoints, "initial configuration has coincident points");

  const bool circle = model.support().kind() == SupportKind::UnitCircle;
  const bool planar = model.support().kind() == SupportKind::ComplexPlane;
  const bool heavy =
      params.heavy_tail.value_or(!model.support().is_bounded() && admissibility_check(model).growth == Growth::WeakOnly);

  auto rng = make_stream(params.seed, stream);
  std::normal_distribution<double> gauss;
  std::cauchy_distribution<double> cauchy;
  std::uniform_real_distribution<double> unit;

  const std::size_t n = init.size();
  const std::size_t burn_in = params.resolved_burn_in();
  std::vector<Complex> x(init.points().begin(), init.points().end());
  Totals totals = exact_totals(x, model);
  double log_step = std::log(params.step_scale);

  ChainResult out;
  std::size_t accepted_burn = 0, accepted_main = 0;
  for (std::size_t sweep = 0; sweep < params.sweeps; ++sweep) {
    const double step = std::exp(log_step);
    std::size_t accepted = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const bool tail_move = heavy && unit(rng) < kHeavyTailFraction;
      auto draw = [&] { return tail_move ? cauchy(rng) : gauss(rng); };
      Complex proposal;
      if (circle) {
        proposal = x[i] * std::polar(1.0, step * draw());
      } else if (planar) {
        // Standard complex Gaussian: E|xi|^2 = 1.
        const double re = draw(), im = draw();
        proposal = x[i] + step * Complex(re, im) / std::numbers::sqrt2;
      } else {
        proposal = x[i] + step * draw();
      }
      const auto delta = move_delta(x, model, i, proposal);
      if (delta.log_ratio == kNegInf) continue;
      if (delta.log_ratio >= 0.0 || std::log(unit(rng)) < delta.log_ratio) {
        x[i] = proposal;
        totals.log_pairs += delta.log_pairs;
        totals.potential += delta.potential;
        ++accepted;
      }
    }
    if (sweep < burn_in) {
      accepted_burn += accepted;
      if (params.adapt) {
        const double rate = static_cast<double>(accepted) / static_cast<double>(n);
        log_step += (rate - kTargetAcceptance) / std::pow(static_cast<double>(sweep + 1), kAdaptExponent);
      }
    } else {
      accepted_main += accepted;
    }
    if ((sweep + 1) % kResyncSweeps == 0) totals = exact_totals(x, model);
    if (sweep >= burn_in && (sweep - burn_in) % params.thin == 0) {
      out.samples.emplace_back(model.support(), x);
      out.sweeps.push_back(sweep);
      out.stats.energy_trace.push_back(energy_from(totals, model, n));
    }
  }
  const double nn = static_cast<double>(n);
  out.stats.acceptance_rate = static_cast<double>(accepted_main) / (nn * static_cast<double>(params.sweeps - burn_in));
  out.stats.burn_in_acceptance_rate =
      burn_in == 0 ? 0.0 : static_cast<double>(accepted_burn) / (nn * static_cast<double>(burn_in));
  out.stats.final_step_scale = std::exp(log_step);
  return out;
}

std::vector<ChainResult> run_chains(const GasModel& model, const Configuration& init, const ChainParams& params,
                                    std::size_t chains) {
  if (chains == 0) throw Error(ErrorCode::InvalidArgument, "need at least one chain");
  validate(params);
  std::vector<ChainResult> results(chains);
  std::vector<std::exception_ptr> errors(chains);
  auto run = [&](std::size_t c) {
    try {
      results[c] = mh_chain(model, init, params, c);
    } catch (...) {
      errors[c] = std::current_exception();
    }
  };
  const std::size_t workers = std::min<std::size_t>(thread_count(), chains);
  if (workers <= 1) {
    for (std::size_t c = 0; c < chains; ++c) run(c);
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        for (std::size_t c = w; c < chains; c += workers) run(c);
      });
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return results;
}

namespace {

std::vector<Complex> ginibre(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  std::vector<Complex> g(n * n);
  for (auto& z : g) {
    const double re = gauss(rng), im = gauss(rng);
    z = Complex(re, im) / std::numbers::sqrt2;
  }
  return g;
}

void check_ensemble(std::size_t n, const MatrixBackend* backend) {
  if (backend == nullptr)
    throw Error(ErrorCode::BackendUnavailable, "no matrix backend configured; use mh_chain instead");
  if (n == 0 || n > kMaxEnsembleSize)
    throw Error(ErrorCode::InvalidArgument, "ensemble size must be in [1, " + std::to_string(kMaxEnsembleSize) + "]");
}

}  // namespace

Configuration sample_cauchy_ensemble(std::size_t n, std::uint64_t seed, const MatrixBackend* backend) {
  check_ensemble(n, backend);
  auto rng = make_stream(seed, 0);
  const auto g = ginibre(n, rng);
  const auto eig = backend->haar_unitary_eigenvalues(g, n);
  std::vector<Complex> x;
  x.reserve(n);
  for (const auto& lambda : eig) x.emplace_back(std::tan(0.5 * std::arg(lambda)), 0.0);
  return Configuration(Support(SupportKind::RealLine), std::move(x));
}

Configuration sample_spherical_ensemble(std::size_t n, std::uint64_t seed, const MatrixBackend* backend) {
  check_ensemble(n, backend);
  auto rng = make_stream(seed, 0);
  constexpr int kAttempts = 8;
  for (int attempt = 0; attempt < kAttempts; ++attempt) {
    const auto a = ginibre(n, rng);
    const auto b = ginibre(n, rng);
    try {
      return Configuration(Support(SupportKind::ComplexPlane), backend->generalized_eigenvalues(a, b, n));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::InvalidArgument) throw;
    }
  }
  throw Error(ErrorCode::InvalidArgument, "B was singular in every attempt");
}

}  // namespace coulomb
