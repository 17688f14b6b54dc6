#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "coulomb/model.hpp"

namespace coulomb {

/// One generator per chain: a 64-bit Mersenne twister seeded through
/// seed_seq from (seed low word, seed high word, stream).
std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t stream);

inline constexpr std::size_t kDefaultBurnIn = 1000;
inline constexpr double kTargetAcceptance = 0.3;
inline constexpr double kHeavyTailFraction = 0.1;

struct ChainParams {
  /// Total sweeps, burn-in included. One sweep proposes one move per particle.
  std::size_t sweeps = 3000;
  /// Defaults to min(kDefaultBurnIn, sweeps / 2).
  std::optional<std::size_t> burn_in;
  /// Initial proposal scale (angle scale on the unit circle).
  double step_scale = 0.5;
  /// Robbins-Monro tuning of step_scale toward kTargetAcceptance, burn-in only.
  bool adapt = true;
  std::uint64_t seed = 0;
  /// Record every thin-th sweep after burn-in.
  std::size_t thin = 1;
  /// Mix in Cauchy-distributed steps; defaults to on for weakly confined
  /// models on unbounded supports.
  std::optional<bool> heavy_tail;

  std::size_t resolved_burn_in() const;
};

/// Throws InvalidArgument unless sweeps > burn_in, thin >= 1 and step_scale > 0.
void validate(const ChainParams& params);

struct ChainStats {
  /// Accepted over proposed moves after burn-in.
  double acceptance_rate;
  /// Accepted over proposed moves during burn-in.
  double burn_in_acceptance_rate;
  double final_step_scale;
  /// config_energy of each recorded sample.
  std::vector<double> energy_trace;
};

struct ChainResult {
  std::vector<Configuration> samples;
  /// Sweep index (counted from the start of the chain) of each sample.
  std::vector<std::size_t> sweeps;
  ChainStats stats;
};

/// Change in log_density when particle i moves to `proposal`, computed in
/// O(N); -inf when the proposal coincides with another particle or leaves
/// the support.
double log_acceptance_ratio(const Configuration& config, const GasModel& model, std::size_t i, Complex proposal);

/// Equal-mass layout of the compactified support: Cauchy quantiles on R,
/// spherical-law quantiles (golden-angle spiral) on C, their analogues on
/// the other supports.
Configuration default_initial_configuration(const GasModel& model);

/// Single-particle random-walk Metropolis targeting the density
/// exp(log_density). Throws InadmissibleModel for models without the weak
/// growth flag.
ChainResult mh_chain(const GasModel& model, const Configuration& init, const ChainParams& params,
                     std::uint64_t stream = 0);

/// Independent chains c = 0..chains-1 on streams c, run on up to
/// thread_count() workers; results are ordered by chain index.
std::vector<ChainResult> run_chains(const GasModel& model, const Configuration& init, const ChainParams& params,
                                    std::size_t chains);

/// Dense eigenvalue capability used by the exact ensemble samplers.
class MatrixBackend {
 public:
  virtual ~MatrixBackend() = default;
  virtual std::string_view name() const = 0;
  /// Eigenvalues of the unitary factor Q of the QR decomposition of the
  /// row-major n x n matrix g, after rescaling Q's columns so that R has a
  /// positive diagonal.
  virtual std::vector<Complex> haar_unitary_eigenvalues(std::span<const Complex> g, std::size_t n) const = 0;
  /// Roots of det(A - zB) for row-major n x n matrices; throws
  /// InvalidArgument when B is numerically singular.
  virtual std::vector<Complex> generalized_eigenvalues(std::span<const Complex> a, std::span<const Complex> b,
                                                       std::size_t n) const = 0;
};

inline constexpr std::size_t kMaxEnsembleSize = 512;

/// tan(theta_j / 2) of circular-unitary eigenphases: exactly the Cauchy
/// model at beta = 2. Throws BackendUnavailable when backend is null.
Configuration sample_cauchy_ensemble(std::size_t n, std::uint64_t seed, const MatrixBackend* backend);

/// Generalized eigenvalues of two independent complex Ginibre matrices.
Configuration sample_spherical_ensemble(std::size_t n, std::uint64_t seed, const MatrixBackend* backend);

}  // namespace coulomb
