#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "coulomb/equilibrium.hpp"
#include "coulomb/io.hpp"
#include "coulomb/sampler.hpp"
#include "coulomb/verify.hpp"

namespace coulomb::cli {

enum class Command { Sample, Equilibrium, Verify, Analyze };

std::string_view to_string(Command command);
Command command_from_name(std::string_view name);

enum class SamplerMethod { Metropolis, Ensemble };

struct ModelConfig {
  Support support{SupportKind::RealLine};
  double beta = 2.0;
  PotentialSpec potential = PotentialSpec::cauchy();
  std::size_t n = 64;

  GasModel build() const { return GasModel(support, beta, potential, n); }
};

struct SampleConfig {
  SamplerMethod method = SamplerMethod::Metropolis;
  ChainParams chain;
  std::size_t chains = 1;
  /// Independent matrix draws for the ensemble method.
  std::size_t draws = 40;
};

struct AnalyzeConfig {
  std::string input;
  /// cauchy | spherical | circle-uniform | sphere-uniform
  std::string reference = "cauchy";
};

struct RunConfig {
  Command command = Command::Sample;
  ModelConfig model;
  SampleConfig sample;
  GridSpec grid;
  SolverOptions solver;
  VerifyOptions verify;
  AnalyzeConfig analyze;
  std::string out = ".";
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

/// Command-line values; each one, when set, beats the file.
struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<unsigned> threads;
  std::optional<std::string> input;
  std::optional<std::string> reference;
};

/// Strict JSON schema (see README). Throws ParseError for malformed text or
/// unknown keys, ValidationError with the field path for bad values. An
/// empty text means all defaults. A "command" key, if present, must match.
RunConfig parse_config(std::string_view text, Command command, const Overrides& overrides = {});

/// The resolved configuration in the same schema; parse_config of the
/// result reproduces the run.
Json to_json(const RunConfig& config);

}  // namespace coulomb::cli
