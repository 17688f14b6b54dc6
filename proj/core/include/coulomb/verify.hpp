#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace coulomb {

struct IdentityCheck {
  std::string name;
  std::size_t trials;
  /// Largest deviation seen, relative to max(1, |reference value|).
  double max_deviation;
  double tolerance;
  bool passed;
};

struct VerifyOptions {
  std::uint64_t seed = 0;
  /// Random point pairs for the metric, pole and kernel checks.
  std::size_t pairs = 100000;
  /// Random configurations for the density check.
  std::size_t configurations = 100000;
  std::size_t particles = 8;
  /// Random measures for the energy check.
  std::size_t measures = 100;
  std::size_t atoms = 100;
};

struct VerifyReport {
  std::vector<IdentityCheck> checks;
  double seconds;

  bool passed() const;
};

/// Checks the compactification identities on seeded random inputs:
///   metric     chordal_distance(x, y) = |T x - T y|
///   pole       1 - |T x|^2 = 1 / (1 + |x|^2)
///   round-trip unproject(T x) = x
///   kernel     F_V(x, y) = F_W(T x, T y)
///   density    log_density = log_density_sphere
///   energy     measure energy of mu = measure energy of T_* mu
/// Inputs mix moduli over twelve decades and cycle through the built-in
/// models plus a weakly confined poly-log model at beta = 1.
VerifyReport verify_identities(const VerifyOptions& options = {});

}  // namespace coulomb
