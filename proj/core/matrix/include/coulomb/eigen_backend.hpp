#pragma once

#include "coulomb/sampler.hpp"

namespace coulomb {

/// MatrixBackend on Eigen's Householder QR, LU and complex Schur solvers.
class EigenBackend final : public MatrixBackend {
 public:
  std::string_view name() const override { return "eigen"; }
  std::vector<Complex> haar_unitary_eigenvalues(std::span<const Complex> g, std::size_t n) const override;
  std::vector<Complex> generalized_eigenvalues(std::span<const Complex> a, std::span<const Complex> b,
                                               std::size_t n) const override;
};

/// Process-wide instance.
const MatrixBackend& eigen_backend();

}  // namespace coulomb
