#include "coulomb/eigen_backend.hpp"

#include <Eigen/Dense>

namespace coulomb {

namespace {

using Matrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Matrix load(std::span<const Complex> data, std::size_t n) {
  if (data.size() != n * n) throw Error(ErrorCode::InvalidArgument, "matrix data is not n x n");
  const auto m = static_cast<Eigen::Index>(n);
  return Eigen::Map<const Matrix>(data.data(), m, m);
}

std::vector<Complex> eigenvalues(const Matrix& m) {
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(m, false);
  if (solver.info() != Eigen::Success) throw Error(ErrorCode::InvalidArgument, "eigenvalue iteration failed");
  const auto& ev = solver.eigenvalues();
  return std::vector<Complex>(ev.data(), ev.data() + ev.size());
}

}  // namespace

std::vector<Complex> EigenBackend::haar_unitary_eigenvalues(std::span<const Complex> g, std::size_t n) const {
  const Matrix z = load(g, n);
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(z);
  Eigen::MatrixXcd q = qr.householderQ();
  const Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Q diag(r_jj / |r_jj|) is Haar distributed.
  for (Eigen::Index j = 0; j < q.cols(); ++j) {
    const Complex d = r(j, j);
    const double a = std::abs(d);
    if (a > 0.0) q.col(j) *= d / a;
  }
  return eigenvalues(q);
}

std::vector<Complex> EigenBackend::generalized_eigenvalues(std::span<const Complex> a, std::span<const Complex> b,
                                                           std::size_t n) const {
  const Matrix ma = load(a, n);
  const Matrix mb = load(b, n);
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(mb);
  const double rcond = lu.rcond();
  if (!(rcond > 1e-14)) throw Error(ErrorCode::InvalidArgument, "B is numerically singular");
  // det(A - zB) = 0 iff z is an eigenvalue of B^-1 A.
  const Eigen::MatrixXcd m = lu.solve(Eigen::MatrixXcd(ma));
  auto ev = eigenvalues(m);
  for (const auto& z : ev)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      throw Error(ErrorCode::InvalidArgument, "non-finite generalized eigenvalue");
  return ev;
}

const MatrixBackend& eigen_backend() {
  static const EigenBackend instance;
  return instance;
}

}  // namespace coulomb
