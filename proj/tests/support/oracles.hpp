#pragma once

// Reference computations written directly from the defining formulas,
// without going through the library code paths under test.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <numbers>
#include <span>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

namespace oracle {

using Complex = std::complex<double>;
using Potential = std::function<double(Complex)>;

inline double log_density(std::span<const Complex> x, double beta, const Potential& v) {
  double pairs = 0.0, pot = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    pot += v(x[i]);
    for (std::size_t j = i + 1; j < x.size(); ++j) {
      const double d = std::abs(x[i] - x[j]);
      if (d == 0.0) return -std::numeric_limits<double>::infinity();
      pairs += std::log(d);
    }
  }
  return beta * pairs - static_cast<double>(x.size()) * pot;
}

inline std::array<double, 3> project(Complex x) {
  const double q = 1.0 + std::norm(x);
  return {x.real() / q, x.imag() / q, std::norm(x) / q};
}

inline double distance3(const std::array<double, 3>& a, const std::array<double, 3>& b) {
  return std::hypot(a[0] - b[0], a[1] - b[1], a[2] - b[2]);
}

/// Adaptive Gauss-Kronrod on [a, b].
inline double integrate(const std::function<double(double)>& f, double a, double b, double tol = 1e-12) {
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 20, tol);
}

/// Tanh-sinh rule, for integrands with endpoint singularities.
inline double integrate_singular(const std::function<double(double)>& f, double a, double b) {
  return boost::math::quadrature::tanh_sinh<double>().integrate(f, a, b);
}

/// Exhaustive KS statistic: every step of the empirical CDF is compared with F.
inline double ks(std::vector<double> x, const std::function<double(double)>& cdf) {
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = cdf(x[i]);
    worst = std::max({worst, std::abs(static_cast<double>(i + 1) / n - f), std::abs(static_cast<double>(i) / n - f)});
  }
  return worst;
}

/// Argmax of f over a uniform grid on [a, b] refined around the best node.
inline double grid_argmax(const std::function<double(double)>& f, double a, double b, int rounds = 8) {
  double best = a;
  for (int r = 0; r < rounds; ++r) {
    constexpr int kNodes = 1000;
    double best_value = -std::numeric_limits<double>::infinity();
    for (int i = 0; i <= kNodes; ++i) {
      const double t = a + (b - a) * i / kNodes;
      const double v = f(t);
      if (v > best_value) {
        best_value = v;
        best = t;
      }
    }
    const double h = (b - a) / kNodes;
    a = best - h;
    b = best + h;
  }
  return best;
}

}  // namespace oracle
