#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace qfock {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = std::int64_t;

/// Raised when a mathematically guaranteed property (positivity, invertibility,
/// symmetry) is violated beyond tolerance. Always indicates a bug upstream.
class NumericalFault : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Run parameters shared by every construction: dimension d of the one-particle
/// space, deformation parameter q, truncation level and check tolerance.
struct Config {
  int d = 2;
  double q = 0.0;
  int n_max = 1;
  double tol = 1e-10;

  /// Throws std::invalid_argument unless d >= 2, |q| < 1, n_max >= 1, tol > 0.
  void validate() const;
};

/// Which inner product a level space carries: the orthonormal natural basis of
/// V_n, or the same words under the q-inner product (V_{n,q}).
enum class Basis { orthonormal, twisted };

/// Dense matrix of an operator between two level spaces, expressed in the
/// natural word bases of domain and codomain.
struct LevelMatrix {
  int d = 2;
  double q = 0.0;
  int domain_level = 0;
  int codomain_level = 0;
  Basis domain_basis = Basis::orthonormal;
  Basis codomain_basis = Basis::orthonormal;
  Matrix mat;
};

/// d^n as a signed 64-bit count. Throws std::overflow_error past 2^62.
Index ipow(int d, int n);

}  // namespace qfock
