#include "qfock/linalg.hpp"

#include "qfock/kernels.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace qfock::linalg {

namespace {

std::span<const double> view(const Matrix& m) {
  return {m.data(), static_cast<std::size_t>(m.size())};
}

}  // namespace

SymEig sym_eig(const Matrix& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("sym_eig: matrix not square");
  if (a.size() == 0) return {};
  const Matrix s = 0.5 * (a + a.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> es(s);
  if (es.info() != Eigen::Success) throw NumericalFault("symmetric eigensolve did not converge");
  return {es.eigenvalues(), es.eigenvectors()};
}

Vector sym_eigenvalues(const Matrix& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("sym_eigenvalues: matrix not square");
  if (a.size() == 0) return {};
  const Matrix s = 0.5 * (a + a.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> es(s, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalFault("symmetric eigensolve did not converge");
  return es.eigenvalues();
}

Matrix sym_sqrt(const Matrix& a, double tol) {
  if (a.size() == 0) return a;
  SymEig e = sym_eig(a);
  const double top = std::max(e.values.cwiseAbs().maxCoeff(), 0.0);
  Vector root(e.values.size());
  for (Index k = 0; k < e.values.size(); ++k) {
    double v = e.values(k);
    if (v < 0.0) {
      if (v < -tol * top) {
        std::ostringstream msg;
        msg << "matrix is not positive semidefinite: eigenvalue " << v << " (largest " << top << ")";
        throw NumericalFault(msg.str());
      }
      v = 0.0;
    }
    root(k) = std::sqrt(v);
  }
  return e.vectors * root.asDiagonal() * e.vectors.transpose();
}

SqrtPair sym_sqrt_pair(const Matrix& a) {
  if (a.size() == 0) return {a, a};
  SymEig e = sym_eig(a);
  if (!(e.values(0) > 0.0)) {
    std::ostringstream msg;
    msg << "matrix is not positive definite: smallest eigenvalue " << e.values(0);
    throw NumericalFault(msg.str());
  }
  const Vector root = e.values.cwiseSqrt();
  return {e.vectors * root.asDiagonal() * e.vectors.transpose(),
          e.vectors * root.cwiseInverse().asDiagonal() * e.vectors.transpose()};
}

double op_norm_sym(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  const Vector v = sym_eigenvalues(a);
  return std::max(std::fabs(v(0)), std::fabs(v(v.size() - 1)));
}

double op_norm(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  const Matrix g = a.rows() >= a.cols() ? Matrix(a.transpose() * a) : Matrix(a * a.transpose());
  const Vector v = sym_eigenvalues(g);
  return std::sqrt(std::max(v(v.size() - 1), 0.0));
}

double min_singular_value(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues()(svd.singularValues().size() - 1);
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    std::ostringstream msg;
    msg << "shape mismatch: " << a.rows() << "x" << a.cols() << " vs " << b.rows() << "x" << b.cols();
    throw std::invalid_argument(msg.str());
  }
  return kernels::max_abs_diff(view(a), view(b));
}

double max_abs(const Matrix& a) { return kernels::max_abs(view(a)); }

double asymmetry(const Matrix& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("asymmetry: matrix not square");
  const Matrix t = a.transpose();
  return max_abs_diff(a, t);
}

Matrix block_diag(const Matrix& x, int copies) {
  Matrix out = Matrix::Zero(x.rows() * copies, x.cols() * copies);
  for (int c = 0; c < copies; ++c) out.block(c * x.rows(), c * x.cols(), x.rows(), x.cols()) = x;
  return out;
}

Matrix kron_identity_right(const Matrix& x, int d) {
  Matrix out = Matrix::Zero(x.rows() * d, x.cols() * d);
  for (Index r = 0; r < x.rows(); ++r) {
    for (Index c = 0; c < x.cols(); ++c) {
      const double v = x(r, c);
      if (v == 0.0) continue;
      for (int a = 0; a < d; ++a) out(r * d + a, c * d + a) = v;
    }
  }
  return out;
}

}  // namespace qfock::linalg
