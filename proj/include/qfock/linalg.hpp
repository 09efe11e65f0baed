#pragma once

// Dense helpers shared by the modules: symmetric eigensolves and functions of
// symmetric matrices, norms, and the two tensor-with-identity layouts.

#include "qfock/types.hpp"

namespace qfock::linalg {

struct SymEig {
  Vector values;  // ascending
  Matrix vectors;
};

/// Eigendecomposition of the symmetric part (A + A^T)/2.
SymEig sym_eig(const Matrix& a);

/// Eigenvalues of the symmetric part, ascending.
Vector sym_eigenvalues(const Matrix& a);

/// Positive square root of a symmetric PSD matrix. Eigenvalues in
/// [-tol * lambda_max, 0) are roundoff and clamped to 0; anything more negative
/// throws NumericalFault.
Matrix sym_sqrt(const Matrix& a, double tol = 1e-10);

/// Square root and inverse square root of a symmetric positive definite matrix
/// from one eigendecomposition. Throws NumericalFault if not positive definite.
struct SqrtPair {
  Matrix sqrt;
  Matrix inv_sqrt;
};
SqrtPair sym_sqrt_pair(const Matrix& a);

/// Largest |eigenvalue| of the symmetric part.
double op_norm_sym(const Matrix& a);

/// Largest singular value.
double op_norm(const Matrix& a);

/// Smallest singular value.
double min_singular_value(const Matrix& a);

/// Entrywise max |a - b|; throws std::invalid_argument on shape mismatch.
double max_abs_diff(const Matrix& a, const Matrix& b);

double max_abs(const Matrix& a);

/// max |A - A^T|
double asymmetry(const Matrix& a);

/// I_copies (x) X: `copies` diagonal copies of X (acting on all but the first letter).
Matrix block_diag(const Matrix& x, int copies);

/// X (x) I_d: X acts on all but the last letter.
Matrix kron_identity_right(const Matrix& x, int d);

}  // namespace qfock::linalg
