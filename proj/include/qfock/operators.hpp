#pragma once

// The positive operator M = sum_i A_i^* A_i on the twisted Fock space, its
// square root, the canonical unitary U: T_q -> T built level by level as
// U_n = (I (x) U_{n-1}) M_n^{1/2}, and R = U M^{1/2} U^* on the untwisted Fock
// space. R is also obtained independently as the positive solution of the
// level recursion R_{n+1}^2 = I + q sum_{i,j} V_j^* R_n V_i^* V_j R_n V_i, and
// the identities tying these together are exposed as defect measurements.

#include "qfock/gram.hpp"
#include "qfock/tower.hpp"
#include "qfock/types.hpp"

#include <vector>

namespace qfock {

/// Per-level matrices X_0, ..., X_{n_max} of a level-preserving operator.
struct OperatorFamily {
  int d = 2;
  double q = 0.0;
  Basis domain_basis = Basis::orthonormal;
  Basis codomain_basis = Basis::orthonormal;
  std::vector<Matrix> levels;

  int n_max() const { return static_cast<int>(levels.size()) - 1; }
  const Matrix& operator[](int n) const { return levels.at(static_cast<std::size_t>(n)); }
};

/// Everything the dense route computes for levels 0..n_max, built once.
class FockTower {
 public:
  static FockTower build(int d, double q, int n_max, double tol = 1e-10);

  int d() const { return d_; }
  double q() const { return q_; }
  int n_max() const { return static_cast<int>(levels_.size()) - 1; }

  const WordSpace& space(int n) const { return at(n).space; }
  const Matrix& gram(int n) const { return at(n).gram; }
  const Matrix& m(int n) const { return at(n).m; }
  const Matrix& m_sqrt(int n) const { return at(n).m_sqrt; }
  const Vector& m_eigenvalues(int n) const { return at(n).eigenvalues; }
  const Matrix& u(int n) const { return at(n).ur.u; }
  const Matrix& u_inv(int n) const { return at(n).ur.u_inv; }
  const Matrix& r(int n) const { return at(n).ur.r; }

  OperatorFamily u_family() const;
  OperatorFamily r_family() const;

 private:
  struct Level {
    WordSpace space;
    Matrix gram;
    Matrix m;
    Matrix m_sqrt;
    Vector eigenvalues;
    URBundle ur;
  };
  const Level& at(int n) const { return levels_.at(static_cast<std::size_t>(n)); }

  int d_ = 2;
  double q_ = 0.0;
  std::vector<Level> levels_;
};

/// Matrix of X^* from the matrix of X : dom -> cod. A null Gram pointer means
/// that side carries the orthonormal natural basis; otherwise
/// [X^*] = Gamma_dom^{-1} [X]^T Gamma_cod.
LevelMatrix gamma_adjoint(const LevelMatrix& x, const GramMatrix* domain_gram, const GramMatrix* codomain_gram);

/// [M_n^{1/2}] on V_{n,q}; [0] at n = 0.
LevelMatrix m_sqrt(int d, int n, double q);

OperatorFamily u_family(int d, int n_max, double q);
OperatorFamily r_family(int d, int n_max, double q);

/// R from R_0 = 0, R_1 = I and the fixed-point recursion, each level the
/// symmetric PSD root of the right-hand side. Throws NumericalFault if a
/// right-hand side fails to be PSD within tol.
OperatorFamily r_family_by_iteration(int d, int n_max, double q, double tol = 1e-10);

/// Per-level residual ||R_{n+1}^2 - I - q sum V_j^* R_n V_i^* V_j R_n V_i||_max
/// for n = 1 .. n_max - 1 (entry k is level k + 2).
std::vector<double> fixed_point_residuals(const OperatorFamily& r);

/// Matrix of T = sum_{i,j} V_j^* V_i^* V_j V_i on V_n (swap of the first two
/// letters); zero for n < 2.
LevelMatrix t_matrix(int d, int n);

/// max over i, j and levels 0 <= n <= n_max - 1 of the operator norm of
/// B_i B_j^* - q B_j^* B_i - delta_{ij} I on V_n, with B_i = V_i R.
double qcr_defect(const FockTower& tower);
double qcr_defect(int d, int n_max, double q);

/// Largest deviation, over i and levels n <= n_max - 1, in the two forms of
/// U A_i U^* = V_i R: [A_i^*] against [M^{1/2}][U_{n+1}]^{-1}[V_i^*][U_n], and
/// [U_n][A_i][U_{n+1}]^{-1} against [V_i][R_{n+1}], with A_i built from its
/// action on words.
double intertwining_defect(const FockTower& tower);
double intertwining_defect(int d, int n_max, double q);

/// Natural-basis matrix of the twisted annihilator A_i : V_{n,q} -> V_{n-1,q},
/// A_i(xi_{i1}...xi_{in}) = sum_k q^{k-1} delta_{i,ik} (word without letter k).
Matrix twisted_annihilator(int i, int d, int n, double q);

/// max over levels and i of the operator norms of R_n V_i - V_i (I (x) R_n) and
/// V_i^* R_n - (I (x) R_n) V_i^*, both maps between V_{n+1} and V_n, for
/// n = 1 .. n_max - 1.
double commutant_defect(const OperatorFamily& r);

}  // namespace qfock
