#pragma once

// Level recursion shared by the dense tower (one space per level V_n) and the
// block tower (one space per multiset class V_alpha).
//
// A WordSpace is a lexicographically ordered set of words of one length, closed
// under moving a letter to the front. Its words beginning with letter a form a
// contiguous slice, and the suffixes of that slice are exactly the words of a
// child space one level down (V_{n-1} for a full level, V_{alpha - e_a} for a
// block). Every recursion here is "block diagonal over first-letter slices"
// composed with a dense factor.

#include "qfock/basis.hpp"
#include "qfock/types.hpp"

#include <span>
#include <vector>

namespace qfock {

class WordSpace {
 public:
  /// All d^n words of length n.
  static WordSpace full_level(int d, int n);
  /// Words of class alpha.
  static WordSpace block(int d, const MultisetClass& alpha);

  int d() const { return d_; }
  int level() const { return level_; }
  Index dim() const { return dim_; }
  bool is_full() const { return full_; }

  /// Global word_index of the word at position `r`.
  Index global(Index r) const { return full_ ? r : words_[static_cast<std::size_t>(r)]; }
  /// Position of the word with global index `g`; throws std::logic_error if absent.
  Index rank(Index g) const;

  /// Row offset of the slice of words starting with `letter` (1-based).
  Index slice_offset(int letter) const { return offsets_[static_cast<std::size_t>(letter - 1)]; }
  Index slice_length(int letter) const { return lengths_[static_cast<std::size_t>(letter - 1)]; }

 private:
  int d_ = 2;
  int level_ = 0;
  Index dim_ = 1;
  bool full_ = true;
  std::vector<Index> words_;
  std::vector<Index> offsets_;
  std::vector<Index> lengths_;
};

/// Child space and matrix attached to one first-letter slice. `space` is null
/// for letters that do not occur.
struct Child {
  const WordSpace* space = nullptr;
  const Matrix* mat = nullptr;
};

/// Gamma = diag_a(Gamma_child(a)) [M] on `space`, accumulated column by column:
/// column w receives q^{k-1} Gamma_child(w_k)(:, w with letter k removed) in the
/// slice of letter w_k. `children` is indexed by letter - 1.
Matrix gram_step(const WordSpace& space, std::span<const Child> children, double q);

/// [M] = sum_k q^{k-1} pi((1 -> k)) restricted to `space`; zero at level 0.
Matrix cycle_sum_on(const WordSpace& space, double q);

/// diag_a(X_child(a)) * right, where `right` has space.dim() rows.
Matrix lift_first_letter(const WordSpace& space, std::span<const Child> children, const Matrix& right);

/// Restriction of (X (x) I) to `space` (level n+1): the entry between words
/// (u, a) and (w, b) is delta_{ab} X_child(a)(u, w), where the children are
/// indexed by the LAST letter and are spaces of level n.
Matrix tensor_identity_on(const WordSpace& space, std::span<const Child> last_letter_children);

/// Smallest eigenvalue and positive square root of the operator with natural
/// basis matrix `m` on a space with Gram matrix `gram`, via the symmetric
/// similarity transform S = Gamma^{1/2} [M] Gamma^{-1/2}.
struct MSqrt {
  Matrix m_sqrt;
  Vector eigenvalues;  // of M, ascending
  double symmetrization_error = 0.0;  // max |S - S^T| before symmetrizing
};
MSqrt m_sqrt_from(const Matrix& gram, const Matrix& m, double tol);

/// Eigenvalues of M (ascending) by the same similarity, without forming the root.
Vector m_eigenvalues_from(const Matrix& gram, const Matrix& m);

/// U = diag_a(U_child(a)) [M^{1/2}], its inverse by LU solve, and
/// R = U [M^{1/2}] U^{-1}.
struct URBundle {
  Matrix u;
  Matrix u_inv;
  Matrix r;
};
URBundle ur_from(const WordSpace& space, std::span<const Child> child_u, const Matrix& m_sqrt);

}  // namespace qfock
