#pragma once

// Multiset-class block decomposition. Gamma_n, M_n, U_n and R_n all preserve the
// letter counts of a word, so each level splits into blocks V_alpha whose
// dimension is a multinomial coefficient instead of d^n. BlockTower computes the
// per-block matrices by the same first-letter recursion as the dense tower,
// memoizing each block once per (d, q).

#include "qfock/basis.hpp"
#include "qfock/tower.hpp"
#include "qfock/types.hpp"

#include <map>
#include <memory>
#include <optional>
#include <vector>

namespace qfock {

class BlockTower {
 public:
  BlockTower(int d, double q, double tol = 1e-10);

  int d() const { return d_; }
  double q() const { return q_; }

  const WordSpace& space(const MultisetClass& alpha);
  const Matrix& gram(const MultisetClass& alpha);
  const Matrix& cycle_sum(const MultisetClass& alpha);
  /// Eigenvalues of M restricted to the block, ascending.
  const Vector& m_eigenvalues(const MultisetClass& alpha);
  const Matrix& m_sqrt(const MultisetClass& alpha);
  const Matrix& u(const MultisetClass& alpha);
  const Matrix& r(const MultisetClass& alpha);

  /// Smallest eigenvalue of M_n, the minimum over the blocks of level n >= 1.
  double level_alpha(int n);

  /// ||(R_n (x) I) - R_{n+1}||, the maximum over the blocks of level n + 1.
  double iterate_distance(int n);

  /// Largest block dimension formed so far.
  Index peak_dim() const { return peak_dim_; }
  /// Entries of the Gram and cycle-sum matrices formed so far.
  Index entries() const { return entries_; }

 private:
  struct Node {
    WordSpace space;
    std::optional<Matrix> gram;
    std::optional<Matrix> m;
    std::optional<Vector> eig;
    std::optional<Matrix> m_sqrt;
    std::optional<URBundle> ur;
  };

  Node& node(const MultisetClass& alpha);
  std::vector<Child> first_letter_children(const MultisetClass& alpha, const Matrix& (BlockTower::*get)(const MultisetClass&));

  int d_;
  double q_;
  double tol_;
  std::map<std::vector<int>, std::unique_ptr<Node>> nodes_;
  Index peak_dim_ = 0;
  Index entries_ = 0;
};

}  // namespace qfock
