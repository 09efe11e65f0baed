#pragma once

// Permutations of {1..n}, their inversion count, the cycles (k -> l), and the
// position-permuting action pi_{n,q} on words of length n.

#include "qfock/types.hpp"

#include <vector>

namespace qfock {

/// Element of S_n stored by its images s(1), ..., s(n). Composition is
/// (s * t)(x) = s(t(x)).
class Permutation {
 public:
  static Permutation identity(int n);
  /// Throws std::invalid_argument unless `images` is a bijection of {1..n}.
  static Permutation from_images(std::vector<int> images);

  int size() const { return static_cast<int>(images_.size()); }
  int operator()(int x) const { return images_[static_cast<std::size_t>(x - 1)]; }
  const std::vector<int>& images() const { return images_; }
  int inversions() const { return inv_; }
  Permutation inverse() const;

  friend Permutation operator*(const Permutation& s, const Permutation& t);
  bool operator==(const Permutation& o) const { return images_ == o.images_; }

 private:
  explicit Permutation(std::vector<int> images);
  std::vector<int> images_;
  int inv_ = 0;
};

/// k -> k+1 -> ... -> l -> k; the identity when k == l.
Permutation cycle(int k, int l, int n);

int inversions(const Permutation& s);

/// All n! permutations in lexicographic order of their image sequences.
std::vector<Permutation> all_permutations(int n);

/// Index of pi(s) applied to the word with index `word`: the letter in
/// position m moves to position s(m).
Index permute_word_index(const Permutation& s, Index word, int d);

/// 0/1 matrix of pi_{n,q}(s) on the natural basis; independent of q.
LevelMatrix permutation_matrix(const Permutation& s, int d);

struct Decomposition {
  Permutation t;  // t(1) == 1
  int k;          // s = t * (1 -> k)
};

/// The unique factorization s = t (1 -> k) with t(1) = 1;
/// inv(s) = inv(t) + k - 1.
Decomposition canonical_decomposition(const Permutation& s);

/// [M_n] = sum_k q^{k-1} pi((1 -> k)) in the natural basis. n >= 1.
LevelMatrix cycle_sum_matrix(int d, int n, double q);

/// Operator norm of the difference between the cycle sum and the product form
///   prod_{j=0}^{n-2} (I - q^{n-j} (2 -> n-j)) prod_{j=1}^{n-1} (I - q^j (1 -> j+1))^{-1}
/// evaluated as matrices on V_n. Inverse factors use dense LU solves. n >= 2.
double factorization_residual(int d, int n, double q);

}  // namespace qfock
