#include "qfock/symgroup.hpp"

#include "qfock/basis.hpp"
#include "qfock/linalg.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace qfock {

namespace {

int count_inversions(const std::vector<int>& s) {
  int inv = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (std::size_t j = i + 1; j < s.size(); ++j) {
      if (s[i] > s[j]) ++inv;
    }
  }
  return inv;
}

}  // namespace

Permutation::Permutation(std::vector<int> images) : images_(std::move(images)), inv_(count_inversions(images_)) {}

Permutation Permutation::identity(int n) {
  if (n < 0) throw std::invalid_argument("permutation size must be >= 0");
  std::vector<int> im(static_cast<std::size_t>(n));
  std::iota(im.begin(), im.end(), 1);
  return Permutation(std::move(im));
}

Permutation Permutation::from_images(std::vector<int> images) {
  std::vector<bool> seen(images.size() + 1, false);
  for (int v : images) {
    if (v < 1 || v > static_cast<int>(images.size()) || seen[static_cast<std::size_t>(v)]) {
      throw std::invalid_argument("images do not form a permutation");
    }
    seen[static_cast<std::size_t>(v)] = true;
  }
  return Permutation(std::move(images));
}

Permutation Permutation::inverse() const {
  std::vector<int> inv(images_.size());
  for (std::size_t x = 0; x < images_.size(); ++x) inv[static_cast<std::size_t>(images_[x] - 1)] = static_cast<int>(x) + 1;
  return Permutation(std::move(inv));
}

Permutation operator*(const Permutation& s, const Permutation& t) {
  if (s.size() != t.size()) throw std::invalid_argument("composing permutations of different sizes");
  std::vector<int> im(t.images_.size());
  for (std::size_t x = 0; x < im.size(); ++x) im[x] = s(t.images_[x]);
  return Permutation(std::move(im));
}

Permutation cycle(int k, int l, int n) {
  if (k < 1 || k > l || l > n) {
    throw std::invalid_argument("cycle (" + std::to_string(k) + " -> " + std::to_string(l) + ") invalid in S_" + std::to_string(n));
  }
  std::vector<int> im(static_cast<std::size_t>(n));
  std::iota(im.begin(), im.end(), 1);
  for (int x = k; x < l; ++x) im[static_cast<std::size_t>(x - 1)] = x + 1;
  im[static_cast<std::size_t>(l - 1)] = k;
  return Permutation::from_images(std::move(im));
}

int inversions(const Permutation& s) { return s.inversions(); }

std::vector<Permutation> all_permutations(int n) {
  std::vector<int> im(static_cast<std::size_t>(n));
  std::iota(im.begin(), im.end(), 1);
  std::vector<Permutation> out;
  do {
    out.push_back(Permutation::from_images(im));
  } while (std::next_permutation(im.begin(), im.end()));
  return out;
}

Index permute_word_index(const Permutation& s, Index word, int d) {
  const int n = s.size();
  std::vector<int> in(static_cast<std::size_t>(n)), out(static_cast<std::size_t>(n));
  detail::decode(word, d, in);
  for (int m = 1; m <= n; ++m) out[static_cast<std::size_t>(s(m) - 1)] = in[static_cast<std::size_t>(m - 1)];
  return detail::encode(out, d);
}

LevelMatrix permutation_matrix(const Permutation& s, int d) {
  detail::check_dimension(d);
  const int n = s.size();
  const Index dim = ipow(d, n);
  LevelMatrix p{d, 0.0, n, n, Basis::twisted, Basis::twisted, Matrix::Zero(dim, dim)};
  for (Index w = 0; w < dim; ++w) p.mat(permute_word_index(s, w, d), w) = 1.0;
  return p;
}

Decomposition canonical_decomposition(const Permutation& s) {
  const int n = s.size();
  if (n == 0) return {s, 1};
  // s(k) = t((1 -> k)(k)) = t(1) = 1 forces k = s^{-1}(1).
  int k = 1;
  while (s(k) != 1) ++k;
  Permutation t = s * cycle(1, k, n).inverse();
  return {std::move(t), k};
}

LevelMatrix cycle_sum_matrix(int d, int n, double q) {
  detail::check_dimension(d);
  if (n < 1) throw std::invalid_argument("cycle_sum_matrix needs n >= 1");
  const Index dim = ipow(d, n);
  LevelMatrix m{d, q, n, n, Basis::twisted, Basis::twisted, Matrix::Zero(dim, dim)};
  double coeff = 1.0;
  for (int k = 1; k <= n; ++k) {
    const Permutation c = cycle(1, k, n);
    for (Index w = 0; w < dim; ++w) m.mat(permute_word_index(c, w, d), w) += coeff;
    coeff *= q;
  }
  return m;
}

double factorization_residual(int d, int n, double q) {
  if (n < 2) throw std::invalid_argument("factorization_residual needs n >= 2");
  if (!(std::fabs(q) < 1.0)) throw std::invalid_argument("|q| must be < 1");
  const Matrix lhs = cycle_sum_matrix(d, n, q).mat;
  const Index dim = lhs.rows();
  const Matrix id = Matrix::Identity(dim, dim);

  Matrix rhs = id;
  for (int j = 0; j <= n - 2; ++j) {
    rhs = rhs * (id - std::pow(q, n - j) * permutation_matrix(cycle(2, n - j, n), d).mat);
  }
  for (int j = 1; j <= n - 1; ++j) {
    const Matrix factor = id - std::pow(q, j) * permutation_matrix(cycle(1, j + 1, n), d).mat;
    Eigen::PartialPivLU<Matrix> lu(factor.transpose());
    if (!(lu.rcond() > 1e-14)) throw NumericalFault("singular factor I - q^j (1 -> j+1)");
    // rhs * factor^{-1} = (factor^{-T} rhs^T)^T
    rhs = lu.solve(rhs.transpose()).transpose();
  }
  return linalg::op_norm(lhs - rhs);
}

}  // namespace qfock
