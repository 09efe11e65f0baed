#include "qfock/tower.hpp"

#include "qfock/kernels.hpp"
#include "qfock/linalg.hpp"

#include <Eigen/Cholesky>
#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qfock {

WordSpace WordSpace::full_level(int d, int n) {
  detail::check_dimension(d);
  detail::check_level(n);
  WordSpace s;
  s.d_ = d;
  s.level_ = n;
  s.dim_ = ipow(d, n);
  s.full_ = true;
  const Index slice = n == 0 ? 0 : ipow(d, n - 1);
  for (int a = 1; a <= d; ++a) {
    s.offsets_.push_back((a - 1) * slice);
    s.lengths_.push_back(slice);
  }
  return s;
}

WordSpace WordSpace::block(int d, const MultisetClass& alpha) {
  WordSpace s;
  s.d_ = d;
  s.level_ = alpha.level();
  s.full_ = false;
  s.words_ = block_member_indices(d, s.level_, alpha);
  s.dim_ = static_cast<Index>(s.words_.size());
  Index offset = 0;
  for (int a = 1; a <= d; ++a) {
    Index len = 0;
    if (alpha.counts[static_cast<std::size_t>(a - 1)] > 0) {
      MultisetClass sub = alpha;
      --sub.counts[static_cast<std::size_t>(a - 1)];
      len = sub.dimension();
    }
    s.offsets_.push_back(offset);
    s.lengths_.push_back(len);
    offset += len;
  }
  return s;
}

Index WordSpace::rank(Index g) const {
  if (full_) {
    if (g < 0 || g >= dim_) throw std::logic_error("word index outside level");
    return g;
  }
  auto it = std::lower_bound(words_.begin(), words_.end(), g);
  if (it == words_.end() || *it != g) throw std::logic_error("word not in block");
  return static_cast<Index>(it - words_.begin());
}

namespace {

void check_children(const WordSpace& space, std::span<const Child> children) {
  if (static_cast<int>(children.size()) != space.d()) throw std::invalid_argument("need one child per letter");
}

}  // namespace

Matrix gram_step(const WordSpace& space, std::span<const Child> children, double q) {
  const int n = space.level();
  if (n == 0) return Matrix::Ones(1, 1);
  check_children(space, children);
  const int d = space.d();
  const Index dim = space.dim();
  Matrix g = Matrix::Zero(dim, dim);
  std::vector<int> letters(static_cast<std::size_t>(n)), suffix(static_cast<std::size_t>(n - 1));
  for (Index c = 0; c < dim; ++c) {
    detail::decode(space.global(c), d, letters);
    double coeff = 1.0;
    for (int k = 0; k < n; ++k) {
      const int a = letters[static_cast<std::size_t>(k)];
      std::copy(letters.begin(), letters.begin() + k, suffix.begin());
      std::copy(letters.begin() + k + 1, letters.end(), suffix.begin() + k);
      const Child& ch = children[static_cast<std::size_t>(a - 1)];
      const Index r = ch.space->rank(detail::encode(suffix, d));
      const Index len = space.slice_length(a);
      kernels::axpy(coeff, std::span<const double>(ch.mat->col(r).data(), static_cast<std::size_t>(len)),
                    std::span<double>(g.col(c).data() + space.slice_offset(a), static_cast<std::size_t>(len)));
      coeff *= q;
    }
  }
  return g;
}

Matrix cycle_sum_on(const WordSpace& space, double q) {
  const int n = space.level();
  const Index dim = space.dim();
  Matrix m = Matrix::Zero(dim, dim);
  if (n == 0) return m;
  std::vector<int> letters(static_cast<std::size_t>(n)), rotated(static_cast<std::size_t>(n));
  for (Index c = 0; c < dim; ++c) {
    detail::decode(space.global(c), space.d(), letters);
    double coeff = 1.0;
    for (int k = 0; k < n; ++k) {
      // pi((1 -> k+1)) moves letter k+1 to the front.
      rotated[0] = letters[static_cast<std::size_t>(k)];
      std::copy(letters.begin(), letters.begin() + k, rotated.begin() + 1);
      std::copy(letters.begin() + k + 1, letters.end(), rotated.begin() + k + 1);
      m(space.rank(detail::encode(rotated, space.d())), c) += coeff;
      coeff *= q;
    }
  }
  return m;
}

Matrix lift_first_letter(const WordSpace& space, std::span<const Child> children, const Matrix& right) {
  check_children(space, children);
  if (right.rows() != space.dim()) throw std::invalid_argument("lift_first_letter: row count mismatch");
  Matrix out = Matrix::Zero(right.rows(), right.cols());
  for (int a = 1; a <= space.d(); ++a) {
    const Index len = space.slice_length(a);
    if (len == 0) continue;
    const Index off = space.slice_offset(a);
    out.middleRows(off, len).noalias() = *children[static_cast<std::size_t>(a - 1)].mat * right.middleRows(off, len);
  }
  return out;
}

Matrix tensor_identity_on(const WordSpace& space, std::span<const Child> last_letter_children) {
  check_children(space, last_letter_children);
  const int d = space.d();
  const Index dim = space.dim();
  std::vector<int> last(static_cast<std::size_t>(dim));
  std::vector<Index> prefix_rank(static_cast<std::size_t>(dim));
  for (Index r = 0; r < dim; ++r) {
    const Index g = space.global(r);
    const int a = static_cast<int>(g % d) + 1;
    last[static_cast<std::size_t>(r)] = a;
    prefix_rank[static_cast<std::size_t>(r)] = last_letter_children[static_cast<std::size_t>(a - 1)].space->rank(g / d);
  }
  Matrix out = Matrix::Zero(dim, dim);
  for (Index c = 0; c < dim; ++c) {
    const int a = last[static_cast<std::size_t>(c)];
    const Matrix& x = *last_letter_children[static_cast<std::size_t>(a - 1)].mat;
    for (Index r = 0; r < dim; ++r) {
      if (last[static_cast<std::size_t>(r)] != a) continue;
      out(r, c) = x(prefix_rank[static_cast<std::size_t>(r)], prefix_rank[static_cast<std::size_t>(c)]);
    }
  }
  return out;
}

namespace {

// Gamma = L L^T and S = L^T [M] L^{-T}. [M]^T Gamma = Gamma [M] makes S
// symmetric; anything more than roundoff is a bug.
struct Symmetrized {
  Matrix s;
  Eigen::LLT<Matrix> llt;
  double asym = 0.0;
};

Symmetrized symmetrize(const Matrix& gram, const Matrix& m) {
  if (gram.rows() != m.rows() || m.rows() != m.cols()) throw std::invalid_argument("gram/M shape mismatch");
  Eigen::LLT<Matrix> llt(gram);
  if (llt.info() != Eigen::Success) throw NumericalFault("Gram matrix is not positive definite");
  const auto l = llt.matrixL();
  Matrix mt = m.transpose();
  l.solveInPlace(mt);  // L^{-1} [M]^T = ([M] L^{-T})^T
  Matrix s = llt.matrixU() * mt.transpose();
  const double asym = linalg::asymmetry(s);
  const double scale = std::max(1.0, linalg::max_abs(s));
  if (asym > 1e-6 * scale) throw NumericalFault("Gamma-symmetrized M is not symmetric");
  Matrix sym = 0.5 * (s + s.transpose());
  return {std::move(sym), std::move(llt), asym};
}

}  // namespace

MSqrt m_sqrt_from(const Matrix& gram, const Matrix& m, double tol) {
  Symmetrized sy = symmetrize(gram, m);
  linalg::SymEig e = linalg::sym_eig(sy.s);
  const double top = std::max(std::fabs(e.values(e.values.size() - 1)), std::fabs(e.values(0)));
  Vector root(e.values.size());
  for (Index k = 0; k < e.values.size(); ++k) {
    double v = e.values(k);
    if (v < 0.0) {
      if (v < -tol * std::max(top, 1.0)) throw NumericalFault("M has a negative eigenvalue");
      v = 0.0;
    }
    root(k) = std::sqrt(v);
  }
  Matrix out = e.vectors * root.asDiagonal() * e.vectors.transpose() * sy.llt.matrixU();
  sy.llt.matrixU().solveInPlace(out);  // L^{-T} S^{1/2} L^T
  return {std::move(out), std::move(e.values), sy.asym};
}

Vector m_eigenvalues_from(const Matrix& gram, const Matrix& m) {
  return linalg::sym_eigenvalues(symmetrize(gram, m).s);
}

URBundle ur_from(const WordSpace& space, std::span<const Child> child_u, const Matrix& m_sqrt) {
  if (space.level() == 0) {
    // U_0 Omega = Omega.
    return {Matrix::Ones(1, 1), Matrix::Ones(1, 1), m_sqrt};
  }
  Matrix u = lift_first_letter(space, child_u, m_sqrt);
  Eigen::PartialPivLU<Matrix> lu(u);
  Matrix u_inv = lu.solve(Matrix::Identity(u.rows(), u.cols()));
  Matrix r = u * m_sqrt * u_inv;
  return {std::move(u), std::move(u_inv), std::move(r)};
}

}  // namespace qfock
