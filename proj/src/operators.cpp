#include "qfock/operators.hpp"

#include "qfock/basis.hpp"
#include "qfock/linalg.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qfock {

namespace {

void check_q(double q) {
  if (!(std::fabs(q) < 1.0)) throw std::invalid_argument("|q| must be < 1");
}

// Annihilator and creator matrices of every letter at one level.
struct LevelShifts {
  std::vector<Matrix> down;  // V_i : V_n -> V_{n-1}
  std::vector<Matrix> up;    // V_i^* : V_{n-1} -> V_n

  LevelShifts(int d, int n) {
    for (int i = 1; i <= d; ++i) {
      down.push_back(annihilator_matrix(i, d, n).mat);
      up.push_back(down.back().transpose());
    }
  }
};

// I + q sum_{i,j} V_j^* R_n V_i^* V_j R_n V_i on V_{n+1}, n >= 1.
Matrix fixed_point_rhs(const Matrix& r_n, int d, int n, double q) {
  const LevelShifts top(d, n + 1);
  const LevelShifts mid(d, n);
  const Index dim = ipow(d, n + 1);
  Matrix acc = Matrix::Zero(dim, dim);
  for (int i = 0; i < d; ++i) {
    const Matrix right = r_n * top.down[static_cast<std::size_t>(i)];  // R_n V_i
    for (int j = 0; j < d; ++j) {
      const Matrix inner = mid.up[static_cast<std::size_t>(i)] * (mid.down[static_cast<std::size_t>(j)] * right);
      acc.noalias() += top.up[static_cast<std::size_t>(j)] * (r_n * inner);
    }
  }
  return Matrix::Identity(dim, dim) + q * acc;
}

}  // namespace

FockTower FockTower::build(int d, double q, int n_max, double tol) {
  detail::check_dimension(d);
  detail::check_level(n_max);
  check_q(q);
  FockTower t;
  t.d_ = d;
  t.q_ = q;
  t.levels_.reserve(static_cast<std::size_t>(n_max) + 1);
  for (int n = 0; n <= n_max; ++n) {
    WordSpace space = WordSpace::full_level(d, n);
    std::vector<Child> gram_children, u_children;
    if (n > 0) {
      const Level& prev = t.levels_.back();
      gram_children.assign(static_cast<std::size_t>(d), Child{&prev.space, &prev.gram});
      u_children.assign(static_cast<std::size_t>(d), Child{&prev.space, &prev.ur.u});
    }
    Matrix gram = gram_step(space, gram_children, q);
    Matrix m = cycle_sum_on(space, q);
    MSqrt ms = m_sqrt_from(gram, m, tol);
    URBundle ur = ur_from(space, u_children, ms.m_sqrt);
    t.levels_.push_back(Level{std::move(space), std::move(gram), std::move(m), std::move(ms.m_sqrt),
                              std::move(ms.eigenvalues), std::move(ur)});
  }
  return t;
}

OperatorFamily FockTower::u_family() const {
  OperatorFamily f{d_, q_, Basis::twisted, Basis::orthonormal, {}};
  for (const Level& l : levels_) f.levels.push_back(l.ur.u);
  return f;
}

OperatorFamily FockTower::r_family() const {
  OperatorFamily f{d_, q_, Basis::orthonormal, Basis::orthonormal, {}};
  for (const Level& l : levels_) f.levels.push_back(l.ur.r);
  return f;
}

LevelMatrix gamma_adjoint(const LevelMatrix& x, const GramMatrix* domain_gram, const GramMatrix* codomain_gram) {
  if (domain_gram && domain_gram->mat.rows() != x.mat.cols()) throw std::invalid_argument("domain Gram matrix has wrong size");
  if (codomain_gram && codomain_gram->mat.rows() != x.mat.rows()) {
    throw std::invalid_argument("codomain Gram matrix has wrong size");
  }
  Matrix adj = x.mat.transpose();
  if (codomain_gram) adj = adj * codomain_gram->mat;
  if (domain_gram) {
    Eigen::LLT<Matrix> llt(domain_gram->mat);
    if (llt.info() != Eigen::Success) throw NumericalFault("Gram matrix is not positive definite");
    adj = llt.solve(adj);
  }
  LevelMatrix out = x;
  std::swap(out.domain_level, out.codomain_level);
  std::swap(out.domain_basis, out.codomain_basis);
  out.mat = std::move(adj);
  return out;
}

LevelMatrix m_sqrt(int d, int n, double q) {
  FockTower t = FockTower::build(d, q, n);
  return LevelMatrix{d, q, n, n, Basis::twisted, Basis::twisted, t.m_sqrt(n)};
}

OperatorFamily u_family(int d, int n_max, double q) { return FockTower::build(d, q, n_max).u_family(); }

OperatorFamily r_family(int d, int n_max, double q) { return FockTower::build(d, q, n_max).r_family(); }

OperatorFamily r_family_by_iteration(int d, int n_max, double q, double tol) {
  detail::check_dimension(d);
  if (n_max < 1) throw std::invalid_argument("r_family_by_iteration needs n_max >= 1");
  check_q(q);
  OperatorFamily f{d, q, Basis::orthonormal, Basis::orthonormal, {}};
  f.levels.push_back(Matrix::Zero(1, 1));
  f.levels.push_back(Matrix::Identity(d, d));
  for (int n = 1; n < n_max; ++n) {
    const Matrix rhs = fixed_point_rhs(f.levels.back(), d, n, q);
    f.levels.push_back(linalg::sym_sqrt(rhs, tol));
  }
  return f;
}

std::vector<double> fixed_point_residuals(const OperatorFamily& r) {
  std::vector<double> out;
  for (int n = 1; n < r.n_max(); ++n) {
    const Matrix rhs = fixed_point_rhs(r[n], r.d, n, r.q);
    out.push_back(linalg::max_abs_diff(r[n + 1] * r[n + 1], rhs));
  }
  return out;
}

LevelMatrix t_matrix(int d, int n) {
  detail::check_dimension(d);
  detail::check_level(n);
  const Index dim = ipow(d, n);
  LevelMatrix t{d, 0.0, n, n, Basis::orthonormal, Basis::orthonormal, Matrix::Zero(dim, dim)};
  if (n < 2) return t;
  const LevelShifts top(d, n);
  const LevelShifts low(d, n - 1);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      t.mat.noalias() += top.up[static_cast<std::size_t>(j)] *
                         (low.up[static_cast<std::size_t>(i)] *
                          (low.down[static_cast<std::size_t>(j)] * top.down[static_cast<std::size_t>(i)]));
    }
  }
  return t;
}

double qcr_defect(const FockTower& tower) {
  const int d = tower.d();
  const int n_max = tower.n_max();
  if (n_max < 2) throw std::invalid_argument("qcr_defect needs n_max >= 2");
  double worst = 0.0;
  for (int n = 0; n < n_max; ++n) {
    const LevelShifts top(d, n + 1);
    const Index dim = ipow(d, n);
    const Matrix r_sq = tower.r(n + 1) * tower.r(n + 1);
    const LevelShifts here(d, std::max(n, 1));
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) {
        // B_i B_j^* = V_i R_{n+1}^2 V_j^* on V_n.
        Matrix defect = top.down[static_cast<std::size_t>(i)] * r_sq * top.up[static_cast<std::size_t>(j)];
        if (n >= 1) {
          // B_j^* B_i = R_n V_j^* V_i R_n; zero on the vacuum.
          defect -= tower.q() * (tower.r(n) * here.up[static_cast<std::size_t>(j)]) *
                    (here.down[static_cast<std::size_t>(i)] * tower.r(n));
        }
        if (i == j) defect -= Matrix::Identity(dim, dim);
        worst = std::max(worst, linalg::op_norm(defect));
      }
    }
  }
  return worst;
}

double qcr_defect(int d, int n_max, double q) { return qcr_defect(FockTower::build(d, q, n_max)); }

Matrix twisted_annihilator(int i, int d, int n, double q) {
  detail::check_dimension(d);
  if (i < 1 || i > d) throw std::invalid_argument("annihilator index out of range");
  if (n < 1) throw std::invalid_argument("twisted_annihilator needs n >= 1");
  const Index dim = ipow(d, n);
  Matrix a = Matrix::Zero(dim / d, dim);
  std::vector<int> letters(static_cast<std::size_t>(n)), rest(static_cast<std::size_t>(n - 1));
  for (Index w = 0; w < dim; ++w) {
    detail::decode(w, d, letters);
    double coeff = 1.0;
    for (int k = 0; k < n; ++k, coeff *= q) {
      if (letters[static_cast<std::size_t>(k)] != i) continue;
      std::copy(letters.begin(), letters.begin() + k, rest.begin());
      std::copy(letters.begin() + k + 1, letters.end(), rest.begin() + k);
      a(detail::encode(rest, d), w) += coeff;
    }
  }
  return a;
}

namespace {

// [A_i^*] : V_{n,q} -> V_{n+1,q}, xi_{i1}...xi_{in} -> xi_i xi_{i1}...xi_{in}.
Matrix twisted_creator(int i, int d, int n) {
  const Index dim = ipow(d, n);
  Matrix a = Matrix::Zero(dim * d, dim);
  std::vector<int> letters(static_cast<std::size_t>(n) + 1);
  for (Index w = 0; w < dim; ++w) {
    letters[0] = i;
    detail::decode(w, d, std::span<int>(letters).subspan(1));
    a(detail::encode(letters, d), w) = 1.0;
  }
  return a;
}

}  // namespace

double intertwining_defect(const FockTower& tower) {
  const int d = tower.d();
  const int n_max = tower.n_max();
  if (n_max < 1) throw std::invalid_argument("intertwining_defect needs n_max >= 1");
  double worst = 0.0;
  for (int n = 0; n < n_max; ++n) {
    const LevelShifts top(d, n + 1);
    for (int i = 1; i <= d; ++i) {
      const Matrix a_star = twisted_creator(i, d, n);
      const Matrix dressed = tower.m_sqrt(n + 1) * tower.u_inv(n + 1) * top.up[static_cast<std::size_t>(i - 1)] * tower.u(n);
      worst = std::max(worst, linalg::op_norm(a_star - dressed));

      const Matrix a = twisted_annihilator(i, d, n + 1, tower.q());
      const Matrix lhs = tower.u(n) * a * tower.u_inv(n + 1);
      const Matrix rhs = top.down[static_cast<std::size_t>(i - 1)] * tower.r(n + 1);
      worst = std::max(worst, linalg::op_norm(lhs - rhs));
    }
  }
  return worst;
}

double intertwining_defect(int d, int n_max, double q) { return intertwining_defect(FockTower::build(d, q, n_max)); }

double commutant_defect(const OperatorFamily& r) {
  const int d = r.d;
  double worst = 0.0;
  for (int n = 1; n < r.n_max(); ++n) {
    const LevelShifts top(d, n + 1);
    const Matrix lifted = linalg::block_diag(r[n], d);  // I (x) R_n on V_{n+1}
    for (int i = 0; i < d; ++i) {
      const Matrix& down = top.down[static_cast<std::size_t>(i)];
      const Matrix& up = top.up[static_cast<std::size_t>(i)];
      worst = std::max(worst, linalg::op_norm(r[n] * down - down * lifted));
      worst = std::max(worst, linalg::op_norm(up * r[n] - lifted * up));
    }
  }
  return worst;
}

}  // namespace qfock
