#include "qfock/operators.hpp"

#include "qfock/basis.hpp"
#include "qfock/linalg.hpp"
#include "qfock/spectral.hpp"
#include "qfock/symgroup.hpp"

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

using namespace qfock;

namespace {

const double kGrid[] = {-0.9, -0.5, -0.3, 0.0, 0.3, 0.5, 0.9};

Matrix flip() { return permutation_matrix(cycle(1, 2, 2), 2).mat; }

// xi_{i1}...xi_{in} -> xi_i xi_{i1}...xi_{in}, built from word indices.
Matrix prepend(int i, int d, int n) {
  const Index dim = ipow(d, n);
  Matrix a = Matrix::Zero(dim * d, dim);
  for (Index w = 0; w < dim; ++w) {
    Word word = word_at(w, d, n);
    word.letters.insert(word.letters.begin(), i);
    a(word_index(word, d), w) = 1.0;
  }
  return a;
}

std::vector<double> sorted_real_eigenvalues(const Matrix& m) {
  Eigen::EigenSolver<Matrix> es(m);
  std::vector<double> out;
  for (Index k = 0; k < m.rows(); ++k) {
    EXPECT_LT(std::fabs(es.eigenvalues()(k).imag()), 1e-12);
    out.push_back(es.eigenvalues()(k).real());
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST(GammaAdjoint, QZeroIsTranspose) {
  const GramMatrix g = gram_by_recursion(2, 2, 0.0);
  LevelMatrix x{2, 0.0, 2, 2, Basis::twisted, Basis::twisted, Matrix::Random(4, 4)};
  EXPECT_LT(linalg::max_abs_diff(gamma_adjoint(x, &g, &g).mat, x.mat.transpose()), 1e-15);
  EXPECT_EQ(gamma_adjoint(x, nullptr, nullptr).mat, x.mat.transpose());
}

TEST(GammaAdjoint, CycleSumIsSelfAdjoint) {
  const GramMatrix g = gram_by_recursion(2, 2, 0.5);
  const LevelMatrix m = cycle_sum_matrix(2, 2, 0.5);
  LevelMatrix x = m;
  x.domain_basis = x.codomain_basis = Basis::twisted;
  EXPECT_LT(linalg::max_abs_diff(gamma_adjoint(x, &g, &g).mat, m.mat), 1e-12);
  for (int n = 3; n <= 5; ++n) {
    const GramMatrix gn = gram_by_recursion(3, n, -0.7);
    LevelMatrix mn = cycle_sum_matrix(3, n, -0.7);
    EXPECT_LT(linalg::max_abs_diff(gamma_adjoint(mn, &gn, &gn).mat, mn.mat), 1e-11);
  }
}

TEST(GammaAdjoint, Involution) {
  const GramMatrix g2 = gram_by_recursion(2, 2, 0.6);
  const GramMatrix g3 = gram_by_recursion(2, 3, 0.6);
  LevelMatrix x{2, 0.6, 2, 3, Basis::twisted, Basis::twisted, Matrix::Random(8, 4)};
  const LevelMatrix adj = gamma_adjoint(x, &g2, &g3);
  EXPECT_EQ(adj.domain_level, 3);
  EXPECT_EQ(adj.codomain_level, 2);
  EXPECT_LT(linalg::max_abs_diff(gamma_adjoint(adj, &g3, &g2).mat, x.mat), 1e-12);
}

TEST(GammaAdjoint, DimensionMismatch) {
  const GramMatrix g = gram_by_recursion(2, 2, 0.5);
  LevelMatrix x{2, 0.5, 3, 3, Basis::twisted, Basis::twisted, Matrix::Identity(8, 8)};
  EXPECT_THROW(gamma_adjoint(x, &g, nullptr), std::invalid_argument);
  EXPECT_THROW(gamma_adjoint(x, nullptr, &g), std::invalid_argument);
}

TEST(GammaAdjoint, CreatorAdjointIsTwistedAnnihilator) {
  for (double q : kGrid) {
    for (int n = 0; n <= 3; ++n) {
      const GramMatrix lo = gram_by_recursion(3, n, q);
      const GramMatrix hi = gram_by_recursion(3, n + 1, q);
      for (int i = 1; i <= 3; ++i) {
        LevelMatrix a_star{3, q, n, n + 1, Basis::twisted, Basis::twisted, prepend(i, 3, n)};
        const Matrix adj = gamma_adjoint(a_star, &lo, &hi).mat;
        EXPECT_LT(linalg::max_abs_diff(adj, twisted_annihilator(i, 3, n + 1, q)), 1e-11) << q << " " << n << " " << i;
      }
    }
  }
}

TEST(TwistedAnnihilator, ByHand) {
  // A_1 (1,2,1) = (2,1) + q^2 (1,2)
  const double q = 0.3;
  const Matrix a = twisted_annihilator(1, 2, 3, q);
  const Index src = word_index(Word{{1, 2, 1}}, 2);
  EXPECT_DOUBLE_EQ(a(word_index(Word{{2, 1}}, 2), src), 1.0);
  EXPECT_DOUBLE_EQ(a(word_index(Word{{1, 2}}, 2), src), q * q);
  EXPECT_EQ(a.col(src).cwiseAbs().sum(), 1.0 + q * q);
  EXPECT_THROW(twisted_annihilator(1, 2, 0, q), std::invalid_argument);
}

TEST(MSqrt, LevelOneIdentity) {
  for (double q : kGrid) EXPECT_LT(linalg::max_abs_diff(m_sqrt(3, 1, q).mat, Matrix::Identity(3, 3)), 1e-15);
}

TEST(MSqrt, SquaresToCycleSum) {
  const LevelMatrix r = m_sqrt(2, 2, 0.5);
  EXPECT_EQ(r.domain_basis, Basis::twisted);
  EXPECT_LT(linalg::max_abs_diff(r.mat * r.mat, cycle_sum_matrix(2, 2, 0.5).mat), 1e-12);
  for (int n = 3; n <= 5; ++n) {
    for (double q : kGrid) {
      const Matrix s = m_sqrt(2, n, q).mat;
      EXPECT_LT(linalg::max_abs_diff(s * s, cycle_sum_matrix(2, n, q).mat), 1e-11) << n << " " << q;
    }
  }
}

TEST(MSqrt, LevelTwoEigenvalues) {
  for (double q : {-0.8, 0.25, 0.6}) {
    const auto ev = sorted_real_eigenvalues(m_sqrt(2, 2, q).mat);
    const double lo = std::sqrt(1.0 - std::fabs(q));
    const double hi = std::sqrt(1.0 + std::fabs(q));
    if (q > 0) {
      EXPECT_NEAR(ev[0], lo, 1e-12);
      for (int k = 1; k < 4; ++k) EXPECT_NEAR(ev[static_cast<std::size_t>(k)], hi, 1e-12);
    } else {
      // 1 + q flip at q < 0: 1 + q on the symmetric part (3), 1 - q on the antisymmetric (1).
      for (int k = 0; k < 3; ++k) EXPECT_NEAR(ev[static_cast<std::size_t>(k)], lo, 1e-12);
      EXPECT_NEAR(ev[3], hi, 1e-12);
    }
  }
}

TEST(MSqrt, GammaSelfAdjoint) {
  for (double q : kGrid) {
    const FockTower t = FockTower::build(2, q, 5);
    for (int n = 1; n <= 5; ++n) {
      const Matrix gs = t.gram(n) * t.m_sqrt(n);
      EXPECT_LT(linalg::asymmetry(gs), 1e-11 * std::max(1.0, linalg::max_abs(gs)));
    }
  }
}

TEST(UFamily, BaseLevels) {
  const OperatorFamily u = u_family(3, 2, 0.4);
  EXPECT_EQ(u.domain_basis, Basis::twisted);
  EXPECT_EQ(u.codomain_basis, Basis::orthonormal);
  EXPECT_EQ(u[0], Matrix::Ones(1, 1));
  EXPECT_LT(linalg::max_abs_diff(u[1], Matrix::Identity(3, 3)), 1e-15);
}

TEST(UFamily, Unitarity) {
  const OperatorFamily u = u_family(2, 2, 0.5);
  EXPECT_LT(linalg::max_abs_diff(u[2].transpose() * u[2], gram_by_recursion(2, 2, 0.5).mat), 1e-12);
  for (int d = 2; d <= 3; ++d) {
    for (double q : kGrid) {
      const FockTower t = FockTower::build(d, q, d == 2 ? 6 : 5);
      for (int n = 0; n <= t.n_max(); ++n) {
        EXPECT_LT(linalg::max_abs_diff(t.u(n).transpose() * t.u(n), t.gram(n)), 1e-10) << d << " " << q << " " << n;
      }
    }
  }
}

TEST(UFamily, QZeroIdentity) {
  const OperatorFamily u = u_family(2, 5, 0.0);
  for (int n = 0; n <= 5; ++n) EXPECT_EQ(u[n], Matrix::Identity(ipow(2, n), ipow(2, n)));
}

TEST(UFamily, InverseBySolveMatchesGramRoute) {
  for (double q : kGrid) {
    const FockTower t = FockTower::build(2, q, 5);
    for (int n = 0; n <= 5; ++n) {
      const Matrix via_gram = t.gram(n).llt().solve(t.u(n).transpose());
      EXPECT_LT(linalg::max_abs_diff(t.u_inv(n), via_gram), 1e-9) << q << " " << n;
      EXPECT_LT(linalg::max_abs_diff(t.u_inv(n) * t.u(n), Matrix::Identity(ipow(2, n), ipow(2, n))), 1e-10);
    }
  }
}

TEST(RFamily, BaseLevels) {
  const OperatorFamily r = r_family(2, 3, 0.7);
  EXPECT_EQ(r[0], Matrix::Zero(1, 1));
  EXPECT_LT(linalg::max_abs_diff(r[1], Matrix::Identity(2, 2)), 1e-15);
}

TEST(RFamily, LevelTwoEigenvalues) {
  const double q = 0.35;
  const Vector ev = linalg::sym_eigenvalues(r_family(2, 2, q)[2]);
  EXPECT_NEAR(ev(0), std::sqrt(1.0 - q), 1e-12);
  for (int k = 1; k < 4; ++k) EXPECT_NEAR(ev(k), std::sqrt(1.0 + q), 1e-12);
}

TEST(RFamily, QZeroIdentity) {
  const OperatorFamily r = r_family(3, 4, 0.0);
  for (int n = 1; n <= 4; ++n) EXPECT_EQ(r[n], Matrix::Identity(ipow(3, n), ipow(3, n)));
}

TEST(RFamily, SymmetricPositive) {
  for (double q : kGrid) {
    const OperatorFamily r = r_family(2, 6, q);
    for (int n = 1; n <= 6; ++n) {
      EXPECT_LT(linalg::asymmetry(r[n]), 1e-10 * linalg::max_abs(r[n]));
      EXPECT_GT(linalg::sym_eigenvalues(r[n])(0), 0.0);
    }
  }
}

TEST(RFamily, KernelStructure) {
  for (double q : kGrid) {
    const OperatorFamily r = r_family(2, 6, q);
    const double floor = std::sqrt(lemma41_bounds(q).lower);
    EXPECT_EQ(r[0](0, 0), 0.0);
    for (int n = 1; n <= 6; ++n) EXPECT_GE(linalg::min_singular_value(r[n]), floor * (1.0 - 1e-12)) << q << " " << n;
  }
}

TEST(RIteration, LevelTwo) {
  const double q = 0.6;
  const OperatorFamily it = r_family_by_iteration(2, 2, q);
  EXPECT_LT(linalg::max_abs_diff(it[2] * it[2], Matrix::Identity(4, 4) + q * flip()), 1e-12);
  EXPECT_LT(linalg::max_abs_diff(it[2], r_family(2, 2, q)[2]), 1e-10);
}

TEST(RIteration, MatchesUnitaryRoute) {
  EXPECT_LT(linalg::max_abs_diff(r_family_by_iteration(2, 6, 0.9)[6], r_family(2, 6, 0.9)[6]), 1e-8);
  for (int d = 2; d <= 3; ++d) {
    for (double q : kGrid) {
      const int top = d == 2 ? 6 : 5;
      const OperatorFamily a = r_family_by_iteration(d, top, q);
      const OperatorFamily b = r_family(d, top, q);
      for (int n = 0; n <= top; ++n) EXPECT_LT(linalg::max_abs_diff(a[n], b[n]), 1e-8) << d << " " << q << " " << n;
    }
  }
}

TEST(RIteration, QZeroIdentity) {
  const OperatorFamily it = r_family_by_iteration(2, 5, 0.0);
  for (int n = 1; n <= 5; ++n) EXPECT_EQ(it[n], Matrix::Identity(ipow(2, n), ipow(2, n)));
}

TEST(RIteration, Errors) { EXPECT_THROW(r_family_by_iteration(2, 0, 0.5), std::invalid_argument); }

TEST(FixedPoint, ResidualSmall) {
  for (double q : kGrid) {
    for (double res : fixed_point_residuals(r_family(2, 6, q))) EXPECT_LT(res, 1e-10) << q;
  }
}

TEST(FixedPoint, TwoSidedForm) {
  // R_{n+1}^2 = I + q (I (x) R_n) T_{n+1} (I (x) R_n)
  for (double q : kGrid) {
    const OperatorFamily r = r_family(3, 4, q);
    for (int n = 1; n < 4; ++n) {
      const Matrix lifted = linalg::block_diag(r[n], 3);
      const Index dim = ipow(3, n + 1);
      const Matrix rhs = Matrix::Identity(dim, dim) + q * lifted * t_matrix(3, n + 1).mat * lifted;
      EXPECT_LT(linalg::max_abs_diff(r[n + 1] * r[n + 1], rhs), 1e-11) << q << " " << n;
    }
  }
}

TEST(TMatrix, FlipAtLevelTwo) { EXPECT_EQ(t_matrix(2, 2).mat, flip()); }

TEST(TMatrix, ZeroBelowTwo) {
  EXPECT_EQ(t_matrix(2, 0).mat, Matrix::Zero(1, 1));
  EXPECT_EQ(t_matrix(3, 1).mat, Matrix::Zero(3, 3));
}

TEST(TMatrix, ShiftProperty) {
  for (int d = 2; d <= 3; ++d) {
    for (int n = 2; n <= 4; ++n) {
      ASSERT_EQ(linalg::kron_identity_right(t_matrix(d, n).mat, d), t_matrix(d, n + 1).mat) << d << " " << n;
    }
  }
}

TEST(Commutant, RelationsWithIdentityOnTheLeft) {
  for (double q : kGrid) EXPECT_LT(commutant_defect(r_family(2, 5, q)), 1e-12) << q;
  EXPECT_LT(commutant_defect(r_family(3, 4, -0.6)), 1e-12);
}

TEST(Qcr, QZeroExact) {
  EXPECT_EQ(qcr_defect(2, 4, 0.0), 0.0);
  EXPECT_EQ(qcr_defect(3, 3, 0.0), 0.0);
}

TEST(Qcr, Examples) {
  EXPECT_LT(qcr_defect(2, 6, 0.5), 1e-10);
  EXPECT_LT(qcr_defect(3, 4, -0.8), 1e-10);
}

TEST(Qcr, Errors) { EXPECT_THROW(qcr_defect(2, 1, 0.5), std::invalid_argument); }

TEST(Intertwining, VacuumLevel) {
  const FockTower t = FockTower::build(2, 0.7, 1);
  for (int i = 1; i <= 2; ++i) {
    const Matrix dressed = t.m_sqrt(1) * t.u_inv(1) * creator_matrix(i, 2, 1).mat * t.u(0);
    EXPECT_LT(linalg::max_abs_diff(dressed, prepend(i, 2, 0)), 1e-15);
  }
}

TEST(Intertwining, Examples) {
  EXPECT_LT(intertwining_defect(2, 5, 0.5), 1e-10);
  EXPECT_LE(intertwining_defect(2, 5, 0.0), 1e-14);
  EXPECT_LT(intertwining_defect(3, 4, -0.9), 1e-10);
}

TEST(FockTower, Errors) {
  EXPECT_THROW(FockTower::build(1, 0.5, 3), std::invalid_argument);
  EXPECT_THROW(FockTower::build(2, 1.0, 3), std::invalid_argument);
  EXPECT_THROW(FockTower::build(2, 0.5, -1), std::invalid_argument);
}
