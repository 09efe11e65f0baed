#include "qfock/spectral.hpp"

#include "qfock/gram.hpp"
#include "qfock/linalg.hpp"
#include "qfock/operators.hpp"
#include "qfock/symgroup.hpp"

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include <cmath>

using namespace qfock;

namespace {

// Smallest eigenvalue of M_n from the generalized problem Gamma [M] x = lambda Gamma x.
double alpha_generalized(int d, int n, double q) {
  const Matrix g = gram_by_recursion(d, n, q).mat;
  const Matrix gm = g * cycle_sum_matrix(d, n, q).mat;
  Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> es(0.5 * (gm + gm.transpose()), g);
  return es.eigenvalues()(0);
}

}  // namespace

TEST(Alpha, Examples) {
  for (double q : {-0.9, -0.2, 0.0, 0.6}) {
    EXPECT_NEAR(alpha(2, 1, q), 1.0, 1e-12);
    EXPECT_NEAR(alpha(3, 1, q), 1.0, 1e-12);
  }
  EXPECT_NEAR(alpha(2, 2, 0.5), 0.5, 1e-12);
  for (int n = 1; n <= 6; ++n) EXPECT_NEAR(alpha(2, n, 0.0), 1.0, 1e-14);
}

TEST(Alpha, LevelTwoIsOneMinusAbsQ) {
  for (double q : {-0.9, -0.5, 0.3, 0.9}) EXPECT_NEAR(alpha(3, 2, q), 1.0 - std::fabs(q), 1e-12);
}

TEST(Alpha, MatchesGeneralizedEigensolve) {
  for (int d = 2; d <= 3; ++d) {
    for (double q : {-0.9, -0.4, 0.44, 0.9}) {
      for (int n = 1; n <= (d == 2 ? 7 : 5); ++n) {
        EXPECT_NEAR(alpha(d, n, q), alpha_generalized(d, n, q), 1e-10) << d << " " << n << " " << q;
      }
    }
  }
}

TEST(Alpha, MatchesSmallestEigenvalueOfRSquared) {
  for (double q : {-0.7, 0.3, 0.8}) {
    const FockTower t = FockTower::build(2, q, 6);
    for (int n = 1; n <= 6; ++n) {
      const Vector ev = linalg::sym_eigenvalues(t.r(n) * t.r(n));
      EXPECT_NEAR(alpha(2, n, q), ev(0), 1e-8) << q << " " << n;
    }
  }
}

TEST(Alpha, BlocksMatchDense) {
  for (int d = 2; d <= 3; ++d) {
    for (double q : {-0.8, 0.455}) {
      const auto dense = alphas(d, d == 2 ? 8 : 5, q, Mode::dense);
      const auto blocks = alphas(d, d == 2 ? 8 : 5, q, Mode::blocks);
      ASSERT_EQ(dense.size(), blocks.size());
      for (std::size_t k = 0; k < dense.size(); ++k) EXPECT_NEAR(dense[k], blocks[k], 1e-10);
    }
  }
}

TEST(Alpha, Errors) {
  EXPECT_THROW(alpha(2, 0, 0.5), std::invalid_argument);
  EXPECT_THROW(alpha(2, 3, 1.0), std::invalid_argument);
  EXPECT_THROW(alpha(1, 3, 0.5), std::invalid_argument);
}

TEST(SpectralBounds, Examples) {
  const Bounds zero = lemma41_bounds(0.0);
  EXPECT_EQ(zero.lower, 1.0);
  EXPECT_EQ(zero.upper, 1.0);
  EXPECT_DOUBLE_EQ(lemma41_bounds(0.5).upper, 2.0);
}

TEST(SpectralBounds, SymmetricInQ) {
  for (double q : {0.1, 0.44, 0.9}) {
    EXPECT_EQ(lemma41_bounds(q).lower, lemma41_bounds(-q).lower);
    EXPECT_EQ(lemma41_bounds(q).upper, lemma41_bounds(-q).upper);
  }
}

TEST(SpectralBounds, ContainsWholeSpectrum) {
  for (int d = 2; d <= 3; ++d) {
    for (double q : {-0.9, -0.5, 0.0, 0.5, 0.9}) {
      const Bounds b = lemma41_bounds(q);
      const FockTower t = FockTower::build(d, q, d == 2 ? 7 : 5);
      for (int n = 1; n <= t.n_max(); ++n) {
        const Vector ev = t.m_eigenvalues(n);
        EXPECT_GE(ev(0), b.lower * (1.0 - 1e-12)) << d << " " << q << " " << n;
        EXPECT_LE(ev(ev.size() - 1), b.upper * (1.0 + 1e-12)) << d << " " << q << " " << n;
      }
    }
  }
}

TEST(Gauss, Examples) {
  EXPECT_EQ(gauss_product(0.0), 1.0);
  EXPECT_EQ(gauss_theta(0.0), 1.0);
  EXPECT_NEAR(gauss_product(0.5), gauss_theta(0.5), 1e-12);
  EXPECT_NEAR(gauss_product(0.44), gauss_theta(0.44), 1e-12);
}

TEST(Gauss, IdentityOnGrid) {
  for (int k = 0; k <= 9; ++k) {
    const double q = 0.1 * k;
    EXPECT_LT(std::fabs(gauss_product(q) - gauss_theta(q)), 1e-12) << q;
  }
}

TEST(Gauss, ProductDecreasing) {
  double prev = gauss_product(0.0);
  for (int k = 1; k <= 18; ++k) {
    const double v = gauss_product(0.05 * k);
    EXPECT_LT(v, prev);
    prev = v;
  }
}

TEST(Gauss, ThetaPartialSumsBracket) {
  for (double q : {0.3, 0.7, 0.9}) {
    const double limit = gauss_theta(q);
    double s = 1.0;
    for (int k = 1; k <= 6; ++k) {
      s += (k % 2 ? -2.0 : 2.0) * std::pow(q, k * k);
      if (k % 2) {
        EXPECT_LE(s, limit + 1e-15) << q << " " << k;
      } else {
        EXPECT_GE(s, limit - 1e-15) << q << " " << k;
      }
    }
  }
}

TEST(Gauss, TailBoundsHold) {
  for (double q : {0.2, 0.6, 0.9}) {
    const SeriesValue p = gauss_product_series(q, 1e-6);
    const SeriesValue t = gauss_theta_series(q, 1e-6);
    const double exact = gauss_theta(q);
    EXPECT_LE(std::fabs(p.value - exact), p.tail_bound + 1e-15) << q;
    EXPECT_LE(std::fabs(t.value - exact), t.tail_bound + 1e-15) << q;
  }
}

TEST(Gauss, Domain) {
  EXPECT_THROW(gauss_product(-0.1), std::invalid_argument);
  EXPECT_THROW(gauss_theta(1.0), std::invalid_argument);
}

TEST(Condition, Margin) {
  EXPECT_EQ(condition_17_margin(0.0, 4), 1.0);
  EXPECT_GT(condition_17_margin(0.44, 4), 0.0);
  EXPECT_LT(condition_17_margin(0.5, 20), 0.0);
  EXPECT_DOUBLE_EQ(condition_17_margin(-0.3, 3), condition_17_margin(0.3, 3));
  EXPECT_DOUBLE_EQ(condition_17_margin(0.2, 2), 1.0 - 0.4 - 0.04);
}

TEST(Condition, Roots) {
  EXPECT_NEAR(condition_root(2), std::sqrt(2.0) - 1.0, 1e-7);
  EXPECT_NEAR(condition_root(4), 0.44005651, 1e-7);
  EXPECT_LT(std::fabs(condition_root(8) - condition_root(4)), 1e-5);
  EXPECT_THROW(condition_root(1), std::invalid_argument);
}

TEST(Condition, RootIsSignChange) {
  for (int terms = 2; terms <= 12; ++terms) {
    const double r = condition_root(terms, 1e-13);
    EXPECT_GT(condition_17_margin(r - 1e-9, terms), 0.0) << terms;
    EXPECT_LT(condition_17_margin(r + 1e-9, terms), 0.0) << terms;
  }
}

TEST(Contraction, Examples) {
  EXPECT_EQ(contraction_factor(2, 3, 0.0), 0.0);
  const double a3 = alpha_generalized(2, 3, 0.3);
  const double expected = 0.3 / std::sqrt(0.7 * std::min(0.7, a3));
  EXPECT_NEAR(contraction_factor(2, 1, 0.3), expected, 1e-10);
  for (int n = 1; n <= 6; ++n) EXPECT_LT(contraction_factor(2, n, 0.44), 1.0) << n;
}

TEST(IterateDistance, Examples) {
  for (int n = 1; n <= 5; ++n) EXPECT_EQ(iterate_distance(2, n, 0.0), 0.0);
  for (double q : {0.2, 0.5, 0.8}) EXPECT_NEAR(iterate_distance(2, 1, q), 1.0 - std::sqrt(1.0 - q), 1e-12);
}

TEST(IterateDistance, BlocksMatchDense) {
  for (double q : {-0.6, 0.44}) {
    for (int n = 1; n <= 5; ++n) EXPECT_NEAR(iterate_distance(2, n, q, Mode::blocks), iterate_distance(2, n, q), 1e-10);
  }
}

TEST(IterateDistance, ContractionChain) {
  for (double q : {0.3, 0.44}) {
    const SpectralReport r = prop52_report(2, 7, q);
    for (int n = 1; n + 1 < 7 && r.levels[static_cast<std::size_t>(n - 1)].contraction_factor; ++n) {
      const auto& row = r.levels[static_cast<std::size_t>(n - 1)];
      const double next = *r.levels[static_cast<std::size_t>(n)].iterate_distance;
      EXPECT_LE(next, *row.contraction_factor * *row.iterate_distance * (1.0 + 1e-8)) << q << " " << n;
    }
  }
}

TEST(Report, Verdicts) {
  const SpectralReport a = prop52_report(2, 8, 0.44, Mode::blocks);
  EXPECT_EQ(a.verdict, Verdict::holds_empirically);
  EXPECT_GT(a.margin, 0.0);
  const SpectralReport b = prop52_report(2, 8, 0.455, Mode::blocks);
  EXPECT_GT(b.margin, 0.0);
  const SpectralReport z = prop52_report(2, 5, 0.0);
  EXPECT_EQ(z.margin, 1.0);
  EXPECT_EQ(z.verdict, Verdict::holds_empirically);
  EXPECT_EQ(z.trend, Trend::constant);
}

TEST(Report, Fields) {
  const SpectralReport r = prop52_report(2, 4, 0.5);
  ASSERT_EQ(r.levels.size(), 4u);
  EXPECT_DOUBLE_EQ(r.threshold, 0.5);
  EXPECT_TRUE(r.levels[1].contraction_factor.has_value());
  EXPECT_FALSE(r.levels[2].contraction_factor.has_value());
  EXPECT_TRUE(r.levels[2].iterate_distance.has_value());
  EXPECT_FALSE(r.levels[3].iterate_distance.has_value());
  EXPECT_EQ(r.min_alpha, r.last_alpha);
  EXPECT_EQ(to_string(r.trend), "decreasing");
}

TEST(Report, NegativeQIsNotMonotone) {
  const SpectralReport r = prop52_report(2, 8, -0.5, Mode::blocks);
  EXPECT_EQ(r.trend, Trend::mixed);
  EXPECT_LT(r.min_alpha, r.levels[3].alpha);
  EXPECT_NEAR(r.margin, r.min_alpha - r.threshold, 1e-15);
  EXPECT_EQ(r.verdict, Verdict::fails);
}

TEST(Report, SufficientConditionImpliesEmpiricalHold) {
  for (int k = 0; k <= 18; ++k) {
    const double q = -0.9 + 0.1 * k;
    if (condition_17_margin(q, 20) <= 0.0) continue;
    EXPECT_EQ(prop52_report(2, 7, q, Mode::blocks).verdict, Verdict::holds_empirically) << q;
  }
}

TEST(Report, Errors) {
  EXPECT_THROW(prop52_report(2, 0, 0.5), std::invalid_argument);
  EXPECT_THROW(prop52_report(2, 4, -1.0), std::invalid_argument);
}
