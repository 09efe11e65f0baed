#include "qfock/spectral.hpp"

#include "qfock/blocks.hpp"
#include "qfock/gram.hpp"
#include "qfock/linalg.hpp"
#include "qfock/operators.hpp"
#include "qfock/tower.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace qfock {

namespace {

void check_unit_interval(double q) {
  if (!(q >= 0.0 && q < 1.0)) throw std::invalid_argument("expected 0 <= q < 1, got " + std::to_string(q));
}

void check_q(double q) {
  if (!(std::fabs(q) < 1.0)) throw std::invalid_argument("|q| must be < 1, got " + std::to_string(q));
}

// alpha_n is positive by construction; anything else is an upstream bug.
double checked_alpha(double a, int n) {
  if (!(a > 0.0)) throw NumericalFault("non-positive smallest eigenvalue at level " + std::to_string(n));
  return a;
}

}  // namespace

SeriesValue gauss_product_series(double q, double tail_tol) {
  check_unit_interval(q);
  SeriesValue s{1.0, 0, 0.0};
  double qk = 1.0;
  for (int k = 1;; ++k) {
    qk *= q;
    const double factor = (1.0 - qk) / (1.0 + qk);
    s.value *= factor;
    s.terms = k;
    if (std::fabs(1.0 - factor) < tail_tol) {
      s.tail_bound = s.value * 2.0 * qk * q / (1.0 - q);
      return s;
    }
  }
}

double gauss_product(double q, double tail_tol) { return gauss_product_series(q, tail_tol).value; }

SeriesValue gauss_theta_series(double q, double tail_tol) {
  check_unit_interval(q);
  SeriesValue s{1.0, 1, 0.0};
  for (int k = 1;; ++k) {
    const double term = std::pow(q, static_cast<double>(k) * k);
    if (term < tail_tol) {
      s.tail_bound = 2.0 * term;
      return s;
    }
    s.value += (k % 2 == 1 ? -2.0 : 2.0) * term;
    s.terms = k + 1;
  }
}

double gauss_theta(double q, double tail_tol) { return gauss_theta_series(q, tail_tol).value; }

Bounds lemma41_bounds(double q, double tail_tol) {
  check_q(q);
  const double a = std::fabs(q);
  const double upper = 1.0 / (1.0 - a);
  return {upper * gauss_product(a, tail_tol), upper};
}

double condition_17_margin(double q, int terms) {
  check_q(q);
  if (terms < 1) throw std::invalid_argument("terms must be >= 1");
  const double a = std::fabs(q);
  double rhs = 1.0;
  for (int k = 1; k < terms; ++k) rhs += (k % 2 == 1 ? -2.0 : 2.0) * std::pow(a, static_cast<double>(k) * k);
  return rhs - q * q;
}

double condition_root(int terms, double root_tol) {
  if (terms < 2) throw std::invalid_argument("condition_root needs terms >= 2");
  if (!(root_tol > 0.0)) throw std::invalid_argument("root_tol must be positive");
  // The margin is 1 at q = 0. Find the first grid point where it is negative.
  const auto margin = [terms](double x) { return condition_17_margin(x, terms); };
  double lo = 0.0;
  double hi = -1.0;
  constexpr int kGrid = 1000;
  for (int g = 1; g < kGrid; ++g) {
    const double x = static_cast<double>(g) / kGrid;
    if (margin(x) < 0.0) {
      hi = x;
      break;
    }
    lo = x;
  }
  if (hi < 0.0) throw std::domain_error("condition margin has no sign change on (0, 1)");
  while (hi - lo > root_tol) {
    const double mid = 0.5 * (lo + hi);
    if (margin(mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

std::vector<double> alphas(int d, int n_max, double q, Mode mode) {
  detail::check_dimension(d);
  check_q(q);
  if (n_max < 1) throw std::invalid_argument("alphas needs n_max >= 1");
  std::vector<double> out;
  if (mode == Mode::blocks) {
    BlockTower tower(d, q);
    for (int n = 1; n <= n_max; ++n) out.push_back(checked_alpha(tower.level_alpha(n), n));
    return out;
  }
  const std::vector<GramMatrix> grams = gram_tower(d, n_max, q);
  for (int n = 1; n <= n_max; ++n) {
    const WordSpace space = WordSpace::full_level(d, n);
    const Vector ev = m_eigenvalues_from(grams[static_cast<std::size_t>(n)].mat, cycle_sum_on(space, q));
    out.push_back(checked_alpha(ev(0), n));
  }
  return out;
}

double alpha(int d, int n, double q, Mode mode) { return alphas(d, n, q, mode).back(); }

double contraction_factor(double q, double alpha_next, double alpha_next2) {
  check_q(q);
  const double a = std::fabs(q);
  return a / std::sqrt((1.0 - a) * std::min(alpha_next, alpha_next2));
}

double contraction_factor(int d, int n, double q) {
  if (n < 1) throw std::invalid_argument("contraction_factor needs n >= 1");
  const std::vector<double> al = alphas(d, n + 2, q);
  return contraction_factor(q, al[static_cast<std::size_t>(n)], al[static_cast<std::size_t>(n + 1)]);
}

namespace {

double dense_iterate_distance(const FockTower& tower, int n) {
  const Matrix lifted = linalg::kron_identity_right(tower.r(n), tower.d());
  return linalg::op_norm_sym(lifted - tower.r(n + 1));
}

Trend classify(const std::vector<double>& a, double tol) {
  bool up = false;
  bool down = false;
  for (std::size_t k = 1; k < a.size(); ++k) {
    if (a[k] > a[k - 1] + tol) up = true;
    if (a[k] < a[k - 1] - tol) down = true;
  }
  if (up && down) return Trend::mixed;
  if (down) return Trend::decreasing;
  if (up) return Trend::increasing;
  return Trend::constant;
}

}  // namespace

double iterate_distance(int d, int n, double q, Mode mode) {
  if (n < 1) throw std::invalid_argument("iterate_distance needs n >= 1");
  if (mode == Mode::blocks) {
    BlockTower tower(d, q);
    return tower.iterate_distance(n);
  }
  return dense_iterate_distance(FockTower::build(d, q, n + 1), n);
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::holds_empirically:
      return "holds-empirically";
    case Verdict::fails:
      return "fails";
    case Verdict::inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

std::string_view to_string(Trend t) {
  switch (t) {
    case Trend::decreasing:
      return "decreasing";
    case Trend::increasing:
      return "increasing";
    case Trend::constant:
      return "constant";
    case Trend::mixed:
      return "mixed";
  }
  return "mixed";
}

SpectralReport prop52_report(int d, int n_max, double q, Mode mode) {
  detail::check_dimension(d);
  check_q(q);
  if (n_max < 1) throw std::invalid_argument("prop52_report needs n_max >= 1");
  SpectralReport rep;
  rep.d = d;
  rep.q = q;
  rep.n_max = n_max;
  rep.bounds = lemma41_bounds(q);
  rep.product = gauss_product_series(std::fabs(q));
  rep.theta = gauss_theta_series(std::fabs(q));
  rep.threshold = q * q / (1.0 - std::fabs(q));

  std::vector<double> al;
  std::vector<double> dist;
  if (mode == Mode::blocks) {
    BlockTower tower(d, q);
    for (int n = 1; n <= n_max; ++n) al.push_back(checked_alpha(tower.level_alpha(n), n));
    for (int n = 1; n < n_max; ++n) dist.push_back(tower.iterate_distance(n));
  } else {
    const FockTower tower = FockTower::build(d, q, n_max);
    for (int n = 1; n <= n_max; ++n) al.push_back(checked_alpha(tower.m_eigenvalues(n)(0), n));
    for (int n = 1; n < n_max; ++n) dist.push_back(dense_iterate_distance(tower, n));
  }

  for (int n = 1; n <= n_max; ++n) {
    LevelRow row;
    row.n = n;
    row.alpha = al[static_cast<std::size_t>(n - 1)];
    row.lower_bound = rep.bounds.lower;
    row.upper_bound = rep.bounds.upper;
    if (n + 2 <= n_max) row.contraction_factor = contraction_factor(q, al[static_cast<std::size_t>(n)], al[static_cast<std::size_t>(n + 1)]);
    if (n + 1 <= n_max) row.iterate_distance = dist[static_cast<std::size_t>(n - 1)];
    rep.levels.push_back(row);
  }

  rep.min_alpha = *std::min_element(al.begin(), al.end());
  rep.last_alpha = al.back();
  rep.margin = rep.min_alpha - rep.threshold;
  rep.last_margin = rep.last_alpha - rep.threshold;
  rep.trend = classify(al, 1e-12);

  const bool all_above = rep.margin > 0.0;
  if (all_above) {
    rep.verdict = Verdict::holds_empirically;
  } else if (rep.bounds.lower < rep.threshold) {
    rep.verdict = Verdict::fails;
  } else {
    // Some computed alpha_n sits at or below the threshold although the
    // guaranteed floor does not: only roundoff can get here.
    rep.verdict = Verdict::inconclusive;
  }
  return rep;
}

}  // namespace qfock
