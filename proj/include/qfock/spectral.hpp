#pragma once

// Spectral quantities of R_n^2 (equivalently M_n): the smallest eigenvalue
// alpha_n(q), the two-sided bound
//   (1/(1-|q|)) prod_k (1-|q|^k)/(1+|q|^k) <= R_n^2 <= 1/(1-|q|),
// the theta-series form of the lower bound and the sufficient condition
//   q^2 < 1 - 2|q| + 2|q|^4 - 2|q|^9 + ...,
// and the contraction estimates for the iterates X_n = R_0 + ... + R_n + R_n (x) I + ...
// whose convergence criterion is liminf alpha_n(q) > q^2 / (1 - |q|).

#include "qfock/types.hpp"

#include <optional>
#include <string_view>
#include <vector>

namespace qfock {

/// dense: work on full d^n level matrices. blocks: work blockwise on the
/// multiset classes; identical results, smaller matrices.
enum class Mode { dense, blocks };

/// A truncated series or product with a bound on the omitted tail.
struct SeriesValue {
  double value = 0.0;
  int terms = 0;
  double tail_bound = 0.0;  // |value - limit| <= tail_bound
};

/// prod_{k>=1} (1-q^k)/(1+q^k) for 0 <= q < 1, stopping once a factor is within
/// tail_tol of 1. The omitted factors are each >= 1 - 2q^k, so the relative
/// tail is at most 2 q^{K+1} / (1-q) after K factors.
SeriesValue gauss_product_series(double q, double tail_tol = 1e-16);
double gauss_product(double q, double tail_tol = 1e-16);

/// 1 + 2 sum_{k>=1} (-1)^k q^{k^2} for 0 <= q < 1, stopping at the first term
/// below tail_tol. Alternating with decreasing terms, so the tail is bounded by
/// twice the first omitted term.
SeriesValue gauss_theta_series(double q, double tail_tol = 1e-16);
double gauss_theta(double q, double tail_tol = 1e-16);

struct Bounds {
  double lower = 0.0;
  double upper = 0.0;
};

/// Interval containing the spectrum of R_n^2 for every n >= 1.
Bounds lemma41_bounds(double q, double tail_tol = 1e-16);

/// (1 + sum_{k=1}^{terms-1} 2 (-1)^k |q|^{k^2}) - q^2. Positive means the
/// condition holds at this truncation; truncating after a negative term gives
/// a sufficient test.
double condition_17_margin(double q, int terms);

/// Smallest root in (0, 1) of condition_17_margin(., terms) by bisection.
/// Throws std::domain_error if the margin never changes sign.
double condition_root(int terms, double root_tol = 1e-12);

/// Smallest eigenvalue of M_n (= of R_n^2), n >= 1.
double alpha(int d, int n, double q, Mode mode = Mode::dense);

/// alpha_1, ..., alpha_{n_max} from a single tower.
std::vector<double> alphas(int d, int n_max, double q, Mode mode = Mode::dense);

/// |q| / sqrt((1-|q|) min(alpha_{n+1}, alpha_{n+2})).
double contraction_factor(double q, double alpha_next, double alpha_next2);
double contraction_factor(int d, int n, double q);

/// ||(R_n (x) I) - R_{n+1}|| on V_{n+1}, n >= 1.
double iterate_distance(int d, int n, double q, Mode mode = Mode::dense);

enum class Verdict { holds_empirically, fails, inconclusive };
enum class Trend { decreasing, increasing, constant, mixed };

std::string_view to_string(Verdict v);
std::string_view to_string(Trend t);

struct LevelRow {
  int n = 0;
  double alpha = 0.0;
  double lower_bound = 0.0;
  double upper_bound = 0.0;
  std::optional<double> contraction_factor;  // c_n, needs alpha_{n+2}
  std::optional<double> iterate_distance;    // delta_n, needs R_{n+1}
};

/// Finite-level evidence for the convergence criterion. Only levels
/// 1..n_max are computed; nothing here is a statement about the limit.
struct SpectralReport {
  int d = 2;
  double q = 0.0;
  int n_max = 0;
  std::vector<LevelRow> levels;
  Bounds bounds;
  double threshold = 0.0;    // q^2 / (1 - |q|)
  double min_alpha = 0.0;
  double last_alpha = 0.0;
  double margin = 0.0;       // min_alpha - threshold
  double last_margin = 0.0;  // last_alpha - threshold
  Trend trend = Trend::mixed;
  Verdict verdict = Verdict::inconclusive;
  SeriesValue product;       // Gauss product at |q|
  SeriesValue theta;         // theta series at |q|
};

SpectralReport prop52_report(int d, int n_max, double q, Mode mode = Mode::dense);

}  // namespace qfock
