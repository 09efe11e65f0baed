#include "qfock/kernels.hpp"

#include <cmath>

namespace qfock::kernels::generic {

void axpy(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    y[i] += a * x[i];
  }
}

double max_abs_diff(const double* a, const double* b, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double v = std::fabs(a[i] - b[i]);
    // NaN must propagate so that broken checks cannot pass.
    if (v > m || std::isnan(v)) {
      m = v;
      if (std::isnan(v)) return v;
    }
  }
  return m;
}

double max_abs(const double* a, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double v = std::fabs(a[i]);
    if (std::isnan(v)) return v;
    if (v > m) m = v;
  }
  return m;
}

}  // namespace qfock::kernels::generic
