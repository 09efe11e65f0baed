#include "qfock/kernels.hpp"

#if defined(QFOCK_HAVE_NEON)

#include <arm_neon.h>

#include <cmath>
#include <limits>

namespace qfock::kernels::neon {

void axpy(double a, const double* x, double* y, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    float64x2_t y0 = vld1q_f64(y + i);
    float64x2_t y1 = vld1q_f64(y + i + 2);
    y0 = vfmaq_f64(y0, va, vld1q_f64(x + i));
    y1 = vfmaq_f64(y1, va, vld1q_f64(x + i + 2));
    vst1q_f64(y + i, y0);
    vst1q_f64(y + i + 2, y1);
  }
  for (; i < n; ++i) {
    y[i] = std::fma(a, x[i], y[i]);
  }
}

double max_abs_diff(const double* a, const double* b, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    // vmaxq_f64 propagates NaN.
    acc = vmaxq_f64(acc, vabdq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
  }
  double m = std::fmax(vgetq_lane_f64(acc, 0), vgetq_lane_f64(acc, 1));
  if (std::isnan(vgetq_lane_f64(acc, 0)) || std::isnan(vgetq_lane_f64(acc, 1))) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  for (; i < n; ++i) {
    const double v = std::fabs(a[i] - b[i]);
    if (std::isnan(v)) return v;
    if (v > m) m = v;
  }
  return m;
}

double max_abs(const double* a, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    acc = vmaxq_f64(acc, vabsq_f64(vld1q_f64(a + i)));
  }
  if (std::isnan(vgetq_lane_f64(acc, 0)) || std::isnan(vgetq_lane_f64(acc, 1))) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  double m = std::fmax(vgetq_lane_f64(acc, 0), vgetq_lane_f64(acc, 1));
  for (; i < n; ++i) {
    const double v = std::fabs(a[i]);
    if (std::isnan(v)) return v;
    if (v > m) m = v;
  }
  return m;
}

}  // namespace qfock::kernels::neon

#endif
