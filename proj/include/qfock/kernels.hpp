#pragma once

// Data-parallel inner loops. Each kernel has a portable scalar reference in
// qfock::kernels::generic and vectorized variants (AVX2+FMA on x86-64, NEON on
// aarch64) selected once at startup from the CPU feature set.

#include <cstddef>
#include <span>
#include <string_view>

namespace qfock::kernels {

enum class Backend { generic, avx2, neon };

/// y += a * x
void axpy(double a, std::span<const double> x, std::span<double> y);

/// max_i |a_i - b_i|; 0 for empty input.
double max_abs_diff(std::span<const double> a, std::span<const double> b);

/// max_i |a_i|; 0 for empty input.
double max_abs(std::span<const double> a);

/// Backend currently used by the dispatching entry points above.
Backend active_backend();

/// Best backend this CPU supports.
Backend detect_backend();

/// Whether this build contains `b` and the CPU can run it.
bool backend_available(Backend b);

/// Force a backend (tests, benchmarks). Throws std::invalid_argument if
/// unavailable. QFOCK_SIMD=generic in the environment has the same effect at
/// startup.
void set_backend(Backend b);

std::string_view backend_name(Backend b);

namespace generic {
void axpy(double a, const double* x, double* y, std::size_t n);
double max_abs_diff(const double* a, const double* b, std::size_t n);
double max_abs(const double* a, std::size_t n);
}  // namespace generic

#if defined(QFOCK_HAVE_AVX2)
namespace avx2 {
void axpy(double a, const double* x, double* y, std::size_t n);
double max_abs_diff(const double* a, const double* b, std::size_t n);
double max_abs(const double* a, std::size_t n);
}  // namespace avx2
#endif

#if defined(QFOCK_HAVE_NEON)
namespace neon {
void axpy(double a, const double* x, double* y, std::size_t n);
double max_abs_diff(const double* a, const double* b, std::size_t n);
double max_abs(const double* a, std::size_t n);
}  // namespace neon
#endif

}  // namespace qfock::kernels
