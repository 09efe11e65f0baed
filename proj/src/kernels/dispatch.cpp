#include "qfock/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace qfock::kernels {

namespace {

struct Table {
  void (*axpy)(double, const double*, double*, std::size_t);
  double (*max_abs_diff)(const double*, const double*, std::size_t);
  double (*max_abs)(const double*, std::size_t);
};

constexpr Table kGeneric{generic::axpy, generic::max_abs_diff, generic::max_abs};
#if defined(QFOCK_HAVE_AVX2)
constexpr Table kAvx2{avx2::axpy, avx2::max_abs_diff, avx2::max_abs};
#endif
#if defined(QFOCK_HAVE_NEON)
constexpr Table kNeon{neon::axpy, neon::max_abs_diff, neon::max_abs};
#endif

const Table* table_for(Backend b) {
  switch (b) {
    case Backend::generic:
      return &kGeneric;
    case Backend::avx2:
#if defined(QFOCK_HAVE_AVX2)
      return &kAvx2;
#else
      return nullptr;
#endif
    case Backend::neon:
#if defined(QFOCK_HAVE_NEON)
      return &kNeon;
#else
      return nullptr;
#endif
  }
  return nullptr;
}

Backend initial_backend() {
  if (const char* env = std::getenv("QFOCK_SIMD")) {
    if (std::string(env) == "generic") return Backend::generic;
  }
  return detect_backend();
}

std::atomic<Backend>& current() {
  static std::atomic<Backend> b{initial_backend()};
  return b;
}

const Table& active() { return *table_for(current().load(std::memory_order_relaxed)); }

void check_sizes(std::size_t a, std::size_t b) {
  if (a != b) throw std::invalid_argument("kernel operands differ in length");
}

}  // namespace

bool backend_available(Backend b) {
  switch (b) {
    case Backend::generic:
      return true;
    case Backend::avx2:
#if defined(QFOCK_HAVE_AVX2)
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case Backend::neon:
#if defined(QFOCK_HAVE_NEON)
      return true;
#else
      return false;
#endif
  }
  return false;
}

Backend detect_backend() {
  if (backend_available(Backend::avx2)) return Backend::avx2;
  if (backend_available(Backend::neon)) return Backend::neon;
  return Backend::generic;
}

Backend active_backend() { return current().load(); }

void set_backend(Backend b) {
  if (!backend_available(b)) {
    throw std::invalid_argument("SIMD backend not available: " + std::string(backend_name(b)));
  }
  current().store(b);
}

std::string_view backend_name(Backend b) {
  switch (b) {
    case Backend::generic:
      return "generic";
    case Backend::avx2:
      return "avx2";
    case Backend::neon:
      return "neon";
  }
  return "unknown";
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
  check_sizes(x.size(), y.size());
  active().axpy(a, x.data(), y.data(), x.size());
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  check_sizes(a.size(), b.size());
  return active().max_abs_diff(a.data(), b.data(), a.size());
}

double max_abs(std::span<const double> a) { return active().max_abs(a.data(), a.size()); }

}  // namespace qfock::kernels
