#include "homog/kernels.hpp"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <stdexcept>
#include <string>

namespace homog::kernels {

// ---------------------------------------------------------------- scalar ---

namespace scalar {

double sum(const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i];
  return acc;
}

double dot(const double* x, const double* y, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

double max_abs(const double* x, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::fabs(x[i]));
  return m;
}

void axpy(double* dst, const double* x, const double* y, double alpha, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] = x[i] + alpha * y[i];
}

void scale(double* dst, const double* x, double alpha, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] = alpha * x[i];
}

} // namespace scalar

// ------------------------------------------------------------- avx2 decl ---

#if defined(__x86_64__) || defined(_M_X64)
#define HOMOG_HAVE_AVX2_TU 1
namespace avx2 {
double sum(const double* x, std::size_t n);
double dot(const double* x, const double* y, std::size_t n);
double max_abs(const double* x, std::size_t n);
void axpy(double* dst, const double* x, const double* y, double alpha, std::size_t n);
void scale(double* dst, const double* x, double alpha, std::size_t n);
} // namespace avx2
#endif

// ------------------------------------------------------------- neon impl ---

#if defined(__aarch64__)
#define HOMOG_HAVE_NEON_TU 1
#include <arm_neon.h>
namespace neon {

double sum(const double* x, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) acc = vaddq_f64(acc, vld1q_f64(x + i));
  double r = vgetq_lane_f64(acc, 0) + vgetq_lane_f64(acc, 1);
  for (; i < n; ++i) r += x[i];
  return r;
}

double dot(const double* x, const double* y, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2)
    acc = vaddq_f64(acc, vmulq_f64(vld1q_f64(x + i), vld1q_f64(y + i)));
  double r = vgetq_lane_f64(acc, 0) + vgetq_lane_f64(acc, 1);
  for (; i < n; ++i) r += x[i] * y[i];
  return r;
}

double max_abs(const double* x, std::size_t n) {
  float64x2_t m = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) m = vmaxq_f64(m, vabsq_f64(vld1q_f64(x + i)));
  double r = std::max(vgetq_lane_f64(m, 0), vgetq_lane_f64(m, 1));
  for (; i < n; ++i) r = std::max(r, std::fabs(x[i]));
  return r;
}

void axpy(double* dst, const double* x, const double* y, double alpha, std::size_t n) {
  float64x2_t a = vdupq_n_f64(alpha);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2)
    vst1q_f64(dst + i, vaddq_f64(vld1q_f64(x + i), vmulq_f64(a, vld1q_f64(y + i))));
  for (; i < n; ++i) dst[i] = x[i] + alpha * y[i];
}

void scale(double* dst, const double* x, double alpha, std::size_t n) {
  float64x2_t a = vdupq_n_f64(alpha);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(dst + i, vmulq_f64(a, vld1q_f64(x + i)));
  for (; i < n; ++i) dst[i] = alpha * x[i];
}

} // namespace neon
#endif

// --------------------------------------------------------------- dispatch --

namespace {

struct Ops {
  double (*sum)(const double*, std::size_t);
  double (*dot)(const double*, const double*, std::size_t);
  double (*max_abs)(const double*, std::size_t);
  void (*axpy)(double*, const double*, const double*, double, std::size_t);
  void (*scale)(double*, const double*, double, std::size_t);
};

constexpr Ops kScalarOps{scalar::sum, scalar::dot, scalar::max_abs,
                         scalar::axpy, scalar::scale};
#ifdef HOMOG_HAVE_AVX2_TU
constexpr Ops kAvx2Ops{avx2::sum, avx2::dot, avx2::max_abs, avx2::axpy,
                       avx2::scale};
#endif
#ifdef HOMOG_HAVE_NEON_TU
constexpr Ops kNeonOps{neon::sum, neon::dot, neon::max_abs, neon::axpy,
                       neon::scale};
#endif

bool cpu_supports(Arch a) {
  switch (a) {
    case Arch::scalar:
      return true;
    case Arch::avx2:
#if defined(HOMOG_HAVE_AVX2_TU)
      return __builtin_cpu_supports("avx2") != 0;
#else
      return false;
#endif
    case Arch::neon:
#if defined(HOMOG_HAVE_NEON_TU)
      return true;
#else
      return false;
#endif
  }
  return false;
}

Arch pick_default() {
  const char* env = std::getenv("HOMOG_SIMD");
  std::string want = env ? env : "auto";
  if (want == "scalar") return Arch::scalar;
  if (want == "avx2" && cpu_supports(Arch::avx2)) return Arch::avx2;
  if (want == "neon" && cpu_supports(Arch::neon)) return Arch::neon;
  if (cpu_supports(Arch::avx2)) return Arch::avx2;
  if (cpu_supports(Arch::neon)) return Arch::neon;
  return Arch::scalar;
}

const Ops& ops_for(Arch a) {
  switch (a) {
#ifdef HOMOG_HAVE_AVX2_TU
    case Arch::avx2:
      return kAvx2Ops;
#endif
#ifdef HOMOG_HAVE_NEON_TU
    case Arch::neon:
      return kNeonOps;
#endif
    default:
      return kScalarOps;
  }
}

Arch g_arch = pick_default();
const Ops* g_ops = &ops_for(g_arch);

} // namespace

const char* arch_name(Arch a) {
  switch (a) {
    case Arch::scalar: return "scalar";
    case Arch::avx2: return "avx2";
    case Arch::neon: return "neon";
  }
  return "?";
}

bool arch_supported(Arch a) { return cpu_supports(a); }

Arch active_arch() { return g_arch; }

void set_arch(Arch a) {
  if (!cpu_supports(a))
    throw std::invalid_argument(std::string("kernel arch unsupported here: ") +
                                arch_name(a));
  g_arch = a;
  g_ops = &ops_for(a);
}

double sum(const double* x, std::size_t n) { return g_ops->sum(x, n); }
double dot(const double* x, const double* y, std::size_t n) { return g_ops->dot(x, y, n); }
double max_abs(const double* x, std::size_t n) { return g_ops->max_abs(x, n); }
void axpy(double* dst, const double* x, const double* y, double alpha, std::size_t n) {
  g_ops->axpy(dst, x, y, alpha, n);
}
void scale(double* dst, const double* x, double alpha, std::size_t n) {
  g_ops->scale(dst, x, alpha, n);
}

} // namespace homog::kernels
