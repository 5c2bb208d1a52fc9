#pragma once
// Data-parallel array kernels used by the descent loops and grid reductions.
// A scalar reference implementation always exists; vector variants are
// selected at runtime from CPU capabilities and can be forced with the
// HOMOG_SIMD environment variable ("scalar", "avx2", "neon", "auto").
//
// Contract: scale/axpy/max_abs agree bitwise with the scalar reference
// (two-rounding mul+add, no FMA contraction); sum/dot may reorder the
// accumulation and agree to roundoff only.

#include <cstddef>

namespace homog::kernels {

enum class Arch { scalar, avx2, neon };

const char* arch_name(Arch a);
bool arch_supported(Arch a);

// Active architecture for all kernel calls. Initialized once from the CPU
// and HOMOG_SIMD; set_arch throws std::invalid_argument if unsupported.
Arch active_arch();
void set_arch(Arch a);

double sum(const double* x, std::size_t n);
double dot(const double* x, const double* y, std::size_t n);
double max_abs(const double* x, std::size_t n);
// dst = x + alpha * y (dst may alias x or y)
void axpy(double* dst, const double* x, const double* y, double alpha, std::size_t n);
// dst = alpha * x
void scale(double* dst, const double* x, double alpha, std::size_t n);

} // namespace homog::kernels
