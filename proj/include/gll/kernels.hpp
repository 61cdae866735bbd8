#pragma once

#include <cstddef>

namespace gll::kernels {

// Max-reduction kernels over split-complex arrays. These are the inner
// loops of every ball supremum (sup |f|, Lipschitz seminorm, sigma); shell
// profiles call them per contiguous segment. All kernels return squared
// magnitudes so the reduction stays comparison-only; callers sqrt once.
//
// The scalar and SIMD variants perform identical IEEE operations per
// element (no FMA contraction; the project builds with -ffp-contract=off),
// and max is order-insensitive, so all backends produce bit-identical
// results. Inputs must be finite. Empty ranges yield 0.

// max_i re[i]^2 + im[i]^2
double max_abs2(const double* re, const double* im, size_t n);

// max_i (are[i]-bre[i])^2 + (aim[i]-bim[i])^2
double max_diff_abs2(const double* are, const double* aim, const double* bre,
                     const double* bim, size_t n);

// max_i w[i]^2 * ((are[i]-bre[i])^2 + (aim[i]-bim[i])^2)
double max_weighted_diff_abs2(const double* w, const double* are, const double* aim,
                              const double* bre, const double* bim, size_t n);

// Backend selected at load time: "avx2" | "neon" | "scalar".
const char* active_backend();

namespace scalar {
double max_abs2(const double* re, const double* im, size_t n);
double max_diff_abs2(const double* are, const double* aim, const double* bre,
                     const double* bim, size_t n);
double max_weighted_diff_abs2(const double* w, const double* are, const double* aim,
                              const double* bre, const double* bim, size_t n);
} // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
#define GLL_HAVE_AVX2_BACKEND 1
namespace avx2 {
double max_abs2(const double* re, const double* im, size_t n);
double max_diff_abs2(const double* are, const double* aim, const double* bre,
                     const double* bim, size_t n);
double max_weighted_diff_abs2(const double* w, const double* are, const double* aim,
                              const double* bre, const double* bim, size_t n);
} // namespace avx2
#endif

#if defined(__aarch64__)
#define GLL_HAVE_NEON_BACKEND 1
namespace neon {
double max_abs2(const double* re, const double* im, size_t n);
double max_diff_abs2(const double* are, const double* aim, const double* bre,
                     const double* bim, size_t n);
double max_weighted_diff_abs2(const double* w, const double* are, const double* aim,
                              const double* bre, const double* bim, size_t n);
} // namespace neon
#endif

} // namespace gll::kernels
