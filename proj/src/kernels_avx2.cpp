// AVX2 variants. Compiled with -mavx2 only; dispatched at runtime after a
// cpuid check. Mul/add are kept explicit (no FMA) so every lane computes
// the same IEEE value as the scalar reference.

#include "gll/kernels.hpp"

#if defined(GLL_HAVE_AVX2_BACKEND)

#include <immintrin.h>

namespace gll::kernels::avx2 {

namespace {

double hmax(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    __m128d m = _mm_max_pd(lo, hi);
    m = _mm_max_sd(m, _mm_unpackhi_pd(m, m));
    return _mm_cvtsd_f64(m);
}

} // namespace

double max_abs2(const double* re, const double* im, size_t n) {
    __m256d best = _mm256_setzero_pd();
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d r = _mm256_loadu_pd(re + i);
        __m256d m = _mm256_loadu_pd(im + i);
        __m256d s = _mm256_add_pd(_mm256_mul_pd(r, r), _mm256_mul_pd(m, m));
        best = _mm256_max_pd(best, s);
    }
    double out = hmax(best);
    for (; i < n; ++i) {
        double m = re[i] * re[i] + im[i] * im[i];
        if (m > out) out = m;
    }
    return out;
}

double max_diff_abs2(const double* are, const double* aim, const double* bre,
                     const double* bim, size_t n) {
    __m256d best = _mm256_setzero_pd();
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d dr = _mm256_sub_pd(_mm256_loadu_pd(are + i), _mm256_loadu_pd(bre + i));
        __m256d di = _mm256_sub_pd(_mm256_loadu_pd(aim + i), _mm256_loadu_pd(bim + i));
        __m256d s = _mm256_add_pd(_mm256_mul_pd(dr, dr), _mm256_mul_pd(di, di));
        best = _mm256_max_pd(best, s);
    }
    double out = hmax(best);
    for (; i < n; ++i) {
        double dr = are[i] - bre[i];
        double di = aim[i] - bim[i];
        double m = dr * dr + di * di;
        if (m > out) out = m;
    }
    return out;
}

double max_weighted_diff_abs2(const double* w, const double* are, const double* aim,
                              const double* bre, const double* bim, size_t n) {
    __m256d best = _mm256_setzero_pd();
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d dr = _mm256_sub_pd(_mm256_loadu_pd(are + i), _mm256_loadu_pd(bre + i));
        __m256d di = _mm256_sub_pd(_mm256_loadu_pd(aim + i), _mm256_loadu_pd(bim + i));
        __m256d wv = _mm256_loadu_pd(w + i);
        __m256d s = _mm256_mul_pd(_mm256_mul_pd(wv, wv),
                                  _mm256_add_pd(_mm256_mul_pd(dr, dr),
                                                _mm256_mul_pd(di, di)));
        best = _mm256_max_pd(best, s);
    }
    double out = hmax(best);
    for (; i < n; ++i) {
        double dr = are[i] - bre[i];
        double di = aim[i] - bim[i];
        double m = (w[i] * w[i]) * (dr * dr + di * di);
        if (m > out) out = m;
    }
    return out;
}

} // namespace gll::kernels::avx2

#endif // GLL_HAVE_AVX2_BACKEND
