// NEON variants (aarch64 baseline). Same operation order as the scalar
// reference; no FMA.

#include "gll/kernels.hpp"

#if defined(GLL_HAVE_NEON_BACKEND)

#include <arm_neon.h>

namespace gll::kernels::neon {

namespace {

double hmax(float64x2_t v) { return vmaxvq_f64(v); }

} // namespace

double max_abs2(const double* re, const double* im, size_t n) {
    float64x2_t best = vdupq_n_f64(0.0);
    size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        float64x2_t r = vld1q_f64(re + i);
        float64x2_t m = vld1q_f64(im + i);
        float64x2_t s = vaddq_f64(vmulq_f64(r, r), vmulq_f64(m, m));
        best = vmaxq_f64(best, s);
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
    float64x2_t best = vdupq_n_f64(0.0);
    size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        float64x2_t dr = vsubq_f64(vld1q_f64(are + i), vld1q_f64(bre + i));
        float64x2_t di = vsubq_f64(vld1q_f64(aim + i), vld1q_f64(bim + i));
        float64x2_t s = vaddq_f64(vmulq_f64(dr, dr), vmulq_f64(di, di));
        best = vmaxq_f64(best, s);
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
    float64x2_t best = vdupq_n_f64(0.0);
    size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        float64x2_t dr = vsubq_f64(vld1q_f64(are + i), vld1q_f64(bre + i));
        float64x2_t di = vsubq_f64(vld1q_f64(aim + i), vld1q_f64(bim + i));
        float64x2_t wv = vld1q_f64(w + i);
        float64x2_t s = vmulq_f64(vmulq_f64(wv, wv),
                                  vaddq_f64(vmulq_f64(dr, dr), vmulq_f64(di, di)));
        best = vmaxq_f64(best, s);
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

} // namespace gll::kernels::neon

#endif // GLL_HAVE_NEON_BACKEND
