#include "gll/kernels.hpp"

namespace gll::kernels {

namespace scalar {

double max_abs2(const double* re, const double* im, size_t n) {
    double best = 0.0;
    for (size_t i = 0; i < n; ++i) {
        double m = re[i] * re[i] + im[i] * im[i];
        if (m > best) best = m;
    }
    return best;
}

double max_diff_abs2(const double* are, const double* aim, const double* bre,
                     const double* bim, size_t n) {
    double best = 0.0;
    for (size_t i = 0; i < n; ++i) {
        double dr = are[i] - bre[i];
        double di = aim[i] - bim[i];
        double m = dr * dr + di * di;
        if (m > best) best = m;
    }
    return best;
}

double max_weighted_diff_abs2(const double* w, const double* are, const double* aim,
                              const double* bre, const double* bim, size_t n) {
    double best = 0.0;
    for (size_t i = 0; i < n; ++i) {
        double dr = are[i] - bre[i];
        double di = aim[i] - bim[i];
        double m = (w[i] * w[i]) * (dr * dr + di * di);
        if (m > best) best = m;
    }
    return best;
}

} // namespace scalar

namespace {

struct Backend {
    const char* name;
    double (*max_abs2)(const double*, const double*, size_t);
    double (*max_diff_abs2)(const double*, const double*, const double*,
                            const double*, size_t);
    double (*max_weighted_diff_abs2)(const double*, const double*, const double*,
                                     const double*, const double*, size_t);
};

Backend select_backend() {
#if defined(GLL_HAVE_AVX2_BACKEND)
    if (__builtin_cpu_supports("avx2"))
        return {"avx2", &avx2::max_abs2, &avx2::max_diff_abs2,
                &avx2::max_weighted_diff_abs2};
#endif
#if defined(GLL_HAVE_NEON_BACKEND)
    return {"neon", &neon::max_abs2, &neon::max_diff_abs2,
            &neon::max_weighted_diff_abs2};
#endif
    return {"scalar", &scalar::max_abs2, &scalar::max_diff_abs2,
            &scalar::max_weighted_diff_abs2};
}

const Backend& backend() {
    static const Backend b = select_backend();
    return b;
}

} // namespace

const char* active_backend() { return backend().name; }

double max_abs2(const double* re, const double* im, size_t n) {
    return backend().max_abs2(re, im, n);
}

double max_diff_abs2(const double* are, const double* aim, const double* bre,
                     const double* bim, size_t n) {
    return backend().max_diff_abs2(are, aim, bre, bim, n);
}

double max_weighted_diff_abs2(const double* w, const double* are, const double* aim,
                              const double* bre, const double* bim, size_t n) {
    return backend().max_weighted_diff_abs2(w, are, aim, bre, bim, n);
}

} // namespace gll::kernels
