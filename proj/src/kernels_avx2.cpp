// Compiled with -mavx2 -mfma only; nothing here may run unless the dispatcher
// confirmed AVX2 support.

#include <immintrin.h>

#include "cimra/kernels.hpp"

namespace cimra::kern {

namespace {

inline double hsum256(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d swapped = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, swapped));
}

void matvec_avx2(const double* m, const double* x, double* y, std::size_t n) {
    const std::size_t n4 = n & ~std::size_t(3);
    for (std::size_t r = 0; r < n; ++r) {
        const double* row = m + r * n;
        __m256d acc = _mm256_setzero_pd();
        std::size_t c = 0;
        for (; c < n4; c += 4) {
            acc = _mm256_fmadd_pd(_mm256_loadu_pd(row + c), _mm256_loadu_pd(x + c), acc);
        }
        double tail = 0.0;
        for (; c < n; ++c) tail += row[c] * x[c];
        y[r] = hsum256(acc) + tail;
    }
}

void axpy_avx2(double a, const double* x, double* y, std::size_t n) {
    const __m256d va = _mm256_set1_pd(a);
    const std::size_t n4 = n & ~std::size_t(3);
    std::size_t i = 0;
    for (; i < n4; i += 4) {
        __m256d vy = _mm256_loadu_pd(y + i);
        vy = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), vy);
        _mm256_storeu_pd(y + i, vy);
    }
    for (; i < n; ++i) y[i] += a * x[i];
}

double dot_avx2(const double* x, const double* y, std::size_t n) {
    const std::size_t n4 = n & ~std::size_t(3);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i < n4; i += 4) {
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc);
    }
    double tail = 0.0;
    for (; i < n; ++i) tail += x[i] * y[i];
    return hsum256(acc) + tail;
}

void cim_step_avx2(double* c, double* s, const double* jc, const double* js,
                   const double* field, double pump, double dt, std::size_t n) {
    const __m256d vdt = _mm256_set1_pd(dt);
    const __m256d gain_c = _mm256_set1_pd(-1.0 + pump);
    const __m256d gain_s = _mm256_set1_pd(-1.0 - pump);
    const std::size_t n4 = n & ~std::size_t(3);
    std::size_t i = 0;
    for (; i < n4; i += 4) {
        const __m256d ci = _mm256_loadu_pd(c + i);
        const __m256d si = _mm256_loadu_pd(s + i);
        const __m256d amp2 = _mm256_fmadd_pd(ci, ci, _mm256_mul_pd(si, si));
        const __m256d f = _mm256_loadu_pd(field + i);
        const __m256d dc = _mm256_add_pd(_mm256_mul_pd(_mm256_sub_pd(gain_c, amp2), ci),
                                         _mm256_sub_pd(_mm256_loadu_pd(jc + i), f));
        const __m256d ds = _mm256_add_pd(_mm256_mul_pd(_mm256_sub_pd(gain_s, amp2), si),
                                         _mm256_sub_pd(_mm256_loadu_pd(js + i), f));
        _mm256_storeu_pd(c + i, _mm256_fmadd_pd(vdt, dc, ci));
        _mm256_storeu_pd(s + i, _mm256_fmadd_pd(vdt, ds, si));
    }
    for (; i < n; ++i) {
        const double ci = c[i];
        const double si = s[i];
        const double amp2 = ci * ci + si * si;
        const double dc = (-1.0 + pump - amp2) * ci + jc[i] - field[i];
        const double ds = (-1.0 - pump - amp2) * si + js[i] - field[i];
        c[i] = ci + dt * dc;
        s[i] = si + dt * ds;
    }
}

}  // namespace

const Kernels& avx2_kernels() {
    static const Kernels k{"avx2", matvec_avx2, axpy_avx2, dot_avx2, cim_step_avx2};
    return k;
}

}  // namespace cimra::kern
