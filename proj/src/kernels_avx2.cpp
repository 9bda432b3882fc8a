#include "kernels_table.hpp"

// AVX2+FMA kernel variants. This translation unit is compiled with
// -mavx2 -mfma; nothing here may be called unless cpuid reports both
// features (the dispatcher guarantees that).

#if defined(__x86_64__) && defined(__AVX2__) && defined(__FMA__)

#include <immintrin.h>

namespace bbols::kernels::detail {
namespace {

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    __m128d s2 = _mm_add_pd(lo, hi);
    __m128d s1 = _mm_add_sd(s2, _mm_unpackhi_pd(s2, s2));
    return _mm_cvtsd_f64(s1);
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    __m256d acc2 = _mm256_setzero_pd();
    __m256d acc3 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 16 <= n; i += 16) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i),
                               _mm256_loadu_pd(b + i), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4),
                               _mm256_loadu_pd(b + i + 4), acc1);
        acc2 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 8),
                               _mm256_loadu_pd(b + i + 8), acc2);
        acc3 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 12),
                               _mm256_loadu_pd(b + i + 12), acc3);
    }
    for (; i + 4 <= n; i += 4) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i),
                               _mm256_loadu_pd(b + i), acc0);
    }
    double s = hsum(_mm256_add_pd(_mm256_add_pd(acc0, acc1),
                                  _mm256_add_pd(acc2, acc3)));
    for (; i < n; ++i) s += a[i] * b[i];
    return s;
}

double nrm2_sq_avx2(const double* a, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        __m256d v0 = _mm256_loadu_pd(a + i);
        __m256d v1 = _mm256_loadu_pd(a + i + 4);
        acc0 = _mm256_fmadd_pd(v0, v0, acc0);
        acc1 = _mm256_fmadd_pd(v1, v1, acc1);
    }
    double s = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) s += a[i] * a[i];
    return s;
}

void axpy_avx2(double alpha, const double* x, double* y, std::size_t n) {
    const __m256d va = _mm256_set1_pd(alpha);
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        __m256d y0 = _mm256_loadu_pd(y + i);
        __m256d y1 = _mm256_loadu_pd(y + i + 4);
        y0 = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), y0);
        y1 = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i + 4), y1);
        _mm256_storeu_pd(y + i, y0);
        _mm256_storeu_pd(y + i + 4, y1);
    }
    for (; i < n; ++i) y[i] += alpha * x[i];
}

void scal_avx2(double alpha, double* x, std::size_t n) {
    const __m256d va = _mm256_set1_pd(alpha);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(x + i, _mm256_mul_pd(va, _mm256_loadu_pd(x + i)));
    }
    for (; i < n; ++i) x[i] *= alpha;
}

// Eight accumulator chains, one per output, so the FMA pipeline stays full
// while each loaded b-vector is reused for both a-columns.
void dot_2x4_avx2(const double* a0, const double* a1,
                  const double* b0, const double* b1,
                  const double* b2, const double* b3,
                  std::size_t n, double* out8) {
    __m256d s00 = _mm256_setzero_pd(), s01 = _mm256_setzero_pd();
    __m256d s02 = _mm256_setzero_pd(), s03 = _mm256_setzero_pd();
    __m256d s10 = _mm256_setzero_pd(), s11 = _mm256_setzero_pd();
    __m256d s12 = _mm256_setzero_pd(), s13 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d x0 = _mm256_loadu_pd(a0 + i);
        const __m256d x1 = _mm256_loadu_pd(a1 + i);
        __m256d v = _mm256_loadu_pd(b0 + i);
        s00 = _mm256_fmadd_pd(x0, v, s00);
        s10 = _mm256_fmadd_pd(x1, v, s10);
        v = _mm256_loadu_pd(b1 + i);
        s01 = _mm256_fmadd_pd(x0, v, s01);
        s11 = _mm256_fmadd_pd(x1, v, s11);
        v = _mm256_loadu_pd(b2 + i);
        s02 = _mm256_fmadd_pd(x0, v, s02);
        s12 = _mm256_fmadd_pd(x1, v, s12);
        v = _mm256_loadu_pd(b3 + i);
        s03 = _mm256_fmadd_pd(x0, v, s03);
        s13 = _mm256_fmadd_pd(x1, v, s13);
    }
    out8[0] = hsum(s00); out8[1] = hsum(s01);
    out8[2] = hsum(s02); out8[3] = hsum(s03);
    out8[4] = hsum(s10); out8[5] = hsum(s11);
    out8[6] = hsum(s12); out8[7] = hsum(s13);
    for (; i < n; ++i) {
        const double x0 = a0[i], x1 = a1[i];
        out8[0] += x0 * b0[i]; out8[1] += x0 * b1[i];
        out8[2] += x0 * b2[i]; out8[3] += x0 * b3[i];
        out8[4] += x1 * b0[i]; out8[5] += x1 * b1[i];
        out8[6] += x1 * b2[i]; out8[7] += x1 * b3[i];
    }
}

// Four columns per pass amortizes the x loads across column dots.
void gemv_t_avx2(const double* A, std::size_t m, std::size_t k,
                 const double* x, double* out) {
    std::size_t j = 0;
    for (; j + 4 <= k; j += 4) {
        const double* c0 = A + j * m;
        const double* c1 = c0 + m;
        const double* c2 = c1 + m;
        const double* c3 = c2 + m;
        __m256d s0 = _mm256_setzero_pd(), s1 = _mm256_setzero_pd();
        __m256d s2 = _mm256_setzero_pd(), s3 = _mm256_setzero_pd();
        std::size_t i = 0;
        for (; i + 4 <= m; i += 4) {
            const __m256d vx = _mm256_loadu_pd(x + i);
            s0 = _mm256_fmadd_pd(_mm256_loadu_pd(c0 + i), vx, s0);
            s1 = _mm256_fmadd_pd(_mm256_loadu_pd(c1 + i), vx, s1);
            s2 = _mm256_fmadd_pd(_mm256_loadu_pd(c2 + i), vx, s2);
            s3 = _mm256_fmadd_pd(_mm256_loadu_pd(c3 + i), vx, s3);
        }
        double r0 = hsum(s0), r1 = hsum(s1), r2 = hsum(s2), r3 = hsum(s3);
        for (; i < m; ++i) {
            r0 += c0[i] * x[i];
            r1 += c1[i] * x[i];
            r2 += c2[i] * x[i];
            r3 += c3[i] * x[i];
        }
        out[j] = r0; out[j + 1] = r1; out[j + 2] = r2; out[j + 3] = r3;
    }
    for (; j < k; ++j) out[j] = dot_avx2(A + j * m, x, m);
}

void gemv_n_avx2(const double* A, std::size_t m, std::size_t k,
                 const double* x, double beta, double* out) {
    if (beta == 0.0) {
        for (std::size_t i = 0; i < m; ++i) out[i] = 0.0;
    } else if (beta != 1.0) {
        scal_avx2(beta, out, m);
    }
    for (std::size_t j = 0; j < k; ++j) axpy_avx2(x[j], A + j * m, out, m);
}

const KernelTable avx2_table = {
    dot_avx2, nrm2_sq_avx2, axpy_avx2, scal_avx2,
    dot_2x4_avx2, gemv_t_avx2, gemv_n_avx2, "avx2",
};

}  // namespace

const KernelTable* avx2_table_or_null() { return &avx2_table; }

}  // namespace bbols::kernels::detail

#else

namespace bbols::kernels::detail {
const KernelTable* avx2_table_or_null() { return nullptr; }
}  // namespace bbols::kernels::detail

#endif
