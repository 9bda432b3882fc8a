#pragma once
#include <cstddef>

// Low-level dense kernels used by the coherence scan and the greedy solvers.
// Every entry point has a scalar reference implementation and, on x86-64
// hosts with AVX2+FMA, a vectorized variant. The active variant is chosen
// once at first use from CPU capabilities; tests can pin a specific backend
// to compare the two implementations on identical inputs.
//
// All pointers are to unaliased double buffers unless noted. No alignment
// is assumed. Vectorized and scalar variants may differ in the last few
// ulps because they reduce in different orders; callers that compare
// backends must allow for that.

namespace bbols::kernels {

enum class Backend {
    auto_detect,  // pick the best variant the CPU supports
    scalar,
    avx2,
};

// Pins the backend for subsequent kernel calls. auto_detect restores CPU
// dispatch. Requesting avx2 on a CPU without AVX2+FMA keeps the scalar
// table and returns false.
bool force_backend(Backend b);
Backend active_backend();
const char* backend_name();
bool cpu_has_avx2();

// sum_i a[i] * b[i]
double dot(const double* a, const double* b, std::size_t n);

// sum_i a[i]^2
double nrm2_sq(const double* a, std::size_t n);

// y[i] += alpha * x[i]
void axpy(double alpha, const double* x, double* y, std::size_t n);

// x[i] *= alpha
void scal(double alpha, double* x, std::size_t n);

// Eight simultaneous dot products: out[i*4 + j] = dot(a_i, b_j) for the
// two a-columns and four b-columns. This is the register-blocked tile at
// the core of the Gram scan; grouping 2x4 keeps eight independent
// accumulator chains in flight, which a single dot cannot.
void dot_2x4(const double* a0, const double* a1,
             const double* b0, const double* b1,
             const double* b2, const double* b3,
             std::size_t n, double* out8);

// out[j] = dot(column j of A, x) for column-major A (m rows, k columns,
// leading dimension m). This is the D^T r correlation sweep.
void gemv_t(const double* A, std::size_t m, std::size_t k,
            const double* x, double* out);

// out[i] = beta * out[i] + sum_j A[i + j*m] * x[j] (column-major A).
void gemv_n(const double* A, std::size_t m, std::size_t k,
            const double* x, double beta, double* out);

}  // namespace bbols::kernels
