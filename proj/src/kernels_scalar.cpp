#include "kernels_table.hpp"

// Reference kernels. Plain sequential loops, kept free of manual unrolling
// so they stay an unambiguous definition of each operation for the
// backend-equivalence tests.

namespace bbols::kernels::detail {
namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
}

double nrm2_sq_scalar(const double* a, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i] * a[i];
    return s;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void scal_scalar(double alpha, double* x, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) x[i] *= alpha;
}

void dot_2x4_scalar(const double* a0, const double* a1,
                    const double* b0, const double* b1,
                    const double* b2, const double* b3,
                    std::size_t n, double* out8) {
    double s00 = 0.0, s01 = 0.0, s02 = 0.0, s03 = 0.0;
    double s10 = 0.0, s11 = 0.0, s12 = 0.0, s13 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double x0 = a0[i], x1 = a1[i];
        s00 += x0 * b0[i];
        s01 += x0 * b1[i];
        s02 += x0 * b2[i];
        s03 += x0 * b3[i];
        s10 += x1 * b0[i];
        s11 += x1 * b1[i];
        s12 += x1 * b2[i];
        s13 += x1 * b3[i];
    }
    out8[0] = s00; out8[1] = s01; out8[2] = s02; out8[3] = s03;
    out8[4] = s10; out8[5] = s11; out8[6] = s12; out8[7] = s13;
}

void gemv_t_scalar(const double* A, std::size_t m, std::size_t k,
                   const double* x, double* out) {
    for (std::size_t j = 0; j < k; ++j) out[j] = dot_scalar(A + j * m, x, m);
}

void gemv_n_scalar(const double* A, std::size_t m, std::size_t k,
                   const double* x, double beta, double* out) {
    if (beta == 0.0) {
        for (std::size_t i = 0; i < m; ++i) out[i] = 0.0;
    } else if (beta != 1.0) {
        for (std::size_t i = 0; i < m; ++i) out[i] *= beta;
    }
    for (std::size_t j = 0; j < k; ++j) axpy_scalar(x[j], A + j * m, out, m);
}

}  // namespace

const KernelTable scalar_table = {
    dot_scalar, nrm2_sq_scalar, axpy_scalar, scal_scalar,
    dot_2x4_scalar, gemv_t_scalar, gemv_n_scalar, "scalar",
};

}  // namespace bbols::kernels::detail
