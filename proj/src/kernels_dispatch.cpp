#include "bbols/kernels.hpp"

#include "kernels_table.hpp"

namespace bbols::kernels {
namespace {

using detail::KernelTable;

bool detect_avx2() {
#if defined(__x86_64__)
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

const KernelTable* best_table() {
    if (detect_avx2()) {
        if (const KernelTable* t = detail::avx2_table_or_null()) return t;
    }
    return &detail::scalar_table;
}

const KernelTable* g_active = nullptr;
Backend g_mode = Backend::auto_detect;

const KernelTable& table() {
    if (!g_active) g_active = best_table();
    return *g_active;
}

}  // namespace

bool cpu_has_avx2() {
    return detect_avx2() && detail::avx2_table_or_null() != nullptr;
}

bool force_backend(Backend b) {
    switch (b) {
        case Backend::auto_detect:
            g_active = best_table();
            g_mode = Backend::auto_detect;
            return true;
        case Backend::scalar:
            g_active = &detail::scalar_table;
            g_mode = Backend::scalar;
            return true;
        case Backend::avx2:
            if (!cpu_has_avx2()) return false;
            g_active = detail::avx2_table_or_null();
            g_mode = Backend::avx2;
            return true;
    }
    return false;
}

Backend active_backend() {
    if (g_mode != Backend::auto_detect) return g_mode;
    return &table() == &detail::scalar_table ? Backend::scalar : Backend::avx2;
}

const char* backend_name() { return table().name; }

double dot(const double* a, const double* b, std::size_t n) {
    return table().dot(a, b, n);
}

double nrm2_sq(const double* a, std::size_t n) {
    return table().nrm2_sq(a, n);
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
    table().axpy(alpha, x, y, n);
}

void scal(double alpha, double* x, std::size_t n) {
    table().scal(alpha, x, n);
}

void dot_2x4(const double* a0, const double* a1,
             const double* b0, const double* b1,
             const double* b2, const double* b3,
             std::size_t n, double* out8) {
    table().dot_2x4(a0, a1, b0, b1, b2, b3, n, out8);
}

void gemv_t(const double* A, std::size_t m, std::size_t k,
            const double* x, double* out) {
    table().gemv_t(A, m, k, x, out);
}

void gemv_n(const double* A, std::size_t m, std::size_t k,
            const double* x, double beta, double* out) {
    table().gemv_n(A, m, k, x, beta, out);
}

}  // namespace bbols::kernels
