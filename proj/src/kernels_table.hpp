#pragma once
#include <cstddef>

// Internal dispatch table shared by the scalar and AVX2 translation units.
// Not installed; include only from src/.

namespace bbols::kernels::detail {

struct KernelTable {
    double (*dot)(const double*, const double*, std::size_t);
    double (*nrm2_sq)(const double*, std::size_t);
    void (*axpy)(double, const double*, double*, std::size_t);
    void (*scal)(double, double*, std::size_t);
    void (*dot_2x4)(const double*, const double*,
                    const double*, const double*,
                    const double*, const double*,
                    std::size_t, double*);
    void (*gemv_t)(const double*, std::size_t, std::size_t,
                   const double*, double*);
    void (*gemv_n)(const double*, std::size_t, std::size_t,
                   const double*, double, double*);
    const char* name;
};

extern const KernelTable scalar_table;

// Returns the AVX2 table, or nullptr when the translation unit was built
// without AVX2 support for this architecture.
const KernelTable* avx2_table_or_null();

}  // namespace bbols::kernels::detail
