#pragma once
#include <cstddef>
#include <stdexcept>
#include <vector>

// Core data types for the block-sparse sensing model y = D x + noise,
// where the n columns of D are partitioned into n/d contiguous blocks of
// width d. Block indices are 0-based throughout the library.

namespace bbols {

struct BlockMatrix {
    std::size_t m = 0;  // rows
    std::size_t n = 0;  // columns, a multiple of d
    std::size_t d = 1;  // block width
    std::vector<double> a;  // column-major, size m * n

    BlockMatrix() = default;
    BlockMatrix(std::size_t m_, std::size_t n_, std::size_t d_)
        : m(m_), n(n_), d(d_), a(m_ * n_, 0.0) {
        if (d == 0 || n % d != 0) {
            throw std::invalid_argument(
                "BlockMatrix: block width must divide the column count");
        }
    }

    std::size_t num_blocks() const { return d == 0 ? 0 : n / d; }

    double* col(std::size_t j) { return a.data() + j * m; }
    const double* col(std::size_t j) const { return a.data() + j * m; }

    // First column of block b; the block occupies columns [b*d, (b+1)*d).
    double* block_col(std::size_t b) { return col(b * d); }
    const double* block_col(std::size_t b) const { return col(b * d); }
};

// A block-sparse coefficient vector together with its true support.
struct BlockSparseSignal {
    std::vector<double> x;                    // length n
    std::size_t d = 1;                        // block width
    std::vector<std::size_t> support_blocks;  // sorted, distinct, 0-based

    std::size_t k() const { return support_blocks.size(); }
};

// Largest deviation of any column norm from 1. Generators are required to
// keep this below tight tolerance; consumers can assert on it.
double max_column_norm_deviation(const BlockMatrix& D);

}  // namespace bbols
