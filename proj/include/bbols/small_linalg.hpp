#pragma once
#include <cstddef>
#include <vector>

// Small dense helpers sized for block widths and selected-support Gram
// matrices (dimensions up to a few dozen). The solver hot paths need
// many spectral norms of d x d blocks and incremental orthonormal bases;
// both are cheap enough here that a full LAPACK dependency would buy
// nothing.

namespace bbols {

// Eigenvalues of a symmetric s x s matrix (row- or column-major, it is
// symmetric), ascending. Cyclic Jacobi; intended for s <= ~64.
std::vector<double> sym_eigenvalues(const double* S, std::size_t s);

// Largest singular value of a dense r x c column-major matrix with small
// c, computed from the eigenvalues of A^T A (closed form for c <= 2).
double spectral_norm(const double* A, std::size_t r, std::size_t c);

// Incrementally grown orthonormal basis (modified Gram-Schmidt with one
// reorthogonalization pass). Backs the projection work in the ERC
// evaluation and the per-candidate scans of the greedy solvers.
class MgsBasis {
  public:
    explicit MgsBasis(std::size_t m) : m_(m) {}

    std::size_t dim() const { return m_; }
    std::size_t size() const { return cols_; }
    const double* q(std::size_t i) const { return data_.data() + i * m_; }

    // v -= Q (Q^T v), removing the span(Q) component in place.
    void project_out(double* v) const;

    // Projects v against the current basis and appends the normalized
    // remainder unless its norm fell below drop_tol relative to the norm
    // v had before projection. Returns whether the basis grew.
    bool append(const double* v, double drop_tol = 1e-10);

    void clear() {
        cols_ = 0;
        data_.clear();
    }

  private:
    std::size_t m_;
    std::size_t cols_ = 0;
    std::vector<double> data_;  // column-major m_ x cols_
};

}  // namespace bbols
