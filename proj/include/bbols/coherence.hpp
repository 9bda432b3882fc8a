#pragma once
#include <cstddef>
#include <vector>

#include "bbols/block_matrix.hpp"

// Dictionary coherence measurements and the exact recovery coefficient.
// The profile scan never materializes the full Gram matrix; it streams
// block-aligned column tiles through the register-blocked dot kernels so
// an 8192-column dictionary stays within cache-friendly working sets.

namespace bbols {

struct CoherenceProfile {
    double mu = 0.0;    // max |<D_i, D_j>| over columns in different blocks,
                        // and over all column pairs for the scalar view
    double mu_B = 0.0;  // max spectral norm of an off-diagonal d x d
                        // cross-block Gram, divided by d
    double nu = 0.0;    // max |<D_i, D_j>| within a block (0 when d == 1)
};

// One pass over all column pairs. mu here is the plain mutual coherence
// (every pair i != j); for d == 1 the conventions give nu = 0 and
// mu_B = mu exactly.
CoherenceProfile coherence_profile(const BlockMatrix& D);

double mutual_coherence(const BlockMatrix& D);

// Exact recovery coefficient of a support after some of it has already
// been selected: with S the selected blocks and P the projector onto
// their span, columns are renormalized by 1 / ||(I - P) D_i|| and the
// coefficient is the worst column-block sum of spectral norms of
// pinv(A) B, where A holds the renormalized remaining true blocks and B
// the renormalized off-support blocks. Recovery by the block solvers is
// guaranteed while the value stays below 1.
//
// Throws std::invalid_argument when selected is not a subset of
// true_blocks, when the selected columns are rank deficient, or when a
// column lies in the span of the selected blocks (its renormalization
// would divide by zero).
double erc_gamma(const BlockMatrix& D,
                 const std::vector<std::size_t>& true_blocks,
                 const std::vector<std::size_t>& selected_blocks = {});

}  // namespace bbols
