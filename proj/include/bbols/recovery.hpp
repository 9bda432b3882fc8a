#pragma once
#include <cstddef>
#include <vector>

#include "bbols/block_matrix.hpp"

// Greedy block-sparse solvers. One engine drives four variants:
//
//   omp  / bomp  pick the block with the largest residual correlation
//   ols  / bols  pick the block whose selection minimizes the next
//                residual (evaluated exactly through an incrementally
//                maintained projected dictionary)
//
// omp and ols are the width-1 specializations: they ignore the block
// partition and select single columns, so on a d == 1 matrix bols and
// ols run literally the same code path.
//
// Stopping is pluggable. The blind rules compare the normalized
// correlation statistic max_block ||D_block^T r||_2 / ||r||_2 (an
// infinity norm over blocks) against a threshold derived from the
// dictionary coherence alone, before every selection, so no noise or
// sparsity knowledge is needed.

namespace bbols {

enum class Algorithm { omp, ols, bomp, bols };

struct StoppingRule {
    enum class Kind {
        fixed_iterations,  // run exactly T selections
        residual_norm,     // stop once ||r|| <= residual_tol
        blind_block,       // stat <= sqrt(d) * xi * coherence (mu_B)
        blind_scalar,      // stat <= xi * coherence (mu), width-1 stat
    };
    Kind kind = Kind::fixed_iterations;
    std::size_t iterations = 0;
    double residual_tol = 0.0;
    double xi = 0.0;
    double coherence = 0.0;
    // Hard cap on selections; 0 means the solvable maximum floor(m / d).
    std::size_t max_iterations = 0;

    static StoppingRule fixed(std::size_t T) {
        StoppingRule r;
        r.kind = Kind::fixed_iterations;
        r.iterations = T;
        return r;
    }
    static StoppingRule residual(double tol) {
        StoppingRule r;
        r.kind = Kind::residual_norm;
        r.residual_tol = tol;
        return r;
    }
    static StoppingRule blind_block(double xi, double mu_B) {
        StoppingRule r;
        r.kind = Kind::blind_block;
        r.xi = xi;
        r.coherence = mu_B;
        return r;
    }
    static StoppingRule blind_scalar(double xi, double mu) {
        StoppingRule r;
        r.kind = Kind::blind_scalar;
        r.xi = xi;
        r.coherence = mu;
        return r;
    }
};

enum class StopReason { blind_rule, fixed_count, residual, cap };

struct RecoveryResult {
    std::vector<double> x_hat;  // length n, least squares on the selection
    // Selection order; block indices for bomp/bols, column indices for
    // omp/ols.
    std::vector<std::size_t> selected_blocks;
    // residual_trace[0] = ||y||, then ||r|| after each selection.
    std::vector<double> residual_trace;
    // Blind statistic before each selection attempt (blind rules only).
    std::vector<double> blind_stat_trace;
    StopReason stop_reason = StopReason::cap;
    std::size_t iterations = 0;
    // The final least squares system was rank deficient and x_hat is the
    // minimum-norm solution.
    bool ls_rank_deficient = false;
};

// max over width-d groups of the group 2-norm of v (length n).
double l2inf_norm(const double* v, std::size_t n, std::size_t d);

// ||D^T r||_{2,inf} / ||r||_2 over width-d blocks; +infinity when r = 0.
double blind_statistic(const BlockMatrix& D, const std::vector<double>& r,
                       std::size_t d);

// One residual-minimizing selection given already-selected blocks,
// computed from scratch (the support need not come from a previous run).
// Throws std::runtime_error when every remaining block lies in the span
// of the selection, where the objective cannot distinguish candidates.
std::size_t bols_step(const BlockMatrix& D, const std::vector<double>& y,
                      const std::vector<std::size_t>& selected_blocks);

// One correlation-maximizing selection from a residual.
std::size_t bomp_step(const BlockMatrix& D, const std::vector<double>& r);

// Full greedy run. Ties in the selection objective go to the smallest
// block index; a residual below 1e-12 * ||y|| stops every rule with
// StopReason::residual.
RecoveryResult recover(const BlockMatrix& D, const std::vector<double>& y,
                       Algorithm alg, const StoppingRule& rule);

const char* to_string(Algorithm a);
const char* to_string(StopReason r);

}  // namespace bbols
