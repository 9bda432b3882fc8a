#pragma once
#include <cstddef>
#include <vector>

#include "bbols/block_matrix.hpp"
#include "bbols/rng.hpp"

// Instance generators for the Monte Carlo experiments: sensing matrices,
// block-sparse spectra, and SNR-calibrated noise. All draws come from the
// caller's Rng stream in a documented order, so a (seed, point, trial)
// triple fully determines the instance.

namespace bbols {

enum class SignalDist {
    gauss01,     // i.i.d. standard normal entries
    gauss1_001,  // i.i.d. normal with mean 1 and variance 0.01
};

// Gaussian matrix with i.i.d. N(0, 1/m) entries whose d-column blocks are
// then orthonormalized in place, block by block. Columns end up exactly
// unit norm and each block forms an orthonormal frame. Requires d <= m.
// Draw order: column-major, column by column.
BlockMatrix gen_gaussian_block_orthogonal(std::size_t m, std::size_t n,
                                          std::size_t d, Rng& rng);

// Highly correlated dictionary: column i is h_i + g_i * 1 with
// h_i ~ N(0, I) and g_i ~ U[0, G], normalized to unit norm. The shared
// all-ones component drives mutual coherence up as G grows. The block
// width only sets the partition metadata. Draw order per column: the m
// entries of h_i, then g_i.
BlockMatrix gen_hybrid(std::size_t m, std::size_t n, std::size_t d,
                       double G, Rng& rng);

// Block-sparse coefficient vector with k distinct support blocks chosen
// uniformly at random and entries drawn i.i.d. from dist. The returned
// support is sorted ascending. Requires k <= n/d.
BlockSparseSignal gen_signal(std::size_t n, std::size_t d, std::size_t k,
                             SignalDist dist, Rng& rng);

// y = D x.
std::vector<double> apply(const BlockMatrix& D, const std::vector<double>& x);

struct NoiseRealization {
    std::vector<double> eps;  // length m, i.i.d. N(0, sigma^2)
    double sigma = 0.0;
};

// Draws noise whose variance realizes the requested SNR in dB, defined as
// ||D x||^2 / (m sigma^2). An infinite snr_db yields sigma = 0 and a zero
// vector. Rejects x with ||D x|| = 0 for finite SNR, where no sigma can
// realize the ratio.
NoiseRealization calibrate_noise(const BlockMatrix& D,
                                 const std::vector<double>& x,
                                 double snr_db, Rng& rng);

// Relative recovery test: ||x_hat - x_true|| <= rel_tol * ||x_true||,
// falling back to the absolute test ||x_hat|| <= rel_tol when the
// reference signal is identically zero.
bool is_success(const std::vector<double>& x_hat,
                const std::vector<double>& x_true, double rel_tol = 1e-2);

}  // namespace bbols
