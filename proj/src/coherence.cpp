#include "bbols/coherence.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "bbols/kernels.hpp"
#include "bbols/small_linalg.hpp"

namespace bbols {
namespace {

// Dense Gram tile: buf[ii * wj + jj] = <col(i0 + ii), col(j0 + jj)>.
// Rows advance in pairs and columns in fours so the 2x4 kernel keeps its
// eight accumulators busy; leftovers fall back to single dots.
void gram_tile(const BlockMatrix& D, std::size_t i0, std::size_t wi,
               std::size_t j0, std::size_t wj, double* buf) {
    const std::size_t m = D.m;
    double out8[8];
    std::size_t ii = 0;
    for (; ii + 2 <= wi; ii += 2) {
        const double* a0 = D.col(i0 + ii);
        const double* a1 = D.col(i0 + ii + 1);
        double* row0 = buf + ii * wj;
        double* row1 = row0 + wj;
        std::size_t jj = 0;
        for (; jj + 4 <= wj; jj += 4) {
            kernels::dot_2x4(a0, a1, D.col(j0 + jj), D.col(j0 + jj + 1),
                             D.col(j0 + jj + 2), D.col(j0 + jj + 3), m, out8);
            row0[jj] = out8[0];
            row0[jj + 1] = out8[1];
            row0[jj + 2] = out8[2];
            row0[jj + 3] = out8[3];
            row1[jj] = out8[4];
            row1[jj + 1] = out8[5];
            row1[jj + 2] = out8[6];
            row1[jj + 3] = out8[7];
        }
        for (; jj < wj; ++jj) {
            row0[jj] = kernels::dot(a0, D.col(j0 + jj), m);
            row1[jj] = kernels::dot(a1, D.col(j0 + jj), m);
        }
    }
    for (; ii < wi; ++ii) {
        const double* a0 = D.col(i0 + ii);
        double* row0 = buf + ii * wj;
        for (std::size_t jj = 0; jj < wj; ++jj) {
            row0[jj] = kernels::dot(a0, D.col(j0 + jj), m);
        }
    }
}

}  // namespace

CoherenceProfile coherence_profile(const BlockMatrix& D) {
    const std::size_t n = D.n, d = D.d;
    CoherenceProfile p;
    if (n < 2) return p;

    // Block-aligned tiles keep every d x d cross-Gram inside one tile
    // pair. 64 columns keeps two tiles of length-m columns resident in
    // L2 even at m = 2048.
    const std::size_t tile = std::max<std::size_t>(d, 64 / d * d);
    std::vector<double> buf(tile * tile);
    std::vector<double> blk(d * d);

    for (std::size_t i0 = 0; i0 < n; i0 += tile) {
        const std::size_t wi = std::min(tile, n - i0);
        for (std::size_t j0 = i0; j0 < n; j0 += tile) {
            const std::size_t wj = std::min(tile, n - j0);
            gram_tile(D, i0, wi, j0, wj, buf.data());
            const bool diag_tile = (i0 == j0);

            for (std::size_t ii = 0; ii < wi; ++ii) {
                const double* row = buf.data() + ii * wj;
                const std::size_t gi = i0 + ii;
                const std::size_t jj0 = diag_tile ? ii + 1 : 0;
                for (std::size_t jj = jj0; jj < wj; ++jj) {
                    const double v = std::abs(row[jj]);
                    if (gi / d == (j0 + jj) / d) {
                        p.nu = std::max(p.nu, v);
                    } else {
                        p.mu = std::max(p.mu, v);
                    }
                }
            }

            if (d > 1) {
                for (std::size_t bi = 0; bi < wi / d; ++bi) {
                    const std::size_t bj0 = diag_tile ? bi + 1 : 0;
                    for (std::size_t bj = bj0; bj < wj / d; ++bj) {
                        for (std::size_t c = 0; c < d; ++c) {
                            for (std::size_t r = 0; r < d; ++r) {
                                blk[c * d + r] =
                                    buf[(bi * d + r) * wj + bj * d + c];
                            }
                        }
                        const double s = spectral_norm(blk.data(), d, d);
                        p.mu_B = std::max(p.mu_B, s / static_cast<double>(d));
                    }
                }
            }
        }
    }
    if (d == 1) p.mu_B = p.mu;
    return p;
}

double mutual_coherence(const BlockMatrix& D) {
    return coherence_profile(D).mu;
}

double erc_gamma(const BlockMatrix& D,
                 const std::vector<std::size_t>& true_blocks,
                 const std::vector<std::size_t>& selected_blocks) {
    const std::size_t m = D.m, d = D.d, nb = D.num_blocks();
    if (true_blocks.empty()) {
        throw std::invalid_argument("erc_gamma: empty support");
    }
    std::vector<std::size_t> truth(true_blocks);
    std::sort(truth.begin(), truth.end());
    if (std::adjacent_find(truth.begin(), truth.end()) != truth.end() ||
        truth.back() >= nb) {
        throw std::invalid_argument("erc_gamma: invalid support blocks");
    }
    std::vector<std::size_t> sel(selected_blocks);
    std::sort(sel.begin(), sel.end());
    if (!std::includes(truth.begin(), truth.end(), sel.begin(), sel.end())) {
        throw std::invalid_argument(
            "erc_gamma: selected blocks must be a subset of the support");
    }

    std::vector<std::size_t> remaining;
    std::set_difference(truth.begin(), truth.end(), sel.begin(), sel.end(),
                        std::back_inserter(remaining));
    std::vector<std::size_t> others;
    for (std::size_t b = 0, ti = 0; b < nb; ++b) {
        if (ti < truth.size() && truth[ti] == b) {
            ++ti;
        } else {
            others.push_back(b);
        }
    }
    if (remaining.empty() || others.empty()) return 0.0;

    MgsBasis basis(m);
    for (std::size_t b : sel) {
        for (std::size_t c = 0; c < d; ++c) {
            if (!basis.append(D.col(b * d + c), 1e-12)) {
                throw std::invalid_argument(
                    "erc_gamma: selected blocks are rank deficient");
            }
        }
    }

    // Column scaled by the inverse norm of its residual off span(S).
    auto renormalized = [&](std::size_t col, double* dst) {
        std::vector<double> w(D.col(col), D.col(col) + m);
        basis.project_out(w.data());
        const double nrm = std::sqrt(kernels::nrm2_sq(w.data(), m));
        if (nrm <= 1e-12) {
            throw std::invalid_argument(
                "erc_gamma: a column lies in the span of the selected "
                "blocks");
        }
        const double* src = D.col(col);
        for (std::size_t i = 0; i < m; ++i) dst[i] = src[i] / nrm;
    };

    Eigen::MatrixXd A(m, remaining.size() * d);
    Eigen::MatrixXd B(m, others.size() * d);
    for (std::size_t bi = 0; bi < remaining.size(); ++bi) {
        for (std::size_t c = 0; c < d; ++c) {
            renormalized(remaining[bi] * d + c, A.col(bi * d + c).data());
        }
    }
    for (std::size_t bi = 0; bi < others.size(); ++bi) {
        for (std::size_t c = 0; c < d; ++c) {
            renormalized(others[bi] * d + c, B.col(bi * d + c).data());
        }
    }

    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(A);
    if (cod.rank() < A.cols()) {
        throw std::invalid_argument(
            "erc_gamma: remaining support blocks are rank deficient");
    }
    const Eigen::MatrixXd G = cod.solve(B);

    std::vector<double> blk(d * d);
    double gamma = 0.0;
    for (std::size_t bj = 0; bj < others.size(); ++bj) {
        double colsum = 0.0;
        for (std::size_t bi = 0; bi < remaining.size(); ++bi) {
            for (std::size_t c = 0; c < d; ++c) {
                for (std::size_t r = 0; r < d; ++r) {
                    blk[c * d + r] = G(bi * d + r, bj * d + c);
                }
            }
            colsum += spectral_norm(blk.data(), d, d);
        }
        gamma = std::max(gamma, colsum);
    }
    return gamma;
}

}  // namespace bbols
