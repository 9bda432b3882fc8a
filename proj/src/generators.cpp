#include "bbols/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "bbols/kernels.hpp"
#include "bbols/small_linalg.hpp"

namespace bbols {

double max_column_norm_deviation(const BlockMatrix& D) {
    double dev = 0.0;
    for (std::size_t j = 0; j < D.n; ++j) {
        const double nrm = std::sqrt(kernels::nrm2_sq(D.col(j), D.m));
        dev = std::max(dev, std::abs(nrm - 1.0));
    }
    return dev;
}

BlockMatrix gen_gaussian_block_orthogonal(std::size_t m, std::size_t n,
                                          std::size_t d, Rng& rng) {
    if (d > m) {
        throw std::invalid_argument(
            "gen_gaussian_block_orthogonal: cannot orthonormalize a block "
            "wider than the row dimension");
    }
    BlockMatrix D(m, n, d);
    const double sd = 1.0 / std::sqrt(static_cast<double>(m));
    for (std::size_t j = 0; j < n; ++j) {
        double* c = D.col(j);
        for (std::size_t i = 0; i < m; ++i) c[i] = sd * rng.next_normal();
    }
    for (std::size_t b = 0; b < D.num_blocks(); ++b) {
        MgsBasis basis(m);
        for (std::size_t c = 0; c < d; ++c) {
            double* col = D.col(b * d + c);
            // A Gaussian block is full rank almost surely; redraw the
            // offending column in the measure-zero event it is not.
            while (!basis.append(col, 1e-8)) {
                for (std::size_t i = 0; i < m; ++i)
                    col[i] = sd * rng.next_normal();
            }
            std::copy(basis.q(c), basis.q(c) + m, col);
        }
    }
    return D;
}

BlockMatrix gen_hybrid(std::size_t m, std::size_t n, std::size_t d,
                       double G, Rng& rng) {
    if (G < 0) {
        throw std::invalid_argument("gen_hybrid: G must be nonnegative");
    }
    BlockMatrix D(m, n, d);
    for (std::size_t j = 0; j < n; ++j) {
        double* c = D.col(j);
        for (std::size_t i = 0; i < m; ++i) c[i] = rng.next_normal();
        const double g = rng.next_uniform(G);
        for (std::size_t i = 0; i < m; ++i) c[i] += g;
        const double nrm = std::sqrt(kernels::nrm2_sq(c, m));
        kernels::scal(1.0 / nrm, c, m);
    }
    return D;
}

BlockSparseSignal gen_signal(std::size_t n, std::size_t d, std::size_t k,
                             SignalDist dist, Rng& rng) {
    if (d == 0 || n % d != 0) {
        throw std::invalid_argument("gen_signal: d must divide n");
    }
    const std::size_t nb = n / d;
    if (k > nb) {
        throw std::invalid_argument(
            "gen_signal: more support blocks requested than exist");
    }
    // Partial Fisher-Yates: after k swaps the first k slots hold a
    // uniform k-subset.
    std::vector<std::size_t> idx(nb);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t j = i + rng.next_below(nb - i);
        std::swap(idx[i], idx[j]);
    }
    BlockSparseSignal s;
    s.d = d;
    s.x.assign(n, 0.0);
    s.support_blocks.assign(idx.begin(), idx.begin() + k);
    std::sort(s.support_blocks.begin(), s.support_blocks.end());
    for (std::size_t b : s.support_blocks) {
        for (std::size_t c = 0; c < d; ++c) {
            const double z = rng.next_normal();
            s.x[b * d + c] = dist == SignalDist::gauss01 ? z : 1.0 + 0.1 * z;
        }
    }
    return s;
}

std::vector<double> apply(const BlockMatrix& D, const std::vector<double>& x) {
    if (x.size() != D.n) {
        throw std::invalid_argument("apply: coefficient length mismatch");
    }
    std::vector<double> y(D.m);
    kernels::gemv_n(D.a.data(), D.m, D.n, x.data(), 0.0, y.data());
    return y;
}

NoiseRealization calibrate_noise(const BlockMatrix& D,
                                 const std::vector<double>& x,
                                 double snr_db, Rng& rng) {
    NoiseRealization out;
    out.eps.assign(D.m, 0.0);
    if (std::isinf(snr_db) && snr_db > 0) return out;

    const std::vector<double> y0 = apply(D, x);
    const double sig_energy = kernels::nrm2_sq(y0.data(), D.m);
    if (sig_energy == 0.0) {
        throw std::invalid_argument(
            "calibrate_noise: zero signal cannot realize a finite SNR");
    }
    const double snr_lin = std::pow(10.0, snr_db / 10.0);
    out.sigma = std::sqrt(sig_energy / (static_cast<double>(D.m) * snr_lin));
    for (double& e : out.eps) e = out.sigma * rng.next_normal();
    return out;
}

bool is_success(const std::vector<double>& x_hat,
                const std::vector<double>& x_true, double rel_tol) {
    if (x_hat.size() != x_true.size()) {
        throw std::invalid_argument("is_success: length mismatch");
    }
    double err2 = 0.0, ref2 = 0.0;
    for (std::size_t i = 0; i < x_hat.size(); ++i) {
        const double e = x_hat[i] - x_true[i];
        err2 += e * e;
        ref2 += x_true[i] * x_true[i];
    }
    if (ref2 == 0.0) return std::sqrt(err2) <= rel_tol;
    return std::sqrt(err2) <= rel_tol * std::sqrt(ref2);
}

}  // namespace bbols
