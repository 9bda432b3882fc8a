#include "bbols/recovery.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Dense>

#include "bbols/kernels.hpp"
#include "bbols/small_linalg.hpp"

namespace bbols {
namespace {

// A projected direction below this fraction of its pre-projection column
// norm carries no usable information and is dropped.
constexpr double kDegenerateTol = 1e-10;
// Residuals below this fraction of ||y|| count as exact fits.
constexpr double kResidualFloor = 1e-12;

// Captured energy sum (u^T r)^2 over an orthonormalization of the dd
// columns at blk (each already orthogonal to the selected span). This is
// exactly how much the residual norm squared would drop if the block
// were selected. Returns the number of non-degenerate directions through
// kept.
double captured_energy(const double* blk, std::size_t m, std::size_t dd,
                       const double* orig_norm, const double* r, double* W,
                       std::size_t& kept) {
    kept = 0;
    double gain = 0.0;
    for (std::size_t c = 0; c < dd; ++c) {
        double* w = W + kept * m;
        std::copy(blk + c * m, blk + (c + 1) * m, w);
        for (std::size_t p = 0; p < kept; ++p) {
            const double* q = W + p * m;
            kernels::axpy(-kernels::dot(q, w, m), q, w, m);
        }
        const double nrm = std::sqrt(kernels::nrm2_sq(w, m));
        if (nrm <= kDegenerateTol * orig_norm[c]) continue;
        kernels::scal(1.0 / nrm, w, m);
        const double c_r = kernels::dot(w, r, m);
        gain += c_r * c_r;
        ++kept;
    }
    return gain;
}

std::vector<double> column_norms(const BlockMatrix& D) {
    std::vector<double> norms(D.n);
    for (std::size_t j = 0; j < D.n; ++j) {
        norms[j] = std::sqrt(kernels::nrm2_sq(D.col(j), D.m));
    }
    return norms;
}

// Least squares of y on the selected columns, scattered back into x_hat.
void final_least_squares(const BlockMatrix& D,
                         const std::vector<double>& y, std::size_t dd,
                         RecoveryResult& res) {
    res.x_hat.assign(D.n, 0.0);
    const std::size_t cols = res.selected_blocks.size() * dd;
    if (cols == 0) return;
    Eigen::MatrixXd A(D.m, cols);
    for (std::size_t s = 0; s < res.selected_blocks.size(); ++s) {
        const std::size_t b = res.selected_blocks[s];
        for (std::size_t c = 0; c < dd; ++c) {
            std::copy(D.col(b * dd + c), D.col(b * dd + c) + D.m,
                      A.col(s * dd + c).data());
        }
    }
    Eigen::Map<const Eigen::VectorXd> b(y.data(),
                                        static_cast<Eigen::Index>(D.m));
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(A);
    res.ls_rank_deficient = cod.rank() < static_cast<Eigen::Index>(cols);
    const Eigen::VectorXd coef = cod.solve(b);
    for (std::size_t s = 0; s < res.selected_blocks.size(); ++s) {
        for (std::size_t c = 0; c < dd; ++c) {
            res.x_hat[res.selected_blocks[s] * dd + c] =
                coef(static_cast<Eigen::Index>(s * dd + c));
        }
    }
}

}  // namespace

double l2inf_norm(const double* v, std::size_t n, std::size_t d) {
    if (d == 0 || n % d != 0) {
        throw std::invalid_argument("l2inf_norm: group width must divide n");
    }
    double best = 0.0;
    for (std::size_t g = 0; g < n; g += d) {
        double e = 0.0;
        for (std::size_t c = 0; c < d; ++c) e += v[g + c] * v[g + c];
        best = std::max(best, e);
    }
    return std::sqrt(best);
}

double blind_statistic(const BlockMatrix& D, const std::vector<double>& r,
                       std::size_t d) {
    if (r.size() != D.m) {
        throw std::invalid_argument("blind_statistic: residual length");
    }
    const double rnorm = std::sqrt(kernels::nrm2_sq(r.data(), D.m));
    if (rnorm == 0.0) return std::numeric_limits<double>::infinity();
    std::vector<double> corr(D.n);
    kernels::gemv_t(D.a.data(), D.m, D.n, r.data(), corr.data());
    return l2inf_norm(corr.data(), D.n, d) / rnorm;
}

std::size_t bols_step(const BlockMatrix& D, const std::vector<double>& y,
                      const std::vector<std::size_t>& selected_blocks) {
    const std::size_t m = D.m, dd = D.d, nb = D.num_blocks();
    std::vector<char> mask(nb, 0);
    MgsBasis Q(m);
    for (std::size_t b : selected_blocks) {
        if (b >= nb) throw std::invalid_argument("bols_step: block index");
        mask[b] = 1;
        for (std::size_t c = 0; c < dd; ++c) {
            Q.append(D.col(b * dd + c), kDegenerateTol);
        }
    }
    std::vector<double> r(y);
    Q.project_out(r.data());

    const std::vector<double> norms = column_norms(D);
    std::vector<double> blk(m * dd), W(m * dd);
    double best_gain = -1.0;
    std::size_t best = nb;
    bool any_directions = false;
    for (std::size_t b = 0; b < nb; ++b) {
        if (mask[b]) continue;
        for (std::size_t c = 0; c < dd; ++c) {
            std::copy(D.col(b * dd + c), D.col(b * dd + c) + m,
                      blk.data() + c * m);
            Q.project_out(blk.data() + c * m);
        }
        std::size_t kept = 0;
        const double gain = captured_energy(blk.data(), m, dd,
                                            norms.data() + b * dd, r.data(),
                                            W.data(), kept);
        any_directions |= kept > 0;
        if (gain > best_gain) {
            best_gain = gain;
            best = b;
        }
    }
    if (best == nb || !any_directions) {
        throw std::runtime_error(
            "bols_step: every remaining block lies in the selected span");
    }
    return best;
}

std::size_t bomp_step(const BlockMatrix& D, const std::vector<double>& r) {
    if (r.size() != D.m) {
        throw std::invalid_argument("bomp_step: residual length");
    }
    std::vector<double> corr(D.n);
    kernels::gemv_t(D.a.data(), D.m, D.n, r.data(), corr.data());
    double best_score = -1.0;
    std::size_t best = 0;
    for (std::size_t b = 0; b < D.num_blocks(); ++b) {
        double e = 0.0;
        for (std::size_t c = 0; c < D.d; ++c) {
            e += corr[b * D.d + c] * corr[b * D.d + c];
        }
        if (e > best_score) {
            best_score = e;
            best = b;
        }
    }
    return best;
}

RecoveryResult recover(const BlockMatrix& D, const std::vector<double>& y,
                       Algorithm alg, const StoppingRule& rule) {
    using Kind = StoppingRule::Kind;
    const std::size_t m = D.m, n = D.n;
    if (y.size() != m) {
        throw std::invalid_argument("recover: measurement length mismatch");
    }
    const bool block_alg = alg == Algorithm::bomp || alg == Algorithm::bols;
    const bool corr_alg = alg == Algorithm::omp || alg == Algorithm::bomp;
    const std::size_t dd = block_alg ? D.d : 1;
    const std::size_t nb = n / dd;

    if (rule.kind == Kind::blind_block && !block_alg) {
        throw std::invalid_argument(
            "recover: the block blind rule needs a block algorithm");
    }
    if (rule.kind == Kind::blind_scalar && block_alg) {
        throw std::invalid_argument(
            "recover: the scalar blind rule needs a width-1 algorithm");
    }
    const bool blind =
        rule.kind == Kind::blind_block || rule.kind == Kind::blind_scalar;
    const double threshold =
        rule.kind == Kind::blind_block
            ? std::sqrt(static_cast<double>(D.d)) * rule.xi * rule.coherence
            : rule.xi * rule.coherence;

    std::size_t cap = std::min(m / dd, nb);
    if (rule.max_iterations > 0) cap = std::min(cap, rule.max_iterations);

    RecoveryResult res;
    std::vector<double> r(y);
    double rnorm2 = kernels::nrm2_sq(r.data(), m);
    const double ynorm = std::sqrt(rnorm2);
    res.residual_trace.push_back(ynorm);

    const std::vector<double> norms = column_norms(D);
    MgsBasis Q(m);
    std::vector<char> mask(nb, 0);
    std::vector<double> corr(n);
    std::vector<double> W(m * dd);
    // ols/bols maintain the dictionary with the selected span projected
    // out, so each candidate scan costs one pass instead of a fresh QR.
    std::vector<double> Dp;
    if (!corr_alg) Dp = D.a;

    for (;;) {
        const double rnorm = std::sqrt(rnorm2);
        if (rule.kind == Kind::fixed_iterations &&
            res.selected_blocks.size() >= rule.iterations) {
            res.stop_reason = StopReason::fixed_count;
            break;
        }
        if (res.selected_blocks.size() >= cap) {
            res.stop_reason = StopReason::cap;
            break;
        }
        if (rnorm <= kResidualFloor * ynorm) {
            res.stop_reason = StopReason::residual;
            break;
        }
        if (rule.kind == Kind::residual_norm && rnorm <= rule.residual_tol) {
            res.stop_reason = StopReason::residual;
            break;
        }
        bool have_corr = false;
        if (blind) {
            kernels::gemv_t(D.a.data(), m, n, r.data(), corr.data());
            have_corr = true;
            const std::size_t stat_width =
                rule.kind == Kind::blind_block ? D.d : 1;
            const double stat =
                l2inf_norm(corr.data(), n, stat_width) / rnorm;
            res.blind_stat_trace.push_back(stat);
            if (stat <= threshold) {
                res.stop_reason = StopReason::blind_rule;
                break;
            }
        }

        double best_gain = -1.0;
        std::size_t best = nb;
        if (corr_alg) {
            if (!have_corr) {
                kernels::gemv_t(D.a.data(), m, n, r.data(), corr.data());
            }
            for (std::size_t b = 0; b < nb; ++b) {
                if (mask[b]) continue;
                double e = 0.0;
                for (std::size_t c = 0; c < dd; ++c) {
                    e += corr[b * dd + c] * corr[b * dd + c];
                }
                if (e > best_gain) {
                    best_gain = e;
                    best = b;
                }
            }
        } else {
            bool any_directions = false;
            for (std::size_t b = 0; b < nb; ++b) {
                if (mask[b]) continue;
                std::size_t kept = 0;
                const double gain = captured_energy(
                    Dp.data() + b * dd * m, m, dd, norms.data() + b * dd,
                    r.data(), W.data(), kept);
                any_directions |= kept > 0;
                if (gain > best_gain) {
                    best_gain = gain;
                    best = b;
                }
            }
            if (!any_directions) {
                throw std::runtime_error(
                    "recover: every remaining block lies in the selected "
                    "span");
            }
        }
        if (best == nb) {
            throw std::runtime_error("recover: no selectable block left");
        }

        mask[best] = 1;
        res.selected_blocks.push_back(best);
        const std::size_t q_before = Q.size();
        for (std::size_t c = 0; c < dd; ++c) {
            Q.append(D.col(best * dd + c), kDegenerateTol);
        }
        for (std::size_t qi = q_before; qi < Q.size(); ++qi) {
            const double* q = Q.q(qi);
            kernels::axpy(-kernels::dot(q, r.data(), m), q, r.data(), m);
        }
        rnorm2 = kernels::nrm2_sq(r.data(), m);
        res.residual_trace.push_back(std::sqrt(rnorm2));

        if (!corr_alg) {
            for (std::size_t qi = q_before; qi < Q.size(); ++qi) {
                const double* q = Q.q(qi);
                kernels::gemv_t(Dp.data(), m, n, q, corr.data());
                for (std::size_t b = 0; b < nb; ++b) {
                    if (mask[b]) continue;
                    for (std::size_t c = 0; c < dd; ++c) {
                        kernels::axpy(-corr[b * dd + c], q,
                                      Dp.data() + (b * dd + c) * m, m);
                    }
                }
            }
        }
    }

    res.iterations = res.selected_blocks.size();
    final_least_squares(D, y, dd, res);
    return res;
}

const char* to_string(Algorithm a) {
    switch (a) {
        case Algorithm::omp: return "omp";
        case Algorithm::ols: return "ols";
        case Algorithm::bomp: return "bomp";
        case Algorithm::bols: return "bols";
    }
    return "?";
}

const char* to_string(StopReason r) {
    switch (r) {
        case StopReason::blind_rule: return "blind_rule";
        case StopReason::fixed_count: return "fixed_count";
        case StopReason::residual: return "residual";
        case StopReason::cap: return "cap";
    }
    return "?";
}

}  // namespace bbols
