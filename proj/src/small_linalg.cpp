#include "bbols/small_linalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <stdexcept>

#include "bbols/kernels.hpp"

namespace bbols {

std::vector<double> sym_eigenvalues(const double* S, std::size_t s) {
    if (s == 0) return {};
    std::vector<double> g(S, S + s * s);
    auto at = [&](std::size_t i, std::size_t j) -> double& {
        return g[i * s + j];
    };

    double fro2 = 0.0;
    for (double v : g) fro2 += v * v;
    const double stop = 1e-28 * std::max(fro2, 1e-300);

    for (int sweep = 0; sweep < 64; ++sweep) {
        double off2 = 0.0;
        for (std::size_t p = 0; p < s; ++p)
            for (std::size_t q = p + 1; q < s; ++q) off2 += 2 * at(p, q) * at(p, q);
        if (off2 <= stop) break;

        for (std::size_t p = 0; p + 1 < s; ++p) {
            for (std::size_t q = p + 1; q < s; ++q) {
                const double apq = at(p, q);
                if (apq == 0.0) continue;
                const double theta = (at(q, q) - at(p, p)) / (2.0 * apq);
                const double t =
                    (theta >= 0 ? 1.0 : -1.0) /
                    (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double sn = t * c;
                for (std::size_t i = 0; i < s; ++i) {
                    const double gip = at(i, p), giq = at(i, q);
                    at(i, p) = c * gip - sn * giq;
                    at(i, q) = sn * gip + c * giq;
                }
                for (std::size_t i = 0; i < s; ++i) {
                    const double gpi = at(p, i), gqi = at(q, i);
                    at(p, i) = c * gpi - sn * gqi;
                    at(q, i) = sn * gpi + c * gqi;
                }
            }
        }
    }

    std::vector<double> eig(s);
    for (std::size_t i = 0; i < s; ++i) eig[i] = at(i, i);
    std::sort(eig.begin(), eig.end());
    return eig;
}

double spectral_norm(const double* A, std::size_t r, std::size_t c) {
    if (r == 0 || c == 0) return 0.0;
    if (c == 1) return std::sqrt(kernels::nrm2_sq(A, r));
    if (c == 2) {
        const double* c0 = A;
        const double* c1 = A + r;
        const double a = kernels::nrm2_sq(c0, r);
        const double b = kernels::dot(c0, c1, r);
        const double d2 = kernels::nrm2_sq(c1, r);
        // Largest eigenvalue of the 2x2 Gram matrix [a b; b d2].
        const double half_tr = 0.5 * (a + d2);
        const double disc = std::sqrt(0.25 * (a - d2) * (a - d2) + b * b);
        return std::sqrt(std::max(0.0, half_tr + disc));
    }
    std::vector<double> gram(c * c);
    for (std::size_t i = 0; i < c; ++i) {
        for (std::size_t j = i; j < c; ++j) {
            const double v = kernels::dot(A + i * r, A + j * r, r);
            gram[i * c + j] = v;
            gram[j * c + i] = v;
        }
    }
    const std::vector<double> eig = sym_eigenvalues(gram.data(), c);
    return std::sqrt(std::max(0.0, eig.back()));
}

void MgsBasis::project_out(double* v) const {
    // Two passes of modified Gram-Schmidt; the second pass scrubs the
    // residual correlation the first leaves behind when v is nearly in
    // span(Q).
    for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t i = 0; i < cols_; ++i) {
            const double* qi = q(i);
            const double c = kernels::dot(qi, v, m_);
            kernels::axpy(-c, qi, v, m_);
        }
    }
}

bool MgsBasis::append(const double* v, double drop_tol) {
    std::vector<double> w(v, v + m_);
    const double pre = std::sqrt(kernels::nrm2_sq(w.data(), m_));
    if (pre == 0.0) return false;
    project_out(w.data());
    const double post = std::sqrt(kernels::nrm2_sq(w.data(), m_));
    if (post <= drop_tol * pre) return false;
    kernels::scal(1.0 / post, w.data(), m_);
    data_.insert(data_.end(), w.begin(), w.end());
    ++cols_;
    return true;
}

}  // namespace bbols
