#include "bbols/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

namespace bbols {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();

double sqrt_m_log_term(std::size_t m) {
    const double md = static_cast<double>(m);
    return std::sqrt(md + 2.0 * std::sqrt(md * std::log(md)));
}

// All real roots of alpha x^3 + beta x^2 + omega x + delta, degenerating
// gracefully when leading coefficients vanish.
std::vector<double> real_roots(const CubicCoeffs& c) {
    const double scale = std::max(
        {std::abs(c.alpha), std::abs(c.beta), std::abs(c.omega),
         std::abs(c.delta)});
    if (scale == 0.0) return {};
    const double tiny = 1e-14 * scale;

    if (std::abs(c.alpha) > tiny) {
        const double b = c.beta / c.alpha;
        const double w = c.omega / c.alpha;
        const double dl = c.delta / c.alpha;
        // Depress via x = t - b/3: t^3 + P t + Q = 0.
        const double P = w - b * b / 3.0;
        const double Q = dl - b * w / 3.0 + 2.0 * b * b * b / 27.0;
        const double disc = 0.25 * Q * Q + P * P * P / 27.0;
        std::vector<double> roots;
        if (disc > 0.0) {
            const double s = std::sqrt(disc);
            const double t = std::cbrt(-0.5 * Q + s) + std::cbrt(-0.5 * Q - s);
            roots.push_back(t - b / 3.0);
        } else {
            // Three real roots; the trigonometric form avoids complex
            // cube roots.
            const double s = std::sqrt(std::max(0.0, -P / 3.0));
            if (s == 0.0) {
                roots.push_back(std::cbrt(-Q) - b / 3.0);
            } else {
                const double arg =
                    std::clamp(-0.5 * Q / (s * s * s), -1.0, 1.0);
                const double phi = std::acos(arg);
                for (int j = 0; j < 3; ++j) {
                    const double t =
                        2.0 * s *
                        std::cos((phi - 2.0 * std::numbers::pi_v<double> * j) /
                                 3.0);
                    roots.push_back(t - b / 3.0);
                }
            }
        }
        return roots;
    }
    if (std::abs(c.beta) > tiny) {
        const double disc = c.omega * c.omega - 4.0 * c.beta * c.delta;
        if (disc < 0.0) return {};
        const double s = std::sqrt(disc);
        // Citardauq form for the root that would otherwise cancel.
        const double q =
            -0.5 * (c.omega + (c.omega >= 0 ? s : -s));
        std::vector<double> roots{q / c.beta};
        if (q != 0.0) roots.push_back(c.delta / q);
        return roots;
    }
    if (std::abs(c.omega) > tiny) return {-c.delta / c.omega};
    return {};
}

}  // namespace

Interval eigen_bounds_block(std::size_t k, std::size_t d, double mu_B) {
    Interval out;
    if (k == 0) return out;
    const double h = static_cast<double>(k - 1) * static_cast<double>(d) * mu_B;
    if (!(h >= 0.0) || h >= 1.0) return out;
    out.lo = 1.0 - h;
    out.hi = 1.0 + h;
    out.valid = true;
    return out;
}

Interval eigen_bounds_homogeneous(std::size_t K, std::size_t d, double mu_B) {
    Interval out;
    if (K < d || d == 0) return out;
    const double h = static_cast<double>(K - d) * mu_B;
    if (!(h >= 0.0) || h >= 1.0) return out;
    out.lo = 1.0 - h;
    out.hi = 1.0 + h;
    out.valid = true;
    return out;
}

Interval eigen_bounds_scalar(std::size_t K, double mu) {
    Interval out;
    if (K == 0) return out;
    const double h = static_cast<double>(K - 1) * mu;
    if (!(h >= 0.0) || h >= 1.0) return out;
    out.lo = 1.0 - h;
    out.hi = 1.0 + h;
    out.valid = true;
    return out;
}

ProjectionBound projection_bound(std::size_t k, std::size_t d, double mu,
                                 double mu_B) {
    ProjectionBound out;
    if (k == 0 || d == 0 || !(mu >= 0.0) || !(mu_B >= 0.0)) return out;
    const double kd = static_cast<double>(k) * static_cast<double>(d);
    const double km1d = static_cast<double>(k - 1) * static_cast<double>(d);
    const double den = 1.0 - km1d * mu;
    if (den <= 0.0 || km1d * mu_B >= 1.0) return out;
    const double deflation =
        kd * mu * mu * (1.0 + km1d * mu_B) / (den * den);
    if (deflation >= 1.0) return out;
    out.b_factor = 1.0 / (1.0 - deflation);
    out.lower = std::sqrt(1.0 - deflation);
    out.valid = true;
    return out;
}

ScalarValue projection_bound_bols(std::size_t k, std::size_t d, double mu) {
    ScalarValue out;
    const double rad = 1.0 - static_cast<double>(k * d) * mu;
    if (!(mu >= 0.0) || rad <= 0.0) return out;
    out.value = std::sqrt(rad);
    out.valid = true;
    return out;
}

ScalarValue projection_bound_ols(std::size_t k, std::size_t d, double mu) {
    ScalarValue out;
    if (k == 0 || d == 0 || !(mu >= 0.0)) return out;
    const double kd = static_cast<double>(k * d);
    const double den = 1.0 - static_cast<double>(k - 1) * d * mu;
    if (den <= 0.0) return out;
    const double rad = 1.0 - (1.0 + (kd - 1.0) * mu) * kd * mu * mu / (den * den);
    if (rad <= 0.0) return out;
    out.value = std::sqrt(rad);
    out.valid = true;
    return out;
}

CubicCoeffs erc_cubic_coeffs(double mu, double mu_B, std::size_t d) {
    const double dd = static_cast<double>(d);
    const double d2 = dd * dd, d3 = d2 * dd;
    const double u = mu, u2 = mu * mu;
    const double v = mu_B, v2 = mu_B * mu_B;
    CubicCoeffs c;
    c.alpha = -d3 * v2 * u2 + 3.0 * d3 * v * u2;
    c.beta = d3 * v2 * u2 + d2 * v * u2 - 7.0 * d3 * v * u2 -
             6.0 * d2 * v * u - 2.0 * d2 * u2;
    c.omega = 5.0 * d3 * v * u2 - 2.0 * d2 * v * u2 + 8.0 * d2 * v * u +
              4.0 * d2 * u2 + 2.0 * dd * u2 + 3.0 * dd * v + 4.0 * dd * u;
    c.delta = -d3 * v * u2 - 2.0 * d2 * v * u - 2.0 * d2 * u2 - dd * v -
              4.0 * dd * u - 2.0;
    return c;
}

double erc_cubic_eval(const CubicCoeffs& c, double k) {
    return ((c.alpha * k + c.beta) * k + c.omega) * k + c.delta;
}

double erc_sparsity_bound(double mu, double mu_B, std::size_t d) {
    if (!(mu >= 0.0) || !(mu_B >= 0.0) || d == 0) {
        throw std::invalid_argument(
            "erc_sparsity_bound: coherences must be nonnegative");
    }
    const CubicCoeffs c = erc_cubic_coeffs(mu, mu_B, d);
    std::vector<double> roots = real_roots(c);
    std::erase_if(roots, [](double r) { return !(r > 1e-12); });
    if (roots.empty()) return kInf;
    double r = *std::min_element(roots.begin(), roots.end());

    // Newton polish; the closed forms lose digits when roots nearly
    // collide.
    for (int it = 0; it < 8; ++it) {
        const double f = erc_cubic_eval(c, r);
        const double fp = (3.0 * c.alpha * r + 2.0 * c.beta) * r + c.omega;
        if (fp == 0.0) break;
        const double step = f / fp;
        r -= step;
        if (std::abs(step) <= 1e-14 * std::max(1.0, std::abs(r))) break;
    }
    if (!(r > 0.0)) return kInf;
    return r > 1e6 ? kInf : r;
}

ScalarValue erc_gamma_bound(std::size_t k, std::size_t d, double mu,
                            double mu_B) {
    ScalarValue out;
    const ProjectionBound pb = projection_bound(k, d, mu, mu_B);
    if (!pb.valid) return out;
    const double dd = static_cast<double>(d);
    const double den =
        2.0 - (static_cast<double>(k) - pb.b_factor) * dd * mu_B;
    if (den <= 0.0) return out;
    out.value = 2.0 * pb.b_factor * static_cast<double>(k) * dd * mu_B / den;
    out.valid = true;
    return out;
}

ScalarValue residual_signal_threshold(std::size_t k, std::size_t t,
                                      std::size_t d, double mu, double mu_B,
                                      std::size_t m, double sigma) {
    ScalarValue out;
    if (t >= k || m == 0 || !(sigma >= 0.0)) return out;
    const ProjectionBound pb = projection_bound(k, d, mu, mu_B);
    if (!pb.valid) return out;
    const double dd = static_cast<double>(d);
    const double km1d = static_cast<double>(k - 1) * dd;
    const double den1 = 1.0 - km1d * mu_B;
    const double mid = 2.0 - (static_cast<double>(k) - pb.b_factor) * dd * mu_B;
    const double den2 =
        mid - 2.0 * pb.b_factor * static_cast<double>(k) * dd * mu_B;
    if (den1 <= 0.0 || den2 <= 0.0) return out;
    out.value = 2.0 * std::sqrt(static_cast<double>(k - t)) * mid *
                std::sqrt(dd) * sigma * sqrt_m_log_term(m) / (den1 * den2);
    out.valid = true;
    return out;
}

ScalarValue per_block_signal_threshold(std::size_t k, std::size_t d,
                                       double mu, double mu_B, std::size_t m,
                                       double sigma) {
    ScalarValue out = residual_signal_threshold(k, k - 1, d, mu, mu_B, m, sigma);
    // With t = k - 1 the sqrt(k - t) factor is already 1, which is
    // exactly the per-block statement.
    return out;
}

ScalarValue noise_tail_eta(std::size_t m, double C) {
    ScalarValue out;
    const double x = static_cast<double>(m) - C;
    if (!(x > 1.0)) return out;
    out.value = std::sqrt(4.0 * x - 2.0) -
                std::sqrt(x + 2.0 * std::sqrt(x * std::log(x)));
    out.valid = true;
    return out;
}

double noise_tail(std::size_t n, double z) {
    if (!(z > 0.0)) return kInf;
    const double e = 0.5 * z * z;
    if (e > 700.0) return 0.0;
    return static_cast<double>(n) /
           (std::sqrt(2.0 * std::numbers::pi_v<double>) * z * std::exp(e));
}

double success_probability(std::size_t m, std::size_t n, double mu_B,
                           double xi, double eta, double C, BlindFamily f) {
    const double md = static_cast<double>(m);
    if (!(md - C > 1.0)) return -kInf;
    const double z = xi * mu_B * eta;
    const double tail = noise_tail(n, z);
    if (f == BlindFamily::energy) {
        return 1.0 - C / md - 1.0 / (md - C) - tail;
    }
    return 1.0 - 1.0 / md - 1.0 / (md - C) - C * tail;
}

double probability_ceiling(std::size_t m, double C, BlindFamily f) {
    const double md = static_cast<double>(m);
    if (!(md - C > 1.0)) return -kInf;
    if (f == BlindFamily::energy) return 1.0 - C / md - 1.0 / (md - C);
    return 1.0 - 1.0 / md - 1.0 / (md - C);
}

ScalarValue min_snr(std::size_t k, std::size_t d, double mu, double mu_B,
                    std::size_t m, double xi, double eta, BlindFamily f) {
    ScalarValue out;
    if (m == 0 || !(xi > 0.0)) return out;
    const ProjectionBound pb = projection_bound(k, d, mu, mu_B);
    if (!pb.valid) return out;
    const double dd = static_cast<double>(d);
    const double md = static_cast<double>(m);
    const double kd = static_cast<double>(k) * dd;
    const double km1d = static_cast<double>(k - 1) * dd;
    const double den1 = 1.0 - km1d * mu_B;
    const double mid = 2.0 - (static_cast<double>(k) - pb.b_factor) * dd * mu_B;
    const double den2 =
        mid - 2.0 * pb.b_factor * static_cast<double>(k) * dd * mu_B;
    if (den1 <= 0.0 || den2 <= 0.0) return out;
    const double X = sqrt_m_log_term(m);

    double noise_scale;
    if (f == BlindFamily::energy) {
        noise_scale = X;
    } else {
        if (!(eta > 0.0)) return out;
        noise_scale = xi * mu_B * eta;
    }
    const double num1 = 2.0 * mid * std::sqrt(dd) * noise_scale;
    const double branch1 = num1 * num1 / (md * den1 * den1 * den2 * den2);

    const double den3 = den1 - std::sqrt(kd) * xi * mu_B * (1.0 + km1d * mu_B);
    if (den3 <= 0.0) return out;
    const double num2 = std::sqrt(dd) * xi * mu_B * X;
    const double branch2 = num2 * num2 / (md * den3 * den3);

    out.value = std::max(branch1, branch2);
    out.valid = true;
    return out;
}

double xi_from_probability(double p_target, std::size_t m, std::size_t n,
                           double mu_B, double eta, double C, BlindFamily f) {
    if (!(mu_B > 0.0) || !(eta > 0.0) || !std::isfinite(C) ||
        !(static_cast<double>(m) - C > 1.0)) {
        throw std::invalid_argument(
            "xi_from_probability: probability undefined at these "
            "parameters");
    }
    const double ceiling = probability_ceiling(m, C, f);
    if (!(p_target < ceiling)) {
        std::ostringstream msg;
        msg << "xi_from_probability: target " << p_target
            << " is unreachable; the achievable ceiling at these parameters "
               "is "
            << ceiling;
        throw UnreachableProbability(msg.str(), ceiling);
    }

    auto prob = [&](double xi) {
        return success_probability(m, n, mu_B, xi, eta, C, f);
    };
    double lo = 0.0, hi = 1.0;
    while (prob(hi) < p_target) {
        hi *= 2.0;
        if (hi > 1e12) {
            throw UnreachableProbability(
                "xi_from_probability: target not attained at any finite xi",
                ceiling);
        }
    }
    for (int it = 0; it < 500; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double pm = prob(mid);
        if (std::abs(pm - p_target) <= 1e-10) return mid;
        (pm < p_target ? lo : hi) = mid;
    }
    return hi;
}

BoundsReport make_bounds_report(const BoundsInput& in) {
    BoundsReport r;
    r.in = in;
    const std::size_t K = in.k * in.d;
    r.lambda_block = eigen_bounds_block(in.k, in.d, in.mu_B);
    r.lambda_homogeneous = eigen_bounds_homogeneous(K, in.d, in.mu_B);
    r.lambda_scalar = eigen_bounds_scalar(K, in.mu);
    r.proj = projection_bound(in.k, in.d, in.mu, in.mu_B);
    r.proj_bols = projection_bound_bols(in.k, in.d, in.mu);
    r.proj_ols = projection_bound_ols(in.k, in.d, in.mu);
    r.sparsity_C = erc_sparsity_bound(in.mu, in.mu_B, in.d);
    r.gamma_bound = erc_gamma_bound(in.k, in.d, in.mu, in.mu_B);
    r.threshold_full = residual_signal_threshold(in.k, 0, in.d, in.mu,
                                                 in.mu_B, in.m, in.sigma);
    r.threshold_block = per_block_signal_threshold(in.k, in.d, in.mu, in.mu_B,
                                                   in.m, in.sigma);
    r.eta = noise_tail_eta(in.m, r.sparsity_C);

    auto solve_xi = [&](BlindFamily f) -> double {
        if (std::isfinite(in.xi)) return in.xi;
        if (!std::isfinite(in.p_target) || !r.eta.valid) return kNaN;
        try {
            return xi_from_probability(in.p_target, in.m, in.n, in.mu_B,
                                       r.eta.value, r.sparsity_C, f);
        } catch (const std::exception&) {
            return kNaN;
        }
    };
    r.xi_energy = solve_xi(BlindFamily::energy);
    r.xi_correlation = solve_xi(BlindFamily::correlation);

    if (std::isfinite(r.xi_energy)) {
        r.snr_min_energy =
            min_snr(in.k, in.d, in.mu, in.mu_B, in.m, r.xi_energy,
                    r.eta.valid ? r.eta.value : kNaN, BlindFamily::energy);
        if (r.eta.valid) {
            r.p_energy =
                success_probability(in.m, in.n, in.mu_B, r.xi_energy,
                                    r.eta.value, r.sparsity_C,
                                    BlindFamily::energy);
        }
    }
    if (std::isfinite(r.xi_correlation) && r.eta.valid) {
        r.snr_min_correlation =
            min_snr(in.k, in.d, in.mu, in.mu_B, in.m, r.xi_correlation,
                    r.eta.value, BlindFamily::correlation);
        r.p_correlation = success_probability(
            in.m, in.n, in.mu_B, r.xi_correlation, r.eta.value, r.sparsity_C,
            BlindFamily::correlation);
    }
    return r;
}

}  // namespace bbols
