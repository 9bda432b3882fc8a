#pragma once
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>

// Closed-form guarantees for block-greedy recovery, parameterized by the
// dictionary coherences (mu, mu_B), block width d, sparsity k, and the
// measurement count m. Every function reports regime validity explicitly:
// outside its hypothesis an Interval or ScalarValue comes back with
// valid == false and NaN payload instead of a silently meaningless
// number. All logarithms are natural.

namespace bbols {

struct Interval {
    double lo = std::numeric_limits<double>::quiet_NaN();
    double hi = std::numeric_limits<double>::quiet_NaN();
    bool valid = false;
};

struct ScalarValue {
    double value = std::numeric_limits<double>::quiet_NaN();
    bool valid = false;
};

// Extremal eigenvalues of a k-block Gram matrix with orthonormal blocks:
// 1 -+ (k-1) d mu_B, valid while (k-1) d mu_B < 1.
Interval eigen_bounds_block(std::size_t k, std::size_t d, double mu_B);

// Same quantity bounded through K = kd individual columns with the block
// structure only partially exploited: 1 -+ (K-d) mu_B, valid while
// (K-d) mu_B < 1.
Interval eigen_bounds_homogeneous(std::size_t K, std::size_t d, double mu_B);

// Classical column-wise bound 1 -+ (K-1) mu, valid while (K-1) mu < 1.
Interval eigen_bounds_scalar(std::size_t K, double mu);

// Lower bound on how much norm any off-support column keeps after
// projecting out k selected blocks. The inflation factor is
//   B = 1 / (1 - k d mu^2 (1 + (k-1) d mu_B) / (1 - (k-1) d mu)^2)
// and the bound is sqrt(1/B). Valid while (k-1) d mu < 1,
// (k-1) d mu_B < 1, and the deflation term stays below 1.
struct ProjectionBound {
    double b_factor = std::numeric_limits<double>::quiet_NaN();
    double lower = std::numeric_limits<double>::quiet_NaN();
    bool valid = false;
};
ProjectionBound projection_bound(std::size_t k, std::size_t d, double mu,
                                 double mu_B);

// Earlier column-wise counterparts of the projection bound, used as the
// dominance baselines: sqrt(1 - kd mu) and
// sqrt(1 - (1 + (kd-1) mu) kd mu^2 / (1 - (k-1) d mu)^2).
ScalarValue projection_bound_bols(std::size_t k, std::size_t d, double mu);
ScalarValue projection_bound_ols(std::size_t k, std::size_t d, double mu);

// Cubic coefficients for the recoverable-sparsity condition
// alpha k^3 + beta k^2 + omega k + delta < 0.
struct CubicCoeffs {
    double alpha, beta, omega, delta;
};
CubicCoeffs erc_cubic_coeffs(double mu, double mu_B, std::size_t d);

// Evaluates the cubic at k.
double erc_cubic_eval(const CubicCoeffs& c, double k);

// Largest sparsity C such that the cubic stays negative on (0, C): the
// smallest positive real root, +infinity when no positive root exists or
// the root exceeds 1e6. Requires mu, mu_B >= 0.
double erc_sparsity_bound(double mu, double mu_B, std::size_t d);

// Data-independent ceiling on the exact recovery coefficient:
//   gamma <= 2 B k d mu_B / (2 - (k - B) d mu_B),
// with B the projection inflation factor. Valid when the projection
// bound is valid and the denominator is positive; recovery is certified
// only when the value is additionally below 1.
ScalarValue erc_gamma_bound(std::size_t k, std::size_t d, double mu,
                            double mu_B);

// Residual signal energy that guarantees the next selection is correct
// after t true blocks have been chosen, at noise level sigma:
// correct selection holds with probability at least 1 - 1/m whenever
// ||x over the unselected support||_2 exceeds this value.
ScalarValue residual_signal_threshold(std::size_t k, std::size_t t,
                                      std::size_t d, double mu, double mu_B,
                                      std::size_t m, double sigma);

// Per-block variant: the same guarantee when every in-support block
// individually exceeds this energy.
ScalarValue per_block_signal_threshold(std::size_t k, std::size_t d,
                                       double mu, double mu_B, std::size_t m,
                                       double sigma);

// Concentration width for the stopping statistic after C of the m degrees
// of freedom are spent:
//   eta = sqrt(4(m-C) - 2) - sqrt(m - C + 2 sqrt((m-C) log(m-C))).
// Valid while m - C > 1.
ScalarValue noise_tail_eta(std::size_t m, double C);

// Gaussian-correlation tail n / (sqrt(2 pi) z exp(z^2 / 2)) at z > 0.
double noise_tail(std::size_t n, double z);

// The two published calibration families pair a minimum-SNR bound with a
// success probability. The energy family controls the raw noise norm via
// sqrt(m + 2 sqrt(m log m)); the correlation family controls the
// dictionary-noise correlation via xi mu_B eta and trades a factor of C
// into the tail term.
enum class BlindFamily { energy, correlation };

// Success probability of blind recovery with threshold multiplier xi.
// May be arbitrarily negative (a vacuous bound) for small xi.
double success_probability(std::size_t m, std::size_t n, double mu_B,
                           double xi, double eta, double C, BlindFamily f);

// Supremum of success_probability over xi.
double probability_ceiling(std::size_t m, double C, BlindFamily f);

// Minimum linear SNR for which the blind rule is guaranteed to both keep
// selecting correctly and stop at the right size. Valid when every
// denominator in the two branches is positive.
ScalarValue min_snr(std::size_t k, std::size_t d, double mu, double mu_B,
                    std::size_t m, double xi, double eta, BlindFamily f);

struct UnreachableProbability : std::domain_error {
    UnreachableProbability(const std::string& msg, double ceiling_)
        : std::domain_error(msg), ceiling(ceiling_) {}
    double ceiling;
};

// Smallest xi whose success probability meets p_target, found by
// bisection to |P(xi) - p_target| <= 1e-10. Throws UnreachableProbability
// (carrying the achievable ceiling) when p_target is at or above the
// ceiling, and std::invalid_argument when the inputs leave the
// probability undefined (eta invalid or mu_B <= 0).
double xi_from_probability(double p_target, std::size_t m, std::size_t n,
                           double mu_B, double eta, double C, BlindFamily f);

// Everything above evaluated at one parameter point, for the bounds CLI.
struct BoundsInput {
    std::size_t k = 0, d = 1, m = 0, n = 0;
    double mu = 0.0, mu_B = 0.0;
    double sigma = 0.0;
    double p_target = std::numeric_limits<double>::quiet_NaN();
    double xi = std::numeric_limits<double>::quiet_NaN();
};

struct BoundsReport {
    BoundsInput in;
    Interval lambda_block, lambda_homogeneous, lambda_scalar;
    ProjectionBound proj;
    ScalarValue proj_bols, proj_ols;
    double sparsity_C = std::numeric_limits<double>::quiet_NaN();
    ScalarValue gamma_bound;
    ScalarValue threshold_full, threshold_block;
    ScalarValue eta;
    double xi_energy = std::numeric_limits<double>::quiet_NaN();
    double xi_correlation = std::numeric_limits<double>::quiet_NaN();
    ScalarValue snr_min_energy, snr_min_correlation;
    double p_energy = std::numeric_limits<double>::quiet_NaN();
    double p_correlation = std::numeric_limits<double>::quiet_NaN();
};

// Fills a report. If in.xi is set it is used for both families;
// otherwise, when in.p_target is set, a family-specific xi is solved for
// (left NaN, with NaN downstream values, when the target is unreachable).
BoundsReport make_bounds_report(const BoundsInput& in);

}  // namespace bbols
