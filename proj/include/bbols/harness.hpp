#pragma once
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "bbols/block_matrix.hpp"
#include "bbols/bounds.hpp"
#include "bbols/generators.hpp"
#include "bbols/recovery.hpp"

// Monte Carlo sweep driver. A sweep fixes a matrix ensemble and signal
// model, walks a grid of sparsities or SNRs, and estimates per-algorithm
// success statistics over paired trials (every algorithm sees the same
// instance). All randomness derives from (master_seed, point, trial), so
// results are identical for any thread count and any re-run.

namespace bbols {

enum class MatrixKind { gaussian_block_orth, hybrid };

// Algorithm under test plus its stopping policy. The plain entries run
// with the oracle iteration count (k for block solvers, kd for width-1
// solvers); the b_ variants stop via the coherence-calibrated blind rule
// and know neither k nor the noise level.
enum class AlgoSpec { omp, ols, bomp, bols, b_omp, b_bols };

const char* to_string(AlgoSpec a);
const char* to_string(MatrixKind k);
AlgoSpec algo_from_string(const std::string& s);

struct ExperimentConfig {
    MatrixKind matrix_kind = MatrixKind::gaussian_block_orth;
    std::size_t m = 0, n = 0, d = 1;
    std::vector<std::size_t> k_grid;  // sparsity sweep at fixed snr_db
    std::vector<double> snr_grid;     // SNR sweep at fixed k
    std::size_t k = 0;                // sparsity for SNR sweeps
    double snr_db = 20.0;             // SNR for sparsity sweeps; may be inf
    SignalDist signal_dist = SignalDist::gauss01;
    std::vector<AlgoSpec> algorithms;
    std::size_t trials = 100;
    std::uint64_t master_seed = 1;
    double success_rel_tol = 1e-2;
    double p_target = 0.95;  // blind-rule probability target
    double G = 5.0;          // hybrid ensemble offset range
    bool fixed_matrix = false;  // one matrix for the whole sweep
    // Fallback blind threshold multiplier. Blind rules normally solve xi
    // from p_target against the trial matrix's measured coherence; when
    // that calibration is vacuous the trial falls back to this value,
    // and with no fallback set the sweep refuses to run.
    double xi = std::numeric_limits<double>::quiet_NaN();
    std::size_t threads = 1;

    bool sweep_is_k() const { return !k_grid.empty(); }
};

struct AlgoStats {
    AlgoSpec algo;
    double success_prob = 0.0;
    double support_prob = 0.0;  // exact support identification rate
    double std_err = 0.0;       // binomial stderr of success_prob
    double mean_iters = 0.0;
};

struct CurvePoint {
    double abscissa = 0.0;  // k or SNR in dB
    std::vector<AlgoStats> algos;
    // Trials at this point whose blind calibration was vacuous and ran
    // on the fallback xi instead.
    std::size_t vacuous_calibrations = 0;
};

struct SweepResult {
    ExperimentConfig config;
    std::vector<CurvePoint> points;
};

// The blind rule could not be calibrated from the probability target at
// the instance's parameters (the bound is vacuous there); callers must
// supply an explicit xi to proceed.
struct VacuousBound : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Key-value experiment description; see the README for the schema.
// Throws std::invalid_argument with a line reference on any problem.
ExperimentConfig parse_config_text(const std::string& text,
                                   const std::string& origin);
ExperimentConfig parse_config_file(const std::string& path);

SweepResult run_sweep(const ExperimentConfig& cfg);

// CSV with header abscissa,algorithm,success_prob,stderr,mean_iters,
// support_prob and one row per (point, algorithm). Floats use %.9g.
void write_sweep_csv(std::ostream& out, const SweepResult& result);

// Closed-form bound curves over a parameter grid, one wide CSV row per
// point (empty fields where a bound is out of regime).
void write_bounds_csv(std::ostream& out,
                      const std::vector<BoundsInput>& grid);

// Named parameter grids for the standard bound plots:
//   fig1a  (alias lambda-vs-mu)   eigenvalue bounds, mu in [0.01, 0.1],
//                                 k=4, d=2, mu_B = mu/d
//   fig1b  (alias lambda-vs-k)    eigenvalue bounds, k in {2..8}, mu=0.05,
//                                 d=2
//   fig2   (alias projection)     projection bounds, mu in [0.01, 0.1]
//                                 by k in {2..6}, d=2
//   fig3   (alias sparsity)       recoverable sparsity, mu in [0.02, 0.1],
//                                 d in {2, 4}
//   fig4   (alias min-snr)        minimum SNR vs target probability,
//                                 k=2, d=2, n=8192, m in {1024, 2048}
// Throws std::invalid_argument for an unknown name.
std::vector<BoundsInput> bounds_preset(const std::string& name);

// Occupancy view of one recovered spectrum: a block is occupied when it
// was selected and its coefficient energy clears 1e-8 * ||x_hat||_2;
// every other block is free for secondary access.
struct OccupancyReport {
    std::vector<bool> occupied;            // one decision per block
    std::vector<std::size_t> free_blocks;  // ascending
};
OccupancyReport occupancy_from_recovery(const RecoveryResult& result,
                                        std::size_t num_blocks);

}  // namespace bbols
