// Command-line front end: coherence measurement, bound-curve tables,
// single-instance solves, and Monte Carlo sweeps. Exit codes: 0 on
// success, 2 for configuration or input errors, 3 when a blind-rule
// calibration is vacuous and no fallback xi was supplied.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "bbols/bounds.hpp"
#include "bbols/coherence.hpp"
#include "bbols/generators.hpp"
#include "bbols/harness.hpp"
#include "bbols/kernels.hpp"
#include "bbols/matrix_io.hpp"
#include "bbols/recovery.hpp"
#include "bbols/rng.hpp"

namespace {

struct GenOpts {
    std::string kind = "gaussian_block_orth";
    std::size_t m = 0, n = 0, d = 1;
    double G = 5.0;
    std::uint64_t seed = 1;
};

void add_gen_options(CLI::App* cmd, GenOpts& g, bool* generate) {
    cmd->add_flag("--generate", *generate,
                  "generate the matrix instead of reading a file");
    cmd->add_option("--kind", g.kind,
                    "matrix ensemble: gaussian_block_orth or hybrid");
    cmd->add_option("-m,--rows", g.m, "measurement count");
    cmd->add_option("-n,--cols", g.n, "dictionary columns");
    cmd->add_option("-d,--block", g.d, "block width");
    cmd->add_option("--G", g.G, "hybrid ensemble offset range");
    cmd->add_option("--seed", g.seed, "generator seed");
}

bbols::BlockMatrix generate_matrix(const GenOpts& g) {
    if (g.m == 0 || g.n == 0) {
        throw std::invalid_argument(
            "--generate needs -m and -n (and usually -d)");
    }
    bbols::Rng rng = bbols::Rng::stream(g.seed, 0, 0);
    if (g.kind == "gaussian_block_orth") {
        return bbols::gen_gaussian_block_orthogonal(g.m, g.n, g.d, rng);
    }
    if (g.kind == "hybrid") {
        return bbols::gen_hybrid(g.m, g.n, g.d, g.G, rng);
    }
    throw std::invalid_argument("unknown matrix kind '" + g.kind + "'");
}

std::ostream& open_out(std::ofstream& file, const std::string& path) {
    if (path.empty()) return std::cout;
    file.open(path);
    if (!file) {
        throw std::invalid_argument(path + ": cannot open for writing");
    }
    return file;
}

int cmd_coherence(const std::string& matrix_file, bool generate,
                  const GenOpts& g) {
    bbols::BlockMatrix D;
    if (generate) {
        D = generate_matrix(g);
    } else if (!matrix_file.empty()) {
        D = bbols::io::read_matrix_file(matrix_file);
    } else {
        throw std::invalid_argument(
            "coherence needs a matrix file or --generate");
    }
    const bbols::CoherenceProfile p = bbols::coherence_profile(D);
    std::printf("backend %s\n", bbols::kernels::backend_name());
    std::printf("m %zu\nn %zu\nd %zu\n", D.m, D.n, D.d);
    std::printf("unit_norm_dev %.9g\n", bbols::max_column_norm_deviation(D));
    std::printf("mu %.9g\nmu_B %.9g\nnu %.9g\n", p.mu, p.mu_B, p.nu);
    return 0;
}

struct BoundsOpts {
    std::string preset;
    bool custom = false;
    std::size_t k = 2, d = 2, m = 0, n = 0;
    double mu = -1.0, mu_b = -1.0;
    double mu_min = -1.0, mu_max = -1.0;
    std::size_t mu_steps = 0;
    double mu_b_scale = -1.0;
    double sigma = 0.0;
    double p_target = std::numeric_limits<double>::quiet_NaN();
    double xi = std::numeric_limits<double>::quiet_NaN();
    std::string out;
};

int cmd_bounds(const BoundsOpts& o) {
    std::vector<bbols::BoundsInput> grid;
    if (!o.preset.empty()) {
        grid = bbols::bounds_preset(o.preset);
    } else if (o.custom) {
        std::vector<double> mus;
        if (o.mu >= 0) {
            mus.push_back(o.mu);
        } else if (o.mu_min >= 0 && o.mu_max >= o.mu_min && o.mu_steps >= 2) {
            for (std::size_t i = 0; i < o.mu_steps; ++i) {
                mus.push_back(o.mu_min +
                              (o.mu_max - o.mu_min) *
                                  static_cast<double>(i) /
                                  static_cast<double>(o.mu_steps - 1));
            }
        } else {
            throw std::invalid_argument(
                "--custom needs --mu or --mu-min/--mu-max/--mu-steps");
        }
        const double scale =
            o.mu_b_scale > 0 ? o.mu_b_scale
                             : 1.0 / static_cast<double>(o.d);
        for (double mu : mus) {
            bbols::BoundsInput in;
            in.k = o.k;
            in.d = o.d;
            in.m = o.m;
            in.n = o.n;
            in.mu = mu;
            in.mu_B = o.mu_b >= 0 && mus.size() == 1 ? o.mu_b : mu * scale;
            in.sigma = o.sigma;
            in.p_target = o.p_target;
            in.xi = o.xi;
            grid.push_back(in);
        }
    } else {
        throw std::invalid_argument("bounds needs --preset or --custom");
    }
    std::ofstream file;
    bbols::write_bounds_csv(open_out(file, o.out), grid);
    return 0;
}

struct SolveOpts {
    std::string matrix_file, y_file;
    bool generate = false;
    GenOpts gen;
    std::size_t k = 2;
    double snr_db = 20.0;
    std::string signal_dist = "gauss01";
    std::string alg = "bols";
    std::string rule = "blind";
    std::size_t iters = 0;
    double tau = 0.0;
    double p_target = 0.95;
    double xi = std::numeric_limits<double>::quiet_NaN();
    std::size_t max_iters = 0;
    double success_tol = 1e-2;
    std::string out_x, save_matrix;
};

int cmd_solve(const SolveOpts& o) {
    bbols::BlockMatrix D;
    if (o.generate) {
        D = generate_matrix(o.gen);
    } else if (!o.matrix_file.empty()) {
        D = bbols::io::read_matrix_file(o.matrix_file);
    } else {
        throw std::invalid_argument("solve needs --matrix or --generate");
    }
    if (!o.save_matrix.empty()) bbols::io::write_matrix_file(o.save_matrix, D);

    std::vector<double> y;
    std::vector<double> x_true;
    if (!o.y_file.empty()) {
        y = bbols::io::read_vector_file(o.y_file);
        if (y.size() != D.m) {
            throw std::invalid_argument(
                "measurement vector length does not match the matrix");
        }
    } else {
        bbols::Rng srng = bbols::Rng::stream(o.gen.seed, 1, 0);
        const bbols::SignalDist dist =
            o.signal_dist == "gauss1_001" ? bbols::SignalDist::gauss1_001
                                          : bbols::SignalDist::gauss01;
        const bbols::BlockSparseSignal sig =
            bbols::gen_signal(D.n, D.d, o.k, dist, srng);
        bbols::Rng nrng = bbols::Rng::stream(o.gen.seed, 2, 0);
        const bbols::NoiseRealization noise =
            bbols::calibrate_noise(D, sig.x, o.snr_db, nrng);
        y = bbols::apply(D, sig.x);
        for (std::size_t i = 0; i < D.m; ++i) y[i] += noise.eps[i];
        x_true = sig.x;
        std::printf("synthesized: k %zu, snr_db %.9g, sigma %.9g, true blocks:",
                    o.k, o.snr_db, noise.sigma);
        for (std::size_t b : sig.support_blocks) std::printf(" %zu", b);
        std::printf("\n");
    }

    bbols::Algorithm alg;
    if (o.alg == "omp") {
        alg = bbols::Algorithm::omp;
    } else if (o.alg == "ols") {
        alg = bbols::Algorithm::ols;
    } else if (o.alg == "bomp") {
        alg = bbols::Algorithm::bomp;
    } else if (o.alg == "bols") {
        alg = bbols::Algorithm::bols;
    } else {
        throw std::invalid_argument("unknown --alg '" + o.alg + "'");
    }
    const bool block_alg =
        alg == bbols::Algorithm::bomp || alg == bbols::Algorithm::bols;

    bbols::StoppingRule rule;
    if (o.rule == "fixed") {
        if (o.iters == 0) {
            throw std::invalid_argument("--rule fixed needs --iters");
        }
        rule = bbols::StoppingRule::fixed(o.iters);
    } else if (o.rule == "residual") {
        rule = bbols::StoppingRule::residual(o.tau);
    } else if (o.rule == "blind") {
        const bbols::CoherenceProfile prof = bbols::coherence_profile(D);
        const double coh = block_alg ? prof.mu_B : prof.mu;
        double xi = o.xi;
        if (!std::isfinite(xi)) {
            const double mu_B_eff = block_alg ? prof.mu_B : prof.mu;
            const std::size_t d_eff = block_alg ? D.d : 1;
            const double C =
                bbols::erc_sparsity_bound(prof.mu, mu_B_eff, d_eff);
            const bbols::ScalarValue eta = bbols::noise_tail_eta(D.m, C);
            if (!eta.valid) {
                throw bbols::VacuousBound(
                    "blind calibration vacuous: m - C = " +
                    std::to_string(static_cast<double>(D.m) - C) +
                    "; pass --xi explicitly");
            }
            xi = bbols::xi_from_probability(o.p_target, D.m, D.n, mu_B_eff,
                                            eta.value, C,
                                            bbols::BlindFamily::energy);
            std::printf("calibrated xi %.9g (mu_B %.9g, C %.9g, eta %.9g)\n",
                        xi, mu_B_eff, C, eta.value);
        }
        rule = block_alg ? bbols::StoppingRule::blind_block(xi, coh)
                         : bbols::StoppingRule::blind_scalar(xi, coh);
    } else {
        throw std::invalid_argument("unknown --rule '" + o.rule + "'");
    }
    rule.max_iterations = o.max_iters;

    const bbols::RecoveryResult res = bbols::recover(D, y, alg, rule);

    std::printf("algorithm %s\nstop_reason %s\niterations %zu\n", o.alg.c_str(),
                bbols::to_string(res.stop_reason), res.iterations);
    std::printf("selected");
    for (std::size_t b : res.selected_blocks) std::printf(" %zu", b);
    std::printf("\nresidual %.9g\n", res.residual_trace.back());
    if (!res.blind_stat_trace.empty()) {
        std::printf("blind_stats");
        for (double s : res.blind_stat_trace) std::printf(" %.9g", s);
        std::printf("\n");
    }
    if (res.ls_rank_deficient) {
        std::printf("note: final least squares was rank deficient; "
                    "reporting the minimum-norm solution\n");
    }
    if (!x_true.empty()) {
        std::printf("recovery_success %d\n",
                    bbols::is_success(res.x_hat, x_true, o.success_tol) ? 1
                                                                        : 0);
    }

    const std::size_t nb = block_alg ? D.num_blocks() : D.n;
    const bbols::OccupancyReport occ =
        bbols::occupancy_from_recovery(res, nb);
    std::printf("occupied_blocks");
    for (std::size_t b = 0; b < nb; ++b) {
        if (occ.occupied[b]) std::printf(" %zu", b);
    }
    std::printf("\nfree_block_count %zu of %zu\n", occ.free_blocks.size(), nb);

    if (!o.out_x.empty()) bbols::io::write_vector_file(o.out_x, res.x_hat);
    return 0;
}

struct SweepOpts {
    std::string config_file;
    std::string out;
    std::optional<std::size_t> trials, threads;
    std::optional<std::uint64_t> seed;
    std::optional<double> xi;
    bool fixed_matrix = false;
};

int cmd_sweep(const SweepOpts& o) {
    bbols::ExperimentConfig cfg = bbols::parse_config_file(o.config_file);
    if (o.trials) cfg.trials = *o.trials;
    if (o.threads) cfg.threads = *o.threads;
    if (o.seed) cfg.master_seed = *o.seed;
    if (o.xi) cfg.xi = *o.xi;
    if (o.fixed_matrix) cfg.fixed_matrix = true;

    const bbols::SweepResult result = bbols::run_sweep(cfg);
    for (const bbols::CurvePoint& p : result.points) {
        if (p.vacuous_calibrations > 0) {
            std::fprintf(stderr,
                         "note: abscissa %.9g: %zu of %zu trials had a "
                         "vacuous blind calibration and used the fallback "
                         "xi %.9g\n",
                         p.abscissa, p.vacuous_calibrations, cfg.trials,
                         cfg.xi);
        }
    }
    std::ofstream file;
    bbols::write_sweep_csv(open_out(file, o.out), result);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"block-sparse spectrum sensing toolkit"};
    app.require_subcommand(1);

    std::string backend;
    app.add_option("--force-backend", backend,
                   "pin the compute kernels: scalar or avx2");

    // coherence
    auto* coh = app.add_subcommand(
        "coherence", "measure mu, mu_B, nu of a dictionary");
    std::string coh_matrix;
    bool coh_generate = false;
    GenOpts coh_gen;
    coh->add_option("matrix", coh_matrix, "matrix file (header 'm n d')");
    add_gen_options(coh, coh_gen, &coh_generate);

    // bounds
    auto* bounds = app.add_subcommand(
        "bounds", "tabulate the closed-form guarantees as CSV");
    BoundsOpts bo;
    bounds->add_option(
        "--preset", bo.preset,
        "fig1a|fig1b|fig2|fig3|fig4 (aliases: lambda-vs-mu, lambda-vs-k, "
        "projection, sparsity, min-snr)");
    bounds->add_flag("--custom", bo.custom, "use explicit parameters");
    bounds->add_option("--k", bo.k, "block sparsity");
    bounds->add_option("--d", bo.d, "block width");
    bounds->add_option("--m", bo.m, "measurements");
    bounds->add_option("--n", bo.n, "columns");
    bounds->add_option("--mu", bo.mu, "mutual coherence");
    bounds->add_option("--mu-b", bo.mu_b, "block coherence (single point)");
    bounds->add_option("--mu-min", bo.mu_min, "sweep start");
    bounds->add_option("--mu-max", bo.mu_max, "sweep end");
    bounds->add_option("--mu-steps", bo.mu_steps, "sweep point count");
    bounds->add_option("--mu-b-scale", bo.mu_b_scale,
                       "mu_B = scale * mu for sweeps (default 1/d)");
    bounds->add_option("--sigma", bo.sigma, "noise level for thresholds");
    bounds->add_option("--p-target", bo.p_target,
                       "success probability target for xi");
    bounds->add_option("--xi", bo.xi, "explicit threshold multiplier");
    bounds->add_option("-o,--out", bo.out, "output CSV path (default stdout)");

    // solve
    auto* solve = app.add_subcommand("solve", "run one recovery instance");
    SolveOpts so;
    solve->add_option("--matrix", so.matrix_file, "matrix file");
    add_gen_options(solve, so.gen, &so.generate);
    solve->add_option("--y", so.y_file, "measurement vector file");
    solve->add_option("--k", so.k, "synthesized support size");
    solve->add_option("--snr", so.snr_db, "synthesized SNR in dB (inf ok)");
    solve->add_option("--signal-dist", so.signal_dist,
                      "gauss01 or gauss1_001");
    solve->add_option("--alg", so.alg, "omp|ols|bomp|bols");
    solve->add_option("--rule", so.rule, "fixed|residual|blind");
    solve->add_option("--iters", so.iters, "iterations for --rule fixed");
    solve->add_option("--tau", so.tau, "residual norm for --rule residual");
    solve->add_option("--p-target", so.p_target,
                      "blind probability target (default 0.95)");
    solve->add_option("--xi", so.xi, "explicit blind threshold multiplier");
    solve->add_option("--max-iters", so.max_iters, "hard selection cap");
    solve->add_option("--success-tol", so.success_tol,
                      "relative error counted as success (default 0.01)");
    solve->add_option("--out-x", so.out_x, "write the estimate here");
    solve->add_option("--save-matrix", so.save_matrix,
                      "write the (generated) matrix here");

    // sweep
    auto* sweep = app.add_subcommand(
        "sweep", "Monte Carlo success curves from a config file");
    SweepOpts wo;
    sweep->add_option("-c,--config", wo.config_file, "experiment config file")
        ->required();
    sweep->add_option("-o,--out", wo.out, "output CSV path (default stdout)");
    std::size_t wo_trials = 0, wo_threads = 0;
    std::uint64_t wo_seed = 0;
    double wo_xi = 0.0;
    auto* opt_trials =
        sweep->add_option("--trials", wo_trials, "override trial count");
    auto* opt_threads =
        sweep->add_option("--threads", wo_threads, "override worker count");
    auto* opt_seed =
        sweep->add_option("--seed", wo_seed, "override master seed");
    auto* opt_xi = sweep->add_option("--xi", wo_xi,
                                     "fallback blind threshold multiplier");
    sweep->add_flag("--fixed-matrix", wo.fixed_matrix,
                    "one matrix for the whole sweep");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    if (!backend.empty()) {
        bbols::kernels::Backend want;
        if (backend == "scalar") {
            want = bbols::kernels::Backend::scalar;
        } else if (backend == "avx2") {
            want = bbols::kernels::Backend::avx2;
        } else {
            std::fprintf(stderr, "error: unknown backend '%s'\n",
                         backend.c_str());
            return 2;
        }
        if (!bbols::kernels::force_backend(want)) {
            std::fprintf(stderr,
                         "error: backend '%s' is unavailable on this cpu\n",
                         backend.c_str());
            return 2;
        }
    }

    try {
        if (coh->parsed()) return cmd_coherence(coh_matrix, coh_generate, coh_gen);
        if (bounds->parsed()) return cmd_bounds(bo);
        if (solve->parsed()) return cmd_solve(so);
        if (sweep->parsed()) {
            if (opt_trials->count()) wo.trials = wo_trials;
            if (opt_threads->count()) wo.threads = wo_threads;
            if (opt_seed->count()) wo.seed = wo_seed;
            if (opt_xi->count()) wo.xi = wo_xi;
            return cmd_sweep(wo);
        }
    } catch (const bbols::VacuousBound& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const bbols::UnreachableProbability& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
