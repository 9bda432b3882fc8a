#include "bbols/harness.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

#include "bbols/coherence.hpp"

namespace bbols {
namespace {

std::string fmt9(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

// Bounds CSV cell: empty when the value is out of regime, "inf" when a
// quantity is genuinely unbounded.
std::string csv_field(double v) {
    if (std::isnan(v)) return "";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return fmt9(v);
}

BlockMatrix make_matrix(const ExperimentConfig& cfg, Rng& rng) {
    switch (cfg.matrix_kind) {
        case MatrixKind::gaussian_block_orth:
            return gen_gaussian_block_orthogonal(cfg.m, cfg.n, cfg.d, rng);
        case MatrixKind::hybrid:
            return gen_hybrid(cfg.m, cfg.n, cfg.d, cfg.G, rng);
    }
    throw std::invalid_argument("unknown matrix kind");
}

// Stream labels: each (point, purpose) pair gets its own substream so
// trial t of point p draws the same numbers no matter which worker runs
// it or which algorithms are configured.
constexpr std::uint64_t kPurposeMatrix = 0;
constexpr std::uint64_t kPurposeSignal = 1;
constexpr std::uint64_t kPurposeNoise = 2;
constexpr std::uint64_t kFixedMatrixPoint = 0x7fffffff;

std::uint64_t point_code(std::size_t point, std::uint64_t purpose) {
    return static_cast<std::uint64_t>(point) * 4 + purpose;
}

struct BlindCalibration {
    double mu = 0.0, mu_B = 0.0;
    double xi_block = std::numeric_limits<double>::quiet_NaN();
    double xi_scalar = std::numeric_limits<double>::quiet_NaN();
    bool vacuous = false;
};

// Solves the blind threshold multiplier from the probability target and
// the measured coherences. On a vacuous bound, falls back to cfg.xi when
// set and otherwise refuses the sweep.
BlindCalibration calibrate_blind(const ExperimentConfig& cfg,
                                 const CoherenceProfile& prof,
                                 bool need_block, bool need_scalar) {
    BlindCalibration cal;
    cal.mu = prof.mu;
    cal.mu_B = prof.mu_B;
    auto solve = [&](double mu_B_eff, std::size_t d_eff) {
        const double C = erc_sparsity_bound(prof.mu, mu_B_eff, d_eff);
        const ScalarValue eta = noise_tail_eta(cfg.m, C);
        if (!eta.valid) {
            throw std::invalid_argument(
                "noise concentration width undefined: m - C = " +
                fmt9(static_cast<double>(cfg.m) - C));
        }
        return xi_from_probability(cfg.p_target, cfg.m, cfg.n, mu_B_eff,
                                   eta.value, C, BlindFamily::energy);
    };
    auto solve_or_fallback = [&](double mu_B_eff, std::size_t d_eff,
                                 const char* label) {
        try {
            return solve(mu_B_eff, d_eff);
        } catch (const std::exception& e) {
            if (std::isfinite(cfg.xi)) {
                cal.vacuous = true;
                return cfg.xi;
            }
            throw VacuousBound(std::string("blind calibration (") + label +
                               ") is vacuous and no fallback xi is "
                               "configured: " +
                               e.what());
        }
    };
    if (need_block) cal.xi_block = solve_or_fallback(prof.mu_B, cfg.d, "block");
    if (need_scalar) cal.xi_scalar = solve_or_fallback(prof.mu, 1, "scalar");
    return cal;
}

struct TrialAccum {
    std::uint64_t successes = 0;
    std::uint64_t supports = 0;
    std::uint64_t iters = 0;
};

void run_trial(const ExperimentConfig& cfg, std::size_t point,
               std::size_t trial, std::size_t k_t, double snr_t,
               const BlockMatrix* fixed_matrix,
               const BlindCalibration* fixed_cal, bool need_block,
               bool need_scalar, std::vector<TrialAccum>& acc,
               std::uint64_t& vacuous_count) {
    BlockMatrix local;
    const BlockMatrix* D = fixed_matrix;
    if (!D) {
        Rng mrng = Rng::stream(cfg.master_seed,
                               point_code(point, kPurposeMatrix), trial);
        local = make_matrix(cfg, mrng);
        D = &local;
    }
    Rng srng =
        Rng::stream(cfg.master_seed, point_code(point, kPurposeSignal), trial);
    const BlockSparseSignal sig =
        gen_signal(cfg.n, cfg.d, k_t, cfg.signal_dist, srng);

    std::vector<double> y;
    if (k_t == 0) {
        // An empty spectrum carries no power, so SNR calibration is
        // moot; run the solvers on pure zeros.
        y.assign(cfg.m, 0.0);
    } else {
        Rng nrng = Rng::stream(cfg.master_seed,
                               point_code(point, kPurposeNoise), trial);
        const NoiseRealization noise =
            calibrate_noise(*D, sig.x, snr_t, nrng);
        y = apply(*D, sig.x);
        for (std::size_t i = 0; i < cfg.m; ++i) y[i] += noise.eps[i];
    }

    BlindCalibration cal;
    if (need_block || need_scalar) {
        if (fixed_cal) {
            cal = *fixed_cal;
        } else {
            cal = calibrate_blind(cfg, coherence_profile(*D), need_block,
                                  need_scalar);
        }
        if (cal.vacuous) ++vacuous_count;
    }

    std::vector<std::size_t> support_cols;
    for (std::size_t b : sig.support_blocks) {
        for (std::size_t c = 0; c < cfg.d; ++c) {
            support_cols.push_back(b * cfg.d + c);
        }
    }

    for (std::size_t ai = 0; ai < cfg.algorithms.size(); ++ai) {
        Algorithm alg = Algorithm::bols;
        StoppingRule rule;
        bool scalar_view = false;
        switch (cfg.algorithms[ai]) {
            case AlgoSpec::omp:
                alg = Algorithm::omp;
                rule = StoppingRule::fixed(k_t * cfg.d);
                scalar_view = true;
                break;
            case AlgoSpec::ols:
                alg = Algorithm::ols;
                rule = StoppingRule::fixed(k_t * cfg.d);
                scalar_view = true;
                break;
            case AlgoSpec::bomp:
                alg = Algorithm::bomp;
                rule = StoppingRule::fixed(k_t);
                break;
            case AlgoSpec::bols:
                alg = Algorithm::bols;
                rule = StoppingRule::fixed(k_t);
                break;
            case AlgoSpec::b_omp:
                alg = Algorithm::omp;
                rule = StoppingRule::blind_scalar(cal.xi_scalar, cal.mu);
                scalar_view = true;
                break;
            case AlgoSpec::b_bols:
                alg = Algorithm::bols;
                rule = StoppingRule::blind_block(cal.xi_block, cal.mu_B);
                break;
        }
        const RecoveryResult res = recover(*D, y, alg, rule);
        if (is_success(res.x_hat, sig.x, cfg.success_rel_tol)) {
            ++acc[ai].successes;
        }
        std::vector<std::size_t> sel(res.selected_blocks);
        std::sort(sel.begin(), sel.end());
        const std::vector<std::size_t>& expect =
            scalar_view ? support_cols : sig.support_blocks;
        if (sel == expect) ++acc[ai].supports;
        acc[ai].iters += res.iterations;
    }
}

void validate_config(const ExperimentConfig& cfg) {
    auto bad = [](const std::string& msg) {
        throw std::invalid_argument("config: " + msg);
    };
    if (cfg.m == 0 || cfg.n == 0 || cfg.d == 0) bad("m, n, d must be positive");
    if (cfg.n % cfg.d != 0) bad("d must divide n");
    if (cfg.trials < 1) bad("trials must be at least 1");
    if (cfg.algorithms.empty()) bad("no algorithms configured");
    const bool has_k = !cfg.k_grid.empty();
    const bool has_snr = !cfg.snr_grid.empty();
    if (has_k == has_snr) {
        bad("exactly one of k_grid and snr_grid must be set");
    }
    const std::size_t nb = cfg.n / cfg.d;
    for (std::size_t k : cfg.k_grid) {
        if (k > nb) bad("k_grid entry exceeds the number of blocks");
    }
    if (has_snr && cfg.k > nb) bad("k exceeds the number of blocks");
    if (!(cfg.success_rel_tol > 0)) bad("success_rel_tol must be positive");
    if (cfg.matrix_kind == MatrixKind::gaussian_block_orth && cfg.d > cfg.m) {
        bad("block width exceeds rows; orthonormal blocks are impossible");
    }
}

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

}  // namespace

const char* to_string(AlgoSpec a) {
    switch (a) {
        case AlgoSpec::omp: return "omp";
        case AlgoSpec::ols: return "ols";
        case AlgoSpec::bomp: return "bomp";
        case AlgoSpec::bols: return "bols";
        case AlgoSpec::b_omp: return "b-omp";
        case AlgoSpec::b_bols: return "b-bols";
    }
    return "?";
}

const char* to_string(MatrixKind k) {
    switch (k) {
        case MatrixKind::gaussian_block_orth: return "gaussian_block_orth";
        case MatrixKind::hybrid: return "hybrid";
    }
    return "?";
}

AlgoSpec algo_from_string(const std::string& s) {
    std::string t;
    for (char c : s) {
        t += c == '_' ? '-' : static_cast<char>(std::tolower(
                                  static_cast<unsigned char>(c)));
    }
    if (t == "omp") return AlgoSpec::omp;
    if (t == "ols") return AlgoSpec::ols;
    if (t == "bomp") return AlgoSpec::bomp;
    if (t == "bols") return AlgoSpec::bols;
    if (t == "b-omp") return AlgoSpec::b_omp;
    if (t == "b-bols") return AlgoSpec::b_bols;
    throw std::invalid_argument("unknown algorithm '" + s + "'");
}

ExperimentConfig parse_config_text(const std::string& text,
                                   const std::string& origin) {
    ExperimentConfig cfg;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;

    auto bad = [&](const std::string& msg) {
        std::ostringstream os;
        os << origin << ":" << lineno << ": " << msg;
        throw std::invalid_argument(os.str());
    };
    auto parse_size = [&](const std::string& v) -> std::size_t {
        try {
            std::size_t pos = 0;
            const unsigned long long r = std::stoull(v, &pos);
            if (pos != v.size()) throw std::invalid_argument(v);
            return static_cast<std::size_t>(r);
        } catch (const std::exception&) {
            bad("expected a nonnegative integer, got '" + v + "'");
        }
        return 0;
    };
    auto parse_double = [&](const std::string& v) -> double {
        try {
            std::size_t pos = 0;
            const double r = std::stod(v, &pos);
            if (pos != v.size()) throw std::invalid_argument(v);
            return r;
        } catch (const std::exception&) {
            bad("expected a number, got '" + v + "'");
        }
        return 0;
    };
    auto split_list = [](const std::string& v) {
        std::string s(v);
        std::replace(s.begin(), s.end(), ',', ' ');
        std::istringstream is(s);
        std::vector<std::string> out;
        std::string tok;
        while (is >> tok) out.push_back(tok);
        return out;
    };

    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string key;
        ls >> key;
        std::string value;
        std::getline(ls, value);
        value = trim(value);
        if (value.empty()) bad("key '" + key + "' has no value");

        if (key == "matrix_kind") {
            if (value == "gaussian_block_orth") {
                cfg.matrix_kind = MatrixKind::gaussian_block_orth;
            } else if (value == "hybrid") {
                cfg.matrix_kind = MatrixKind::hybrid;
            } else {
                bad("unknown matrix_kind '" + value + "'");
            }
        } else if (key == "m") {
            cfg.m = parse_size(value);
        } else if (key == "n") {
            cfg.n = parse_size(value);
        } else if (key == "d") {
            cfg.d = parse_size(value);
        } else if (key == "k") {
            cfg.k = parse_size(value);
        } else if (key == "k_grid") {
            cfg.k_grid.clear();
            for (const std::string& tok : split_list(value)) {
                cfg.k_grid.push_back(parse_size(tok));
            }
        } else if (key == "snr_grid") {
            cfg.snr_grid.clear();
            for (const std::string& tok : split_list(value)) {
                cfg.snr_grid.push_back(parse_double(tok));
            }
        } else if (key == "snr_db") {
            cfg.snr_db = parse_double(value);
        } else if (key == "signal_dist") {
            if (value == "gauss01") {
                cfg.signal_dist = SignalDist::gauss01;
            } else if (value == "gauss1_001") {
                cfg.signal_dist = SignalDist::gauss1_001;
            } else {
                bad("unknown signal_dist '" + value + "'");
            }
        } else if (key == "algorithms") {
            cfg.algorithms.clear();
            for (const std::string& tok : split_list(value)) {
                try {
                    cfg.algorithms.push_back(algo_from_string(tok));
                } catch (const std::exception& e) {
                    bad(e.what());
                }
            }
        } else if (key == "trials") {
            cfg.trials = parse_size(value);
        } else if (key == "master_seed") {
            cfg.master_seed = parse_size(value);
        } else if (key == "success_rel_tol") {
            cfg.success_rel_tol = parse_double(value);
        } else if (key == "p_target") {
            cfg.p_target = parse_double(value);
        } else if (key == "G") {
            cfg.G = parse_double(value);
        } else if (key == "fixed_matrix") {
            if (value == "1" || value == "true") {
                cfg.fixed_matrix = true;
            } else if (value == "0" || value == "false") {
                cfg.fixed_matrix = false;
            } else {
                bad("fixed_matrix must be 0/1/true/false");
            }
        } else if (key == "xi") {
            cfg.xi = parse_double(value);
        } else if (key == "threads") {
            cfg.threads = parse_size(value);
        } else {
            bad("unknown key '" + key + "'");
        }
    }
    validate_config(cfg);
    return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument(path + ": cannot open config file");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str(), path);
}

SweepResult run_sweep(const ExperimentConfig& cfg) {
    validate_config(cfg);
    const bool need_block =
        std::count(cfg.algorithms.begin(), cfg.algorithms.end(),
                   AlgoSpec::b_bols) > 0;
    const bool need_scalar =
        std::count(cfg.algorithms.begin(), cfg.algorithms.end(),
                   AlgoSpec::b_omp) > 0;

    BlockMatrix fixed;
    BlindCalibration fixed_cal;
    const BlockMatrix* fixed_ptr = nullptr;
    const BlindCalibration* fixed_cal_ptr = nullptr;
    if (cfg.fixed_matrix) {
        Rng mrng = Rng::stream(cfg.master_seed, kFixedMatrixPoint, 0);
        fixed = make_matrix(cfg, mrng);
        fixed_ptr = &fixed;
        if (need_block || need_scalar) {
            fixed_cal = calibrate_blind(cfg, coherence_profile(fixed),
                                        need_block, need_scalar);
            fixed_cal_ptr = &fixed_cal;
        }
    }

    SweepResult result;
    result.config = cfg;
    const std::size_t num_points =
        cfg.sweep_is_k() ? cfg.k_grid.size() : cfg.snr_grid.size();

    for (std::size_t pi = 0; pi < num_points; ++pi) {
        const std::size_t k_t = cfg.sweep_is_k() ? cfg.k_grid[pi] : cfg.k;
        const double snr_t =
            cfg.sweep_is_k() ? cfg.snr_db : cfg.snr_grid[pi];

        const std::size_t workers =
            std::max<std::size_t>(1, std::min(cfg.threads, cfg.trials));
        std::vector<std::vector<TrialAccum>> accs(
            workers, std::vector<TrialAccum>(cfg.algorithms.size()));
        std::vector<std::uint64_t> vacs(workers, 0);

        if (workers == 1) {
            for (std::size_t t = 0; t < cfg.trials; ++t) {
                run_trial(cfg, pi, t, k_t, snr_t, fixed_ptr, fixed_cal_ptr,
                          need_block, need_scalar, accs[0], vacs[0]);
            }
        } else {
            std::vector<std::thread> pool;
            std::vector<std::exception_ptr> errs(workers);
            const std::size_t chunk =
                (cfg.trials + workers - 1) / workers;
            for (std::size_t w = 0; w < workers; ++w) {
                pool.emplace_back([&, w] {
                    try {
                        const std::size_t t0 = w * chunk;
                        const std::size_t t1 =
                            std::min(cfg.trials, t0 + chunk);
                        for (std::size_t t = t0; t < t1; ++t) {
                            run_trial(cfg, pi, t, k_t, snr_t, fixed_ptr,
                                      fixed_cal_ptr, need_block, need_scalar,
                                      accs[w], vacs[w]);
                        }
                    } catch (...) {
                        errs[w] = std::current_exception();
                    }
                });
            }
            for (auto& th : pool) th.join();
            for (auto& e : errs) {
                if (e) std::rethrow_exception(e);
            }
        }

        CurvePoint point;
        point.abscissa =
            cfg.sweep_is_k() ? static_cast<double>(k_t) : snr_t;
        for (std::size_t ai = 0; ai < cfg.algorithms.size(); ++ai) {
            TrialAccum total;
            for (const auto& a : accs) {
                total.successes += a[ai].successes;
                total.supports += a[ai].supports;
                total.iters += a[ai].iters;
            }
            AlgoStats st;
            st.algo = cfg.algorithms[ai];
            const double trials = static_cast<double>(cfg.trials);
            st.success_prob = static_cast<double>(total.successes) / trials;
            st.support_prob = static_cast<double>(total.supports) / trials;
            st.std_err = std::sqrt(st.success_prob *
                                   (1.0 - st.success_prob) / trials);
            st.mean_iters = static_cast<double>(total.iters) / trials;
            point.algos.push_back(st);
        }
        for (std::uint64_t v : vacs) point.vacuous_calibrations += v;
        result.points.push_back(std::move(point));
    }
    return result;
}

void write_sweep_csv(std::ostream& out, const SweepResult& result) {
    out << "abscissa,algorithm,success_prob,stderr,mean_iters,support_prob\n";
    for (const CurvePoint& p : result.points) {
        for (const AlgoStats& st : p.algos) {
            out << fmt9(p.abscissa) << ',' << to_string(st.algo) << ','
                << fmt9(st.success_prob) << ',' << fmt9(st.std_err) << ','
                << fmt9(st.mean_iters) << ',' << fmt9(st.support_prob)
                << '\n';
        }
    }
}

void write_bounds_csv(std::ostream& out,
                      const std::vector<BoundsInput>& grid) {
    out << "k,d,m,n,mu,mu_B,sigma,p_target,"
           "lambda_block_lo,lambda_block_hi,"
           "lambda_homog_lo,lambda_homog_hi,"
           "lambda_scalar_lo,lambda_scalar_hi,"
           "b_factor,proj_lower,proj_bols,proj_ols,"
           "sparsity_C,gamma_bound,threshold_full,threshold_block,eta,"
           "xi_energy,xi_correlation,"
           "snr_min_energy,snr_min_energy_db,"
           "snr_min_correlation,snr_min_correlation_db,"
           "p_energy,p_correlation\n";
    auto db = [](const ScalarValue& s) {
        if (!s.valid || !(s.value > 0)) {
            return std::numeric_limits<double>::quiet_NaN();
        }
        return 10.0 * std::log10(s.value);
    };
    auto val = [](const ScalarValue& s) {
        return s.valid ? s.value : std::numeric_limits<double>::quiet_NaN();
    };
    for (const BoundsInput& in : grid) {
        const BoundsReport r = make_bounds_report(in);
        out << in.k << ',' << in.d << ',' << in.m << ',' << in.n << ','
            << fmt9(in.mu) << ',' << fmt9(in.mu_B) << ','
            << fmt9(in.sigma) << ',' << csv_field(in.p_target) << ','
            << csv_field(r.lambda_block.lo) << ','
            << csv_field(r.lambda_block.hi) << ','
            << csv_field(r.lambda_homogeneous.lo) << ','
            << csv_field(r.lambda_homogeneous.hi) << ','
            << csv_field(r.lambda_scalar.lo) << ','
            << csv_field(r.lambda_scalar.hi) << ','
            << csv_field(r.proj.valid
                             ? r.proj.b_factor
                             : std::numeric_limits<double>::quiet_NaN())
            << ','
            << csv_field(r.proj.valid
                             ? r.proj.lower
                             : std::numeric_limits<double>::quiet_NaN())
            << ',' << csv_field(val(r.proj_bols)) << ','
            << csv_field(val(r.proj_ols)) << ','
            << csv_field(r.sparsity_C) << ','
            << csv_field(val(r.gamma_bound)) << ','
            << csv_field(val(r.threshold_full)) << ','
            << csv_field(val(r.threshold_block)) << ','
            << csv_field(val(r.eta)) << ',' << csv_field(r.xi_energy) << ','
            << csv_field(r.xi_correlation) << ','
            << csv_field(val(r.snr_min_energy)) << ','
            << csv_field(db(r.snr_min_energy)) << ','
            << csv_field(val(r.snr_min_correlation)) << ','
            << csv_field(db(r.snr_min_correlation)) << ','
            << csv_field(r.p_energy) << ',' << csv_field(r.p_correlation)
            << '\n';
    }
}

std::vector<BoundsInput> bounds_preset(const std::string& name) {
    std::string t;
    for (char c : name) {
        t += c == '_' ? '-' : static_cast<char>(std::tolower(
                                  static_cast<unsigned char>(c)));
    }
    std::vector<BoundsInput> grid;
    auto mu_steps = [](double lo, double hi, std::size_t count) {
        std::vector<double> v;
        for (std::size_t i = 0; i < count; ++i) {
            v.push_back(lo + (hi - lo) * static_cast<double>(i) /
                                 static_cast<double>(count - 1));
        }
        return v;
    };
    if (t == "fig1a" || t == "lambda-vs-mu") {
        for (double mu : mu_steps(0.01, 0.1, 19)) {
            BoundsInput in;
            in.k = 4;
            in.d = 2;
            in.mu = mu;
            in.mu_B = mu / 2.0;
            grid.push_back(in);
        }
    } else if (t == "fig1b" || t == "lambda-vs-k") {
        for (std::size_t k = 2; k <= 8; ++k) {
            BoundsInput in;
            in.k = k;
            in.d = 2;
            in.mu = 0.05;
            in.mu_B = 0.025;
            grid.push_back(in);
        }
    } else if (t == "fig2" || t == "projection") {
        for (std::size_t k = 2; k <= 6; ++k) {
            for (double mu : mu_steps(0.01, 0.1, 19)) {
                BoundsInput in;
                in.k = k;
                in.d = 2;
                in.mu = mu;
                in.mu_B = mu / 2.0;
                grid.push_back(in);
            }
        }
    } else if (t == "fig3" || t == "sparsity") {
        for (std::size_t d : {std::size_t{2}, std::size_t{4}}) {
            for (double mu : mu_steps(0.02, 0.1, 50)) {
                BoundsInput in;
                in.k = 0;
                in.d = d;
                in.mu = mu;
                in.mu_B = mu / static_cast<double>(d);
                grid.push_back(in);
            }
        }
    } else if (t == "fig4" || t == "min-snr") {
        const std::pair<std::size_t, double> cases[] = {{1024, 0.135},
                                                        {2048, 0.109}};
        for (const auto& [m, mu] : cases) {
            for (int i = 0; i <= 9; ++i) {
                BoundsInput in;
                in.k = 2;
                in.d = 2;
                in.m = m;
                in.n = 8192;
                in.mu = mu;
                in.mu_B = mu / 2.0;
                in.p_target = 0.90 + 0.01 * i;
                grid.push_back(in);
            }
        }
    } else {
        throw std::invalid_argument("unknown bounds preset '" + name + "'");
    }
    return grid;
}

OccupancyReport occupancy_from_recovery(const RecoveryResult& result,
                                        std::size_t num_blocks) {
    OccupancyReport rep;
    if (num_blocks == 0 || result.x_hat.size() % num_blocks != 0) {
        throw std::invalid_argument(
            "occupancy_from_recovery: block count must divide the estimate "
            "length");
    }
    const std::size_t d = result.x_hat.size() / num_blocks;
    double x2 = 0.0;
    for (double v : result.x_hat) x2 += v * v;
    const double threshold = 1e-8 * std::sqrt(x2);

    rep.occupied.assign(num_blocks, false);
    for (std::size_t b : result.selected_blocks) {
        if (b >= num_blocks) {
            throw std::invalid_argument(
                "occupancy_from_recovery: selected block out of range");
        }
        double e = 0.0;
        for (std::size_t c = 0; c < d; ++c) {
            const double v = result.x_hat[b * d + c];
            e += v * v;
        }
        if (std::sqrt(e) > threshold) rep.occupied[b] = true;
    }
    for (std::size_t b = 0; b < num_blocks; ++b) {
        if (!rep.occupied[b]) rep.free_blocks.push_back(b);
    }
    return rep;
}

}  // namespace bbols
