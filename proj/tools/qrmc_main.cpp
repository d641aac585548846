// qrmc — quasi-regression Monte Carlo solver for decoupled Markovian BSDEs
// and the associated semi-linear parabolic PDEs.
//
// Subcommands:
//   solve       run the backward solver on the sinusoidal benchmark family
//               and write a coefficient table artifact
//   bench       solve (or load a table) and evaluate MSE metrics against the
//               closed-form solution; optional repeated runs with a
//               confidence interval of the value at the origin
//   mindex-card print the cardinality of a multi-index set
//   dist-check  verify the sampling measure's CDF/inverse-CDF round trip
//
// Exit codes: 0 success, 1 usage, 2 numeric/simulation failure, 3 I/O failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qrmc/benchmark.hpp"
#include "qrmc/errors.hpp"
#include "qrmc/multi_index.hpp"
#include "qrmc/parallel.hpp"
#include "qrmc/solver.hpp"
#include "qrmc/table_io.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNumeric = 2;
constexpr int kExitIo = 3;

struct SolveOptions {
    int dim = 1;
    double mu = 2.0;
    std::vector<double> center;
    double damping = 0.0;
    int steps = 1;
    std::string kind = "full";
    int degree = 0;
    std::vector<int> degrees;  // per-coordinate, full only
    std::int64_t paths = 1;
    std::uint64_t seed = 0;
    int workers = 0;
    std::string memory_mode = "store";
    double kappa = 0.6;
    double lambda = 0.0;  // 0 = 1/sqrt(dim)
    double horizon = 1.0;
};

void add_solve_flags(CLI::App* cmd, SolveOptions& opt) {
    cmd->add_option("--dim", opt.dim, "State dimension d")
        ->required()
        ->check(CLI::PositiveNumber);
    cmd->add_option("--mu", opt.mu, "Student shape parameter of the sampling measure")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--center", opt.center,
                    "Sampling measure center (d values, default origin)");
    cmd->add_option("--q", opt.damping, "Damping exponent q >= 0")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    cmd->add_option("--steps", opt.steps, "Time steps N (grid spacing horizon/N)")
        ->required()
        ->check(CLI::PositiveNumber);
    cmd->add_option("--kind", opt.kind, "Index set kind")
        ->check(CLI::IsMember({"full", "total", "hyperbolic"}))
        ->capture_default_str();
    cmd->add_option("--deg", opt.degree,
                    "Degree parameter (K for full, DEG for total/hyperbolic)")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--degrees", opt.degrees,
                    "Per-coordinate degrees K_1..K_d (full sets only)");
    cmd->add_option("--paths", opt.paths, "Monte-Carlo paths per step M")
        ->required()
        ->check(CLI::PositiveNumber);
    cmd->add_option("--seed", opt.seed, "Base seed")->capture_default_str();
    cmd->add_option("--threads,--workers", opt.workers,
                    "Worker threads (0 = hardware; does not affect results)")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    cmd->add_option("--memory-mode", opt.memory_mode,
                    "Cloud handling between the two phases of a step")
        ->check(CLI::IsMember({"store", "recompute"}))
        ->capture_default_str();
    cmd->add_option("--kappa", opt.kappa, "Benchmark offset kappa")
        ->capture_default_str();
    cmd->add_option("--lambda", opt.lambda,
                    "Benchmark frequency lambda (0 = 1/sqrt(d))")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    cmd->add_option("--horizon", opt.horizon, "Terminal time T")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
}

qrmc::MultiIndexSet build_gamma(const SolveOptions& opt) {
    const auto kind = qrmc::index_set_kind_from_string(opt.kind);
    if (!opt.degrees.empty()) {
        if (kind != qrmc::IndexSetKind::Full)
            throw CLI::ValidationError(
                "--degrees",
                "per-coordinate degrees are only valid with --kind full");
        if (opt.degrees.size() != static_cast<std::size_t>(opt.dim))
            throw CLI::ValidationError("--degrees", "need exactly d values");
        return qrmc::MultiIndexSet::full(opt.degrees);
    }
    return qrmc::MultiIndexSet::build(opt.dim, kind, opt.degree);
}

qrmc::RunConfig build_run_config(const SolveOptions& opt) {
    return qrmc::RunConfig{.steps = opt.steps,
                           .paths = opt.paths,
                           .damping = opt.damping,
                           .seed = opt.seed,
                           .workers = opt.workers,
                           .memory_mode = qrmc::memory_mode_from_string(opt.memory_mode),
                           .gamma = build_gamma(opt),
                           .measure = qrmc::SamplingMeasure(opt.mu, opt.dim,
                                                            opt.center)};
}

qrmc::SinBenchmark build_benchmark(const SolveOptions& opt) {
    return qrmc::SinBenchmark{.dim = opt.dim,
                              .kappa = opt.kappa,
                              .lambda = opt.lambda,
                              .horizon = opt.horizon};
}

void print_summary(const qrmc::RunConfig& config) {
    const double christoffel = qrmc::christoffel_number(config.gamma);
    std::printf("basis size %zu, christoffel %.6g, statistical indicator "
                "christoffel/M = %.6g\n",
                config.gamma.size(), christoffel,
                christoffel / static_cast<double>(config.paths));
}

int run_solve(const SolveOptions& opt, bool dry_run, const std::string& out_path) {
    const auto config = build_run_config(opt);
    print_summary(config);
    if (dry_run) {
        const std::size_t bytes = qrmc::solve_memory_estimate(
            opt.dim, opt.steps, opt.paths, config.gamma.size(), config.memory_mode);
        std::printf("dry run: memory estimate %.1f MiB, no simulation performed\n",
                    static_cast<double>(bytes) / (1024.0 * 1024.0));
        return kExitOk;
    }
    const auto problem = qrmc::make_problem(build_benchmark(opt));
    const auto table = qrmc::backward_solve(problem, config);
    if (!out_path.empty()) {
        qrmc::save_table_json(table, out_path);
        qrmc::save_run_meta(table, config.memory_mode,
                            qrmc::resolve_workers(config.workers),
                            out_path + ".meta.json");
        std::printf("wrote %s (+ .meta.json)\n", out_path.c_str());
    }
    std::vector<double> origin(static_cast<std::size_t>(opt.dim), 0.0);
    std::printf("value at origin, t=0: %.6f\n",
                qrmc::evaluate_solution(table, 0, origin));
    return kExitOk;
}

int run_bench(const SolveOptions& opt, int runs, std::uint64_t eval_seed,
              int eval_points, const std::string& table_path,
              const std::string& out_path, const std::string& format) {
    const auto bench = build_benchmark(opt);
    std::vector<qrmc::MetricReport> reports;
    std::vector<double> origin_values;
    const std::vector<double> origin(static_cast<std::size_t>(opt.dim), 0.0);

    if (!table_path.empty()) {
        const auto table = qrmc::load_table_json(table_path);
        auto report = qrmc::mse_metrics(table, bench, eval_seed, eval_points,
                                        opt.workers);
        double wall = 0.0;
        for (double s : table.step_wall_seconds) wall += s;
        report.wall_seconds = wall;
        reports.push_back(std::move(report));
        origin_values.push_back(qrmc::evaluate_solution(table, 0, origin));
    } else {
        auto config = build_run_config(opt);
        print_summary(config);
        const auto problem = qrmc::make_problem(bench);
        for (int r = 0; r < runs; ++r) {
            config.seed = opt.seed + static_cast<std::uint64_t>(r);
            const auto start = std::chrono::steady_clock::now();
            const auto table = qrmc::backward_solve(problem, config);
            const double wall =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                    .count();
            auto report =
                qrmc::mse_metrics(table, bench, eval_seed, eval_points, opt.workers);
            report.wall_seconds = wall;
            origin_values.push_back(qrmc::evaluate_solution(table, 0, origin));
            std::printf("run %d (seed %llu): mse_max %.4f, mse_av %.4f, "
                        "y(0) %.5f, %.2fs\n",
                        r, static_cast<unsigned long long>(config.seed),
                        report.mse_max, report.mse_av, origin_values.back(), wall);
            reports.push_back(std::move(report));
        }
    }

    if (origin_values.size() >= 2) {
        const auto [lo, hi] = qrmc::confidence_interval(origin_values, 0.99);
        std::printf("99%% CI of value at origin over %zu runs: [%.5f, %.5f]\n",
                    origin_values.size(), lo, hi);
    }

    if (!out_path.empty()) {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw qrmc::IoError("cannot open for writing: " + out_path);
        if (format == "csv") {
            out << qrmc::metric_csv_header() << '\n';
            for (const auto& r : reports) out << qrmc::metric_csv_row(r) << '\n';
        } else {
            out << "[\n";
            for (std::size_t i = 0; i < reports.size(); ++i)
                out << qrmc::metric_to_json(reports[i])
                    << (i + 1 < reports.size() ? ",\n" : "\n");
            out << "]\n";
        }
        if (!out) throw qrmc::IoError("write failed: " + out_path);
        std::printf("wrote %s\n", out_path.c_str());
    }
    return kExitOk;
}

int run_dist_check(double mu, int grid_points) {
    const qrmc::SamplingMeasure measure(mu, 1);
    double worst = 0.0;
    for (int i = 1; i < grid_points; ++i) {
        const double u = static_cast<double>(i) / grid_points;
        worst = std::max(worst, std::abs(measure.cdf(measure.inv_cdf(u)) - u));
    }
    for (double u : {1e-6, 1e-9, 1.0 - 1e-6, 1.0 - 1e-9})
        worst = std::max(worst, std::abs(measure.cdf(measure.inv_cdf(u)) - u));

    const double u_tail = 1e-6;
    const double asymptote =
        -std::pow(measure.normalization() / mu, 1.0 / mu) * std::pow(u_tail, -1.0 / mu);
    const double ratio = measure.inv_cdf(u_tail) / asymptote;

    const bool closed_form = (mu == 1.0 || mu == 2.0);
    const double tolerance = closed_form ? 1e-12 : 1e-8;
    std::printf("mu %.3g: max round-trip error %.3e (tolerance %.0e), "
                "tail ratio at u=1e-6: %.6f\n",
                mu, worst, tolerance, ratio);
    const bool ok = worst <= tolerance && ratio >= 0.9 && ratio <= 1.1;
    std::printf("%s\n", ok ? "OK" : "FAILED");
    return ok ? kExitOk : kExitNumeric;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quasi-regression Monte Carlo solver for decoupled Markovian "
                 "BSDEs / semi-linear parabolic PDEs"};
    app.require_subcommand(1);
    app.set_config("--config", "", "Read option defaults from an INI/TOML file");

    SolveOptions solve_opt;
    bool dry_run = false;
    std::string solve_out;
    auto* solve_cmd = app.add_subcommand(
        "solve", "Backward-solve the benchmark problem, write coefficients");
    add_solve_flags(solve_cmd, solve_opt);
    solve_cmd->add_flag("--dry-run", dry_run,
                        "Print basis size, christoffel number and memory "
                        "estimate, then exit");
    solve_cmd->add_option("--out", solve_out, "Coefficient artifact path (JSON)");

    SolveOptions bench_opt;
    int bench_runs = 1;
    std::uint64_t eval_seed = 0x9e3779b97f4a7c15ull;
    int eval_points = 1000;
    std::string bench_table, bench_out, bench_format = "json";
    auto* bench_cmd = app.add_subcommand(
        "bench", "Solve and score against the closed-form solution");
    add_solve_flags(bench_cmd, bench_opt);
    bench_cmd->add_option("--runs", bench_runs, "Independent runs (seed+r)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    bench_cmd->add_option("--eval-seed", eval_seed, "Seed for evaluation points")
        ->capture_default_str();
    bench_cmd->add_option("--eval-points", eval_points, "Evaluation points per step")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    bench_cmd->add_option("--table", bench_table,
                          "Score an existing coefficient artifact instead of solving");
    bench_cmd->add_option("--out", bench_out, "Report path");
    bench_cmd->add_option("--format", bench_format, "Report format")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();

    int card_dim = 1, card_deg = 0;
    std::string card_kind = "total";
    auto* card_cmd =
        app.add_subcommand("mindex-card", "Print a multi-index set cardinality");
    card_cmd->add_option("--dim", card_dim, "Dimension")->required()
        ->check(CLI::PositiveNumber);
    card_cmd->add_option("--kind", card_kind, "Set kind")
        ->check(CLI::IsMember({"full", "total", "hyperbolic"}))
        ->capture_default_str();
    card_cmd->add_option("--deg", card_deg, "Degree parameter")->required()
        ->check(CLI::NonNegativeNumber);

    double check_mu = 2.0;
    int check_grid = 100000;
    auto* dist_cmd = app.add_subcommand(
        "dist-check", "Round-trip and tail checks for the sampling measure");
    dist_cmd->add_option("--mu", check_mu, "Student shape parameter")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    dist_cmd->add_option("--grid", check_grid, "Round-trip grid resolution")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (solve_cmd->parsed()) return run_solve(solve_opt, dry_run, solve_out);
        if (bench_cmd->parsed())
            return run_bench(bench_opt, bench_runs, eval_seed, eval_points,
                             bench_table, bench_out, bench_format);
        if (card_cmd->parsed()) {
            const auto kind = qrmc::index_set_kind_from_string(card_kind);
            std::uint64_t n = 0;
            if (kind == qrmc::IndexSetKind::Total)
                n = qrmc::cardinality_total(card_dim, card_deg);
            else if (kind == qrmc::IndexSetKind::Hyperbolic)
                n = qrmc::cardinality_hyperbolic(card_dim, card_deg);
            else
                n = qrmc::MultiIndexSet::build(card_dim, kind, card_deg).size();
            std::printf("%llu\n", static_cast<unsigned long long>(n));
            return kExitOk;
        }
        if (dist_cmd->parsed()) return run_dist_check(check_mu, check_grid);
    } catch (const qrmc::IoError& e) {
        std::fprintf(stderr, "I/O error: %s\n", e.what());
        return kExitIo;
    } catch (const qrmc::NumericError& e) {
        std::fprintf(stderr, "numeric error: %s\n", e.what());
        return kExitNumeric;
    } catch (const qrmc::SimulationError& e) {
        std::fprintf(stderr, "simulation error: %s\n", e.what());
        return kExitNumeric;
    } catch (const qrmc::CapacityError& e) {
        std::fprintf(stderr, "capacity error: %s\n", e.what());
        return kExitUsage;
    } catch (const std::domain_error& e) {
        std::fprintf(stderr, "numeric error: %s\n", e.what());
        return kExitNumeric;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    }
    return kExitUsage;
}
