#include "qrmc/benchmark.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "qrmc/parallel.hpp"
#include "qrmc/rng.hpp"

namespace qrmc {

double SinBenchmark::lambda_value() const {
    return lambda > 0.0 ? lambda : 1.0 / std::sqrt(static_cast<double>(dim));
}

double exact_solution(double t, std::span<const double> x,
                      const SinBenchmark& bench) {
    const double lam = bench.lambda_value();
    double s = 0.0;
    for (double v : x) s += v;
    return 1.0 + bench.kappa +
           std::sin(lam * s) *
               std::exp(lam * lam * bench.dim * (t - bench.horizon) / 2.0);
}

ProblemSpec make_problem(const SinBenchmark& bench) {
    if (bench.dim < 1) throw std::invalid_argument("SinBenchmark: dim must be >= 1");
    if (!(bench.horizon > 0.0))
        throw std::invalid_argument("SinBenchmark: horizon must be positive");

    const double lam = bench.lambda_value();
    const double kappa = bench.kappa;
    const int d = bench.dim;
    const double horizon = bench.horizon;

    ProblemSpec spec;
    spec.dim = d;
    spec.brownian_dim = d;
    spec.horizon = horizon;
    spec.drift = nullptr;           // pure Brownian forward
    spec.diffusion_apply = nullptr; // identity
    spec.terminal = [lam, kappa](std::span<const double> x) {
        double s = 0.0;
        for (double v : x) s += v;
        return 1.0 + kappa + std::sin(lam * s);
    };
    spec.driver = [lam, kappa, d, horizon](double t, std::span<const double> x,
                                           double y) {
        double s = 0.0;
        for (double v : x) s += v;
        const double z = y - kappa - 1.0 -
                         std::sin(lam * s) *
                             std::exp(lam * lam * d * (t - horizon) / 2.0);
        return std::min(1.0, z * z);
    };
    spec.growth_g = 2.0 + kappa;
    spec.growth_exp_g = 0.0;
    spec.growth_f = 1.0;
    spec.growth_exp_f = 0.0;
    spec.lipschitz_f = 2.0;
    spec.moment_ratio = 1.0;
    return spec;
}

std::pair<double, double> metrics_from_squared_errors(
    const std::vector<std::vector<double>>& rows, int eval_points) {
    if (rows.empty() || eval_points < 1)
        throw std::invalid_argument("metrics_from_squared_errors: empty input");
    double max_sum = 0.0;
    double total = 0.0;
    for (const auto& row : rows) {
        double sum = 0.0;
        for (double e2 : row) sum += e2;
        max_sum = std::max(max_sum, sum);
        total += sum;
    }
    const double n = static_cast<double>(eval_points);
    const double steps = static_cast<double>(rows.size());
    return {std::log(max_sum / n), std::log(total / (steps * n))};
}

MetricReport mse_metrics(const CoefficientTable& table, const SinBenchmark& bench,
                         std::uint64_t eval_seed, int eval_points, int workers) {
    if (eval_points < 1)
        throw std::invalid_argument("mse_metrics: eval_points must be >= 1");
    if (table.measure.dim() != bench.dim)
        throw std::invalid_argument("mse_metrics: table/benchmark dims differ");
    for (int i = 0; i < table.steps; ++i)
        if (!table.has_step(i))
            throw std::logic_error("mse_metrics: table is incomplete at step " +
                                   std::to_string(i));

    const int n_steps = table.steps;
    const int d = bench.dim;
    const double dt = table.dt();
    const double q = table.damping;

    std::vector<std::vector<double>> damped(static_cast<std::size_t>(n_steps));
    std::vector<std::vector<double>> undamped(static_cast<std::size_t>(n_steps));

    run_lanes(static_cast<std::size_t>(n_steps), workers, [&](std::size_t step) {
        const int i = static_cast<int>(step);
        SeriesEvaluator evaluator(table.measure, table.gamma);
        const auto& coeffs = table.coefficients[step];
        std::vector<double> point(static_cast<std::size_t>(d));
        auto& row = damped[step];
        auto& row_u = undamped[step];
        row.resize(static_cast<std::size_t>(eval_points));
        row_u.resize(static_cast<std::size_t>(eval_points));
        for (int m = 0; m < eval_points; ++m) {
            RngStream stream(eval_seed,
                             stream_ids::evaluation(i, static_cast<std::uint64_t>(m)));
            table.measure.sample(stream, point);
            const double weight = damping_weight(point, q);
            const double approx = evaluator.eval(coeffs, point);
            const double truth = exact_solution(i * dt, point, bench) / weight;
            const double e = approx - truth;
            row[static_cast<std::size_t>(m)] = e * e;
            row_u[static_cast<std::size_t>(m)] = e * e * weight * weight;
        }
    });

    MetricReport report;
    std::tie(report.mse_max, report.mse_av) =
        metrics_from_squared_errors(damped, eval_points);
    std::tie(report.mse_max_undamped, report.mse_av_undamped) =
        metrics_from_squared_errors(undamped, eval_points);
    report.eval_points_per_step = eval_points;
    report.step_squared_error.resize(static_cast<std::size_t>(n_steps));
    for (int i = 0; i < n_steps; ++i) {
        double sum = 0.0;
        for (double e2 : damped[static_cast<std::size_t>(i)]) sum += e2;
        report.step_squared_error[static_cast<std::size_t>(i)] = sum;
    }

    report.dim = d;
    report.dt = dt;
    report.damping = q;
    report.index_kind = to_string(table.gamma.kind());
    report.degree = table.gamma.degrees().empty() ? 0 : table.gamma.degrees()[0];
    report.basis_size = table.gamma.size();
    report.paths = table.paths;
    report.seed = table.seed;
    report.stat_error_indicator =
        christoffel_number(table.gamma) / static_cast<double>(table.paths);
    return report;
}

std::pair<double, double> confidence_interval(std::span<const double> values,
                                              double level) {
    if (values.size() < 2)
        throw std::invalid_argument("confidence_interval: need at least 2 values");
    if (!(level > 0.0 && level < 1.0))
        throw std::invalid_argument("confidence_interval: level must be in (0,1)");
    const double n = static_cast<double>(values.size());
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= n;
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / (n - 1.0));
    const double z = normal_quantile((1.0 + level) / 2.0);
    const double half = z * sd / std::sqrt(n);
    return {mean - half, mean + half};
}

namespace {

nlohmann::ordered_json finite_or_string(double v) {
    if (std::isfinite(v)) return v;
    return v > 0 ? "inf" : "-inf";
}

std::string format_double(double v) {
    if (!std::isfinite(v)) return v > 0 ? "inf" : "-inf";
    std::ostringstream os;
    os.precision(10);
    os << v;
    return os.str();
}

}  // namespace

std::string metric_csv_header() {
    return "d,delta,q,kind,degree,basis_size,paths,seed,mse_max,mse_av,wall_seconds";
}

std::string metric_csv_row(const MetricReport& r) {
    std::ostringstream os;
    os << r.dim << ',' << format_double(r.dt) << ',' << format_double(r.damping)
       << ',' << r.index_kind << ',' << r.degree << ',' << r.basis_size << ','
       << r.paths << ',' << r.seed << ',' << format_double(r.mse_max) << ','
       << format_double(r.mse_av) << ',' << format_double(r.wall_seconds);
    return os.str();
}

std::string metric_to_json(const MetricReport& r) {
    nlohmann::ordered_json doc{
        {"schema", "qrmc.metrics.v1"},
        {"mse_max", finite_or_string(r.mse_max)},
        {"mse_av", finite_or_string(r.mse_av)},
        {"mse_max_undamped", finite_or_string(r.mse_max_undamped)},
        {"mse_av_undamped", finite_or_string(r.mse_av_undamped)},
        {"eval_points_per_step", r.eval_points_per_step},
        {"step_squared_error", r.step_squared_error},
        {"dim", r.dim},
        {"delta", r.dt},
        {"damping", r.damping},
        {"kind", r.index_kind},
        {"degree", r.degree},
        {"basis_size", r.basis_size},
        {"paths", r.paths},
        {"seed", r.seed},
        {"stat_error_indicator", r.stat_error_indicator},
        {"wall_seconds", r.wall_seconds}};
    return doc.dump(2);
}

}  // namespace qrmc
