#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qrmc/sde.hpp"
#include "qrmc/solver.hpp"

namespace qrmc {

/// Sinusoidal semi-linear benchmark family on pure Brownian forward
/// dynamics, with the closed-form solution
///   u(t, x) = 1 + kappa + sin(lambda * sum_l x_l) * exp(lambda^2 d (t-T)/2)
/// and a driver that vanishes identically along the exact solution.
struct SinBenchmark {
    int dim = 1;
    double kappa = 0.6;
    double lambda = 0.0;  // 0 selects the default 1/sqrt(dim)
    double horizon = 1.0;

    double lambda_value() const;
};

double exact_solution(double t, std::span<const double> x, const SinBenchmark& bench);

/// Problem data for the family: b = 0, sigma = identity,
/// g(x) = 1 + kappa + sin(lambda sum x_l),
/// f(t,x,y) = min(1, [y - kappa - 1 - sin(lambda sum x_l) e^{lambda^2 d (t-T)/2}]^2).
/// Constants: eta_g = eta_f = 0, C_g = 2 + kappa, C_f = 1, L_f = 2
/// (|d/dy min(1, z^2)| = 2|z| 1_{z^2<1} <= 2), moment ratio 1.
ProblemSpec make_problem(const SinBenchmark& bench);

/// Mean-squared-error summary of a trained table against the closed-form
/// solution, on log scale, in the damped comparison scale (both sides
/// divided by the weight); undamped values are carried for diagnostics.
struct MetricReport {
    double mse_max = 0.0;
    double mse_av = 0.0;
    double mse_max_undamped = 0.0;
    double mse_av_undamped = 0.0;
    int eval_points_per_step = 0;
    std::vector<double> step_squared_error;  // damped per-step sums

    // run description (CSV row fields)
    int dim = 0;
    double dt = 0.0;
    double damping = 0.0;
    std::string index_kind;
    int degree = 0;
    std::size_t basis_size = 0;
    std::int64_t paths = 0;
    std::uint64_t seed = 0;
    double stat_error_indicator = 0.0;  // christoffel / paths
    double wall_seconds = 0.0;
};

/// ln of max / average per-step mean squared error over fresh nu-distributed
/// evaluation points (streams derived from eval_seed, disjoint from training
/// by a reserved id prefix). A zero error sum reports -inf, never traps.
MetricReport mse_metrics(const CoefficientTable& table, const SinBenchmark& bench,
                         std::uint64_t eval_seed, int eval_points = 1000,
                         int workers = 0);

/// Log-scale metrics from per-step rows of squared errors; exposed so the
/// summation step can be tested in isolation.
std::pair<double, double> metrics_from_squared_errors(
    const std::vector<std::vector<double>>& rows, int eval_points);

/// Normal-approximation confidence interval mean +/- z * sd / sqrt(n).
/// Requires at least two values.
std::pair<double, double> confidence_interval(std::span<const double> values,
                                              double level = 0.99);

std::string metric_csv_header();
std::string metric_csv_row(const MetricReport& report);
std::string metric_to_json(const MetricReport& report);

}  // namespace qrmc
