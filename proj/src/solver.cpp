#include "qrmc/solver.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

#include "qrmc/errors.hpp"
#include "qrmc/parallel.hpp"

namespace qrmc {

std::string to_string(MemoryMode mode) {
    return mode == MemoryMode::StoreCloud ? "store_cloud" : "recompute_from_seeds";
}

MemoryMode memory_mode_from_string(const std::string& s) {
    if (s == "store_cloud" || s == "store") return MemoryMode::StoreCloud;
    if (s == "recompute_from_seeds" || s == "recompute")
        return MemoryMode::RecomputeFromSeeds;
    throw std::invalid_argument("unknown memory mode: " + s);
}

void RunConfig::validate(const ProblemSpec& spec) const {
    if (steps < 1) throw std::invalid_argument("RunConfig: steps must be >= 1");
    if (paths < 1) throw std::invalid_argument("RunConfig: paths must be >= 1");
    if (!(damping >= 0.0) || !std::isfinite(damping))
        throw std::invalid_argument("RunConfig: damping must be finite and >= 0");
    if (workers < 0) throw std::invalid_argument("RunConfig: workers must be >= 0");
    if (paths >= (std::int64_t{1} << stream_ids::kStepShift))
        throw std::invalid_argument("RunConfig: paths exceeds the stream-id layout");
    if (steps >= (1 << 22))
        throw std::invalid_argument("RunConfig: steps exceeds the stream-id layout");
    if (gamma.dim() != spec.dim || measure.dim() != spec.dim)
        throw std::invalid_argument("RunConfig: gamma/measure dims must equal spec.dim");
}

double truncate_soft(double value, double bound) {
    if (!(bound >= 0.0))
        throw std::invalid_argument("truncate_soft: bound must be >= 0");
    return std::min(std::max(value, -bound), bound);
}

double damping_weight(std::span<const double> x, double q) {
    if (q == 0.0) return 1.0;
    double n2 = 0.0;
    for (double v : x) n2 += v * v;
    return std::pow(1.0 + n2, q / 2.0);
}

namespace {

// Weighted multistep response along points[start..N]; the shared core of the
// public response() and of backward_solve's phase 1.
double response_impl(std::span<const double> points, int start,
                     const CoefficientTable& future, const ProblemSpec& spec,
                     double dt, SeriesEvaluator& evaluator,
                     TruncationStats& stats) {
    const int d = spec.dim;
    const int n_steps = future.steps;
    const double q = future.damping;
    const auto point = [&](int j) {
        return points.subspan(static_cast<std::size_t>(j - start) * d,
                              static_cast<std::size_t>(d));
    };

    double driver_sum = 0.0;
    for (int j = start; j < n_steps; ++j) {
        const auto x_next = point(j + 1);
        double y_next;
        if (j + 1 == n_steps) {
            // exact initialization: damped terminal times the weight is g itself
            y_next = spec.terminal(x_next);
        } else {
            if (!future.has_step(j + 1))
                throw std::logic_error("response: coefficients for step " +
                                       std::to_string(j + 1) + " not computed yet");
            y_next = evaluator.eval(future.coefficients[static_cast<std::size_t>(j + 1)],
                                    x_next) *
                     damping_weight(x_next, q);
        }
        const double clipped = truncate_soft(y_next, lstar_bound(x_next, spec));
        ++stats.applications;
        if (clipped != y_next) ++stats.clipped;
        driver_sum += spec.driver(j * dt, point(j), clipped);
    }
    const double terminal = spec.terminal(point(n_steps));
    return (terminal + dt * driver_sum) / damping_weight(point(start), q);
}

}  // namespace

double response(const PathBundle& path, const CoefficientTable& future,
                const ProblemSpec& spec, TruncationStats* stats) {
    if (path.dim != spec.dim)
        throw std::invalid_argument("response: path dimension mismatch");
    if (path.last_step() != future.steps)
        throw std::invalid_argument("response: path must reach the terminal step");
    SeriesEvaluator evaluator(future.measure, future.gamma);
    TruncationStats local;
    const double value = response_impl(path.points, path.start, future, spec,
                                       future.dt(), evaluator, local);
    if (stats) {
        stats->applications += local.applications;
        stats->clipped += local.clipped;
    }
    return value;
}

CoefficientTable backward_solve(const ProblemSpec& spec, const RunConfig& config) {
    spec.validate();
    config.validate(spec);

    const int n_steps = config.steps;
    const std::size_t n_paths = static_cast<std::size_t>(config.paths);
    const int d = spec.dim;
    const double dt = spec.horizon / n_steps;
    const std::size_t basis_size = config.gamma.size();
    const bool store_cloud = config.memory_mode == MemoryMode::StoreCloud;

    CoefficientTable table{.steps = n_steps,
                           .paths = config.paths,
                           .damping = config.damping,
                           .seed = config.seed,
                           .horizon = spec.horizon,
                           .measure = config.measure,
                           .gamma = config.gamma,
                           .coefficients = {},
                           .truncation = {},
                           .step_wall_seconds = {}};
    table.coefficients.resize(static_cast<std::size_t>(n_steps));
    table.step_wall_seconds.assign(static_cast<std::size_t>(n_steps), 0.0);

    std::vector<double> responses(n_paths);
    std::vector<double> cloud(store_cloud ? n_paths * d : 0);
    std::vector<double> lane_acc(LaneLayout::kLanes * basis_size);
    std::vector<TruncationStats> lane_stats(LaneLayout::kLanes);
    const LaneLayout layout{n_paths};

    const std::size_t path_len = static_cast<std::size_t>(n_steps + 1) * d;
    const std::size_t scratch_n =
        static_cast<std::size_t>(std::max(spec.dim, spec.brownian_dim));

    for (int i = n_steps - 1; i >= 0; --i) {
        const auto t_begin = std::chrono::steady_clock::now();

        // phase 1: simulate the cloud, compute weighted responses
        run_lanes(LaneLayout::kLanes, config.workers, [&](std::size_t lane) {
            SeriesEvaluator evaluator(config.measure, config.gamma);
            std::vector<double> path((static_cast<std::size_t>(n_steps - i) + 1) * d);
            std::vector<double> dw(scratch_n), diff(scratch_n);
            TruncationStats& stats = lane_stats[lane];
            layout.for_lane(lane, [&](std::size_t first, std::size_t last) {
                for (std::size_t m = first; m < last; ++m) {
                    RngStream stream(config.seed, stream_ids::training(i, m));
                    std::span<double> state(path.data(), static_cast<std::size_t>(d));
                    config.measure.sample(stream, state);
                    for (int j = i; j < n_steps; ++j) {
                        auto next = std::span<double>(
                            path.data() + static_cast<std::size_t>(j + 1 - i) * d,
                            static_cast<std::size_t>(d));
                        std::copy(state.begin(), state.end(), next.begin());
                        euler_step(next, j * dt, dt, spec, stream, dw, diff, j);
                        state = next;
                    }
                    const double value =
                        response_impl(path, i, table, spec, dt, evaluator, stats);
                    if (!std::isfinite(value))
                        throw NumericError("backward_solve: non-finite response at step " +
                                           std::to_string(i) + ", path " +
                                           std::to_string(m));
                    responses[m] = value;
                    if (store_cloud)
                        std::copy_n(path.data(), d, cloud.data() + m * d);
                }
            });
        });

        // phase 2: accumulate response * phi_k over the cloud, fixed lane order
        std::fill(lane_acc.begin(), lane_acc.end(), 0.0);
        run_lanes(LaneLayout::kLanes, config.workers, [&](std::size_t lane) {
            SeriesEvaluator evaluator(config.measure, config.gamma);
            std::vector<double> regen(static_cast<std::size_t>(d));
            double* acc = lane_acc.data() + lane * basis_size;
            layout.for_lane(lane, [&](std::size_t first, std::size_t last) {
                for (std::size_t m = first; m < last; ++m) {
                    std::span<const double> x0;
                    if (store_cloud) {
                        x0 = {cloud.data() + m * d, static_cast<std::size_t>(d)};
                    } else {
                        RngStream stream(config.seed, stream_ids::training(i, m));
                        config.measure.sample(stream, regen);
                        x0 = regen;
                    }
                    evaluator.load_point(x0);
                    const double s_m = responses[m];
                    for (std::size_t k = 0; k < basis_size; ++k)
                        acc[k] += s_m * evaluator.basis_value(k);
                }
            });
        });

        std::vector<double> coeffs(basis_size, 0.0);
        for (std::size_t lane = 0; lane < LaneLayout::kLanes; ++lane) {
            const double* acc = lane_acc.data() + lane * basis_size;
            for (std::size_t k = 0; k < basis_size; ++k) coeffs[k] += acc[k];
        }
        const double inv_m = 1.0 / static_cast<double>(config.paths);
        for (std::size_t k = 0; k < basis_size; ++k) {
            coeffs[k] *= inv_m;
            if (!std::isfinite(coeffs[k]))
                throw NumericError("backward_solve: non-finite coefficient at step " +
                                   std::to_string(i) + ", index " + std::to_string(k));
        }
        table.coefficients[static_cast<std::size_t>(i)] = std::move(coeffs);

        table.step_wall_seconds[static_cast<std::size_t>(i)] =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t_begin)
                .count();
    }

    for (const auto& stats : lane_stats) {
        table.truncation.applications += stats.applications;
        table.truncation.clipped += stats.clipped;
    }
    return table;
}

double evaluate_solution(const CoefficientTable& table, int i,
                         std::span<const double> x) {
    if (i < 0 || i >= table.steps)
        throw std::out_of_range("evaluate_solution: step index out of range");
    if (!table.has_step(i))
        throw std::logic_error("evaluate_solution: step not computed");
    SeriesEvaluator evaluator(table.measure, table.gamma);
    return evaluator.eval(table.coefficients[static_cast<std::size_t>(i)], x) *
           damping_weight(x, table.damping);
}

std::size_t solve_memory_estimate(int dim, int steps, std::int64_t paths,
                                  std::size_t basis_size, MemoryMode mode) {
    const std::size_t m = static_cast<std::size_t>(paths);
    std::size_t bytes = m * sizeof(double);  // responses
    if (mode == MemoryMode::StoreCloud) bytes += m * dim * sizeof(double);
    bytes += LaneLayout::kLanes * basis_size * sizeof(double);
    bytes += static_cast<std::size_t>(steps) * basis_size * sizeof(double);
    return bytes;
}

}  // namespace qrmc
