#include "qrmc/sde.hpp"

#include <cmath>
#include <stdexcept>

#include "qrmc/errors.hpp"

namespace qrmc {

void ProblemSpec::validate() const {
    if (dim < 1 || brownian_dim < 1)
        throw std::invalid_argument("ProblemSpec: dimensions must be >= 1");
    if (!(horizon > 0.0))
        throw std::invalid_argument("ProblemSpec: horizon must be positive");
    if (!driver) throw std::invalid_argument("ProblemSpec: driver not set");
    if (!terminal) throw std::invalid_argument("ProblemSpec: terminal not set");
    const double consts[] = {growth_g, growth_exp_g, growth_f, growth_exp_f,
                             lipschitz_f};
    for (double c : consts)
        if (!(c >= 0.0) || !std::isfinite(c))
            throw std::invalid_argument(
                "ProblemSpec: growth/Lipschitz constants must be finite and >= 0");
    if (!(moment_ratio >= 1.0))
        throw std::invalid_argument("ProblemSpec: moment_ratio must be >= 1");
}

double lstar_bound(std::span<const double> x, const ProblemSpec& spec) {
    const double base = spec.moment_ratio * (spec.growth_g + spec.horizon * spec.growth_f) *
                        std::exp(spec.moment_ratio * spec.lipschitz_f * spec.horizon);
    const double eta = std::max(spec.growth_exp_g, spec.growth_exp_f);
    if (eta == 0.0) return base;
    double n2 = 0.0;
    for (double v : x) n2 += v * v;
    return base * std::pow(1.0 + n2, eta / 2.0);
}

void euler_step(std::span<double> x, double t, double dt, const ProblemSpec& spec,
                RngStream& stream, std::span<double> scratch_dw,
                std::span<double> scratch_out, int step_for_errors) {
    const int d = spec.dim;
    const int q = spec.brownian_dim;
    const double sqrt_dt = std::sqrt(dt);
    for (int l = 0; l < q; ++l)
        scratch_dw[static_cast<std::size_t>(l)] = sqrt_dt * stream.next_normal();

    if (spec.diffusion_apply) {
        spec.diffusion_apply(t, x, scratch_dw.first(static_cast<std::size_t>(q)),
                             scratch_out.first(static_cast<std::size_t>(d)));
    } else {
        for (int l = 0; l < d; ++l)
            scratch_out[static_cast<std::size_t>(l)] =
                scratch_dw[static_cast<std::size_t>(l)];
    }
    if (spec.drift) {
        // reuse the dw scratch for the drift vector
        spec.drift(t, x, scratch_dw.first(static_cast<std::size_t>(d)));
        for (int l = 0; l < d; ++l)
            x[static_cast<std::size_t>(l)] +=
                scratch_dw[static_cast<std::size_t>(l)] * dt +
                scratch_out[static_cast<std::size_t>(l)];
    } else {
        for (int l = 0; l < d; ++l)
            x[static_cast<std::size_t>(l)] += scratch_out[static_cast<std::size_t>(l)];
    }

    for (int l = 0; l < d; ++l) {
        const double v = x[static_cast<std::size_t>(l)];
        if (!std::isfinite(v) || std::abs(v) > spec.state_bound)
            throw SimulationError("euler_step: state out of range at step " +
                                      std::to_string(step_for_errors + 1),
                                  step_for_errors + 1);
    }
}

PathBundle euler_path(RngStream& stream, std::span<const double> x0, int start,
                      const ProblemSpec& spec, int steps, double dt) {
    if (start < 0 || start > steps)
        throw std::invalid_argument("euler_path: start must be in [0, steps]");
    if (x0.size() != static_cast<std::size_t>(spec.dim))
        throw std::invalid_argument("euler_path: x0 dimension mismatch");

    PathBundle path;
    path.start = start;
    path.dim = spec.dim;
    path.points.resize(static_cast<std::size_t>(steps - start + 1) * spec.dim);
    std::copy(x0.begin(), x0.end(), path.points.begin());

    const std::size_t scratch_n =
        static_cast<std::size_t>(std::max(spec.dim, spec.brownian_dim));
    std::vector<double> dw(scratch_n), out(scratch_n);
    std::vector<double> state(x0.begin(), x0.end());
    for (int j = start; j < steps; ++j) {
        euler_step(state, j * dt, dt, spec, stream, dw, out, j);
        std::copy(state.begin(), state.end(),
                  path.points.begin() +
                      static_cast<std::size_t>(j + 1 - start) * spec.dim);
    }
    return path;
}

}  // namespace qrmc
