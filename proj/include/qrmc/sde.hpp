#pragma once

#include <functional>
#include <span>
#include <vector>

#include "qrmc/rng.hpp"

namespace qrmc {

/// Decoupled problem data: forward SDE coefficients, scalar driver and
/// terminal condition, plus the growth/Lipschitz constants the a-priori
/// value bound is built from.
///
/// The diffusion is supplied as its action on an increment vector,
/// out = sigma(t, x) * dw, which covers every matrix shape without pinning
/// a storage convention.
struct ProblemSpec {
    int dim = 1;           // state dimension d
    int brownian_dim = 1;  // increment dimension
    double horizon = 1.0;  // T

    std::function<void(double t, std::span<const double> x, std::span<double> out)>
        drift;  // out has size dim; null means zero drift
    std::function<void(double t, std::span<const double> x,
                       std::span<const double> dw, std::span<double> out)>
        diffusion_apply;  // out has size dim; null means identity (copy dw)
    std::function<double(double t, std::span<const double> x, double y)> driver;
    std::function<double(std::span<const double> x)> terminal;

    // assumption constants
    double growth_g = 0.0;      // C_g
    double growth_exp_g = 0.0;  // eta_g
    double growth_f = 0.0;      // C_f
    double growth_exp_f = 0.0;  // eta_f
    double lipschitz_f = 0.0;   // L_f

    /// Moment-ratio constant C_eta >= 1 entering the value bound. There is
    /// no closed form for it (it is a supremum over the scheme's weighted
    /// moments); the default 1 is only adequate when the growth exponents
    /// vanish, as in the bounded benchmark. Set it yourself otherwise.
    double moment_ratio = 1.0;

    /// Simulation sanity clamp: a state with |X| beyond this (or any
    /// non-finite component) aborts with SimulationError.
    double state_bound = 1e15;

    void validate() const;
};

/// A-priori uniform bound on |y_i(x)|:
///   C_eta (C_g + T C_f) exp(C_eta L_f T) (1 + |x|^2)^{(eta_g v eta_f)/2}.
double lstar_bound(std::span<const double> x, const ProblemSpec& spec);

/// Euler path started at step i: points X_i .. X_N, row-major dim-strided.
struct PathBundle {
    int start = 0;  // i
    int dim = 1;
    std::vector<double> points;  // (N - i + 1) * dim

    std::span<const double> point(int j) const noexcept {  // absolute step j
        return {points.data() + static_cast<std::size_t>(j - start) * dim,
                static_cast<std::size_t>(dim)};
    }
    int last_step() const noexcept {
        return start + static_cast<int>(points.size() / dim) - 1;
    }
};

/// One Euler update in place:
///   x <- x + b(t, x) dt + sigma(t, x) dw,   dw = sqrt(dt) * z,
/// drawing brownian_dim standard normals from the stream. Scratch spans must
/// each hold max(dim, brownian_dim) entries.
void euler_step(std::span<double> x, double t, double dt, const ProblemSpec& spec,
                RngStream& stream, std::span<double> scratch_dw,
                std::span<double> scratch_out, int step_for_errors);

/// Full path from x0 at step i to step N with dt = horizon / N.
/// Draw order per step j: brownian_dim normals. SimulationError carries the
/// step index where the state went bad.
PathBundle euler_path(RngStream& stream, std::span<const double> x0, int start,
                      const ProblemSpec& spec, int steps, double dt);

}  // namespace qrmc
