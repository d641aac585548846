#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qrmc/cosine_basis.hpp"
#include "qrmc/multi_index.hpp"
#include "qrmc/sde.hpp"
#include "qrmc/student.hpp"

namespace qrmc {

/// Where the per-step simulation cloud lives between the two phases of a
/// backward step: kept in memory, or regenerated from the per-path stream
/// ids. Both modes produce bit-identical tables.
enum class MemoryMode { StoreCloud, RecomputeFromSeeds };

std::string to_string(MemoryMode mode);
MemoryMode memory_mode_from_string(const std::string& s);

struct RunConfig {
    int steps = 1;             // N, time grid t_j = j * horizon / N
    std::int64_t paths = 1;    // M, fresh paths per backward step
    double damping = 0.0;      // q >= 0
    std::uint64_t seed = 0;
    int workers = 0;           // 0 = hardware concurrency; never affects results
    MemoryMode memory_mode = MemoryMode::StoreCloud;
    MultiIndexSet gamma;
    SamplingMeasure measure;

    void validate(const ProblemSpec& spec) const;
};

struct TruncationStats {
    std::uint64_t applications = 0;
    std::uint64_t clipped = 0;

    double clip_fraction() const noexcept {
        return applications == 0
                   ? 0.0
                   : static_cast<double>(clipped) / static_cast<double>(applications);
    }
};

/// Backward-solve output: one coefficient vector per time step, aligned to
/// the index set's enumeration order, plus a snapshot of everything needed
/// to evaluate the approximation. Frozen once the solve returns.
struct CoefficientTable {
    int steps = 0;
    std::int64_t paths = 0;
    double damping = 0.0;
    std::uint64_t seed = 0;
    double horizon = 0.0;
    SamplingMeasure measure;
    MultiIndexSet gamma;
    std::vector<std::vector<double>> coefficients;  // [i][k], empty = not computed
    TruncationStats truncation;
    std::vector<double> step_wall_seconds;  // metadata only, not part of the artifact

    double dt() const noexcept { return horizon / steps; }
    bool has_step(int i) const noexcept {
        return i >= 0 && i < steps && !coefficients[static_cast<std::size_t>(i)].empty();
    }
};

/// Componentwise soft clamp to [-bound, bound].
double truncate_soft(double value, double bound);

/// Damping weight (1 + |x|^2)^{q/2}.
double damping_weight(std::span<const double> x, double q);

/// Weighted multistep response along one stored path starting at step i:
/// terminal term plus the driver sum, everything divided by the damping
/// weight at the start point. Future steps are read through the table
/// (steps i+1..N-1 must be present; step N uses the exact initialization
/// g / weight). The value fed to the driver is soft-truncated at the
/// state-dependent bound L*(X_{j+1}).
double response(const PathBundle& path, const CoefficientTable& future,
                const ProblemSpec& spec, TruncationStats* stats = nullptr);

/// Backward dynamic programming loop: for i = N-1 .. 0 draw a fresh cloud
/// of M paths with X_i ~ nu (stream id = (step, path)), compute weighted
/// responses, and average response * phi_k over the cloud for every k.
///
/// Deterministic for a fixed (seed, config): the reduction runs over a
/// fixed chunk/lane layout regardless of worker count, and both memory
/// modes replay identical streams.
CoefficientTable backward_solve(const ProblemSpec& spec, const RunConfig& config);

/// Undamped estimate of y_i(x) = u(t_i, x): series value times the damping
/// weight.
double evaluate_solution(const CoefficientTable& table, int i,
                         std::span<const double> x);

/// Bytes of working memory a solve needs (responses, cloud, lane
/// accumulators, table).
std::size_t solve_memory_estimate(int dim, int steps, std::int64_t paths,
                                  std::size_t basis_size, MemoryMode mode);

}  // namespace qrmc
