#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace qrmc {

/// Fixed work decomposition that keeps floating-point reductions independent
/// of the worker count.
///
/// Items [0, count) are cut into contiguous chunks of kChunk items; chunk c
/// belongs to lane (c % kLanes). A lane processes its chunks in ascending
/// order, so any per-lane accumulator sees a fixed summation order, and a
/// final reduction over lanes 0..kLanes-1 is likewise fixed. Workers steal
/// whole lanes, never chunks.
struct LaneLayout {
    static constexpr std::size_t kChunk = 1024;
    static constexpr std::size_t kLanes = 256;

    std::size_t count = 0;

    std::size_t chunks() const noexcept { return (count + kChunk - 1) / kChunk; }

    template <typename Fn>  // fn(first, last) over item ranges of one lane
    void for_lane(std::size_t lane, Fn&& fn) const {
        for (std::size_t c = lane; c < chunks(); c += kLanes) {
            const std::size_t first = c * kChunk;
            const std::size_t last = std::min(first + kChunk, count);
            fn(first, last);
        }
    }
};

/// Run fn(lane) for every lane on `workers` threads (0 = hardware count).
/// Exceptions are captured and the first one rethrown after join.
void run_lanes(std::size_t lanes, int workers, const std::function<void(std::size_t)>& fn);

int resolve_workers(int workers);

}  // namespace qrmc
