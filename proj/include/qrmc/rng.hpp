#pragma once

#include <array>
#include <cstdint>

namespace qrmc {

/// Philox4x32-10 counter-based generator (Salmon et al., Random123 family).
///
/// Every (key, counter) pair maps to 128 independent output bits, so any
/// number of logical streams can be carved out of one 64-bit seed without
/// coordination: a stream is (seed, stream id), a draw is a counter value.
/// Replaying a stream is exact by construction, which is what makes the
/// store-cloud and recompute-from-seeds solver modes bit-identical.
struct Philox4x32 {
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static Counter block(Counter ctr, Key key) noexcept;
};

/// One logical random stream: (seed, stream id) plus a draw counter.
///
/// Streams with distinct ids never overlap. The high bit of the id is
/// reserved to separate evaluation streams from training streams.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream_id) noexcept
        : key_{static_cast<std::uint32_t>(seed),
               static_cast<std::uint32_t>(seed >> 32)},
          base_{static_cast<std::uint32_t>(stream_id),
                static_cast<std::uint32_t>(stream_id >> 32)} {}

    std::uint64_t next_u64() noexcept {
        if (pos_ == 2) refill();
        return buf_[pos_++];
    }

    /// Uniform on the open interval (0,1): midpoints of a 2^52 grid,
    /// never exactly 0 or 1.
    double next_uniform() noexcept {
        return (static_cast<double>(next_u64() >> 12) + 0.5) * 0x1p-52;
    }

    /// Standard normal via the inverse CDF of next_uniform().
    double next_normal() noexcept;

private:
    void refill() noexcept {
        Philox4x32::Counter ctr{static_cast<std::uint32_t>(block_),
                                static_cast<std::uint32_t>(block_ >> 32),
                                base_[0], base_[1]};
        const auto out = Philox4x32::block(ctr, key_);
        buf_[0] = (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
        buf_[1] = (static_cast<std::uint64_t>(out[3]) << 32) | out[2];
        ++block_;
        pos_ = 0;
    }

    Philox4x32::Key key_;
    std::array<std::uint32_t, 2> base_;
    std::uint64_t block_ = 0;
    std::array<std::uint64_t, 2> buf_{};
    int pos_ = 2;
};

/// Stream-id layout shared by the solver and the metric evaluator.
///
/// Training stream for (time step i, path m) and evaluation streams live in
/// disjoint id spaces (evaluation ids carry a reserved prefix bit), so
/// evaluation points are independent of training paths even under equal
/// seeds.
namespace stream_ids {

inline constexpr std::uint64_t kEvalPrefix = std::uint64_t{1} << 63;
inline constexpr unsigned kStepShift = 40;  // up to 2^40 paths per step

inline std::uint64_t training(int step, std::uint64_t path) noexcept {
    return (static_cast<std::uint64_t>(step) << kStepShift) | path;
}

inline std::uint64_t evaluation(int step, std::uint64_t point) noexcept {
    return kEvalPrefix | (static_cast<std::uint64_t>(step) << kStepShift) | point;
}

}  // namespace stream_ids

/// Inverse standard-normal CDF (quantile), p in (0,1).
double normal_quantile(double p);

}  // namespace qrmc
