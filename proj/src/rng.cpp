#include "qrmc/rng.hpp"

#include <boost/math/special_functions/erf.hpp>

namespace qrmc {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mul_hi_lo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi,
                      std::uint32_t& lo) noexcept {
    const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
}

inline Philox4x32::Counter round_once(const Philox4x32::Counter& ctr,
                                      const Philox4x32::Key& key) noexcept {
    std::uint32_t hi0, lo0, hi1, lo1;
    mul_hi_lo(kMul0, ctr[0], hi0, lo0);
    mul_hi_lo(kMul1, ctr[2], hi1, lo1);
    return {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
}

}  // namespace

Philox4x32::Counter Philox4x32::block(Counter ctr, Key key) noexcept {
    for (int r = 0; r < 10; ++r) {
        if (r > 0) {
            key[0] += kWeyl0;
            key[1] += kWeyl1;
        }
        ctr = round_once(ctr, key);
    }
    return ctr;
}

double normal_quantile(double p) {
    // Phi^{-1}(p) = -sqrt(2) * erfc^{-1}(2p)
    return -boost::math::constants::root_two<double>() * boost::math::erfc_inv(2.0 * p);
}

double RngStream::next_normal() noexcept {
    return normal_quantile(next_uniform());
}

}  // namespace qrmc
