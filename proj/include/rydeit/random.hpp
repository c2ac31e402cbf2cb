// random.hpp - Counter-based Philox4x64-10 streams keyed on (seed, trial).
//
// A trial's stream depends only on the master seed and the trial index, so
// results never depend on which worker ran the trial or in what order.

#pragma once

#include <array>
#include <cstdint>

namespace rydeit {

class Philox4x64 {
public:
    using Counter = std::array<std::uint64_t, 4>;
    using Key = std::array<std::uint64_t, 2>;

    static Counter block(Counter ctr, Key key) {
        for (int round = 0; round < 10; ++round) {
            if (round > 0) {
                key[0] += kWeyl0;
                key[1] += kWeyl1;
            }
            std::uint64_t hi0, hi1;
            const std::uint64_t lo0 = mulhilo(kMul0, ctr[0], hi0);
            const std::uint64_t lo1 = mulhilo(kMul1, ctr[2], hi1);
            ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        }
        return ctr;
    }

private:
    static constexpr std::uint64_t kMul0 = 0xD2E7470EE14C6C93ULL;
    static constexpr std::uint64_t kMul1 = 0xCA5A826395121157ULL;
    static constexpr std::uint64_t kWeyl0 = 0x9E3779B97F4A7C15ULL;
    static constexpr std::uint64_t kWeyl1 = 0xBB67AE8584CAA73BULL;

    static std::uint64_t mulhilo(std::uint64_t a, std::uint64_t b, std::uint64_t& hi) {
        const unsigned __int128 product = static_cast<unsigned __int128>(a) * b;
        hi = static_cast<std::uint64_t>(product >> 64);
        return static_cast<std::uint64_t>(product);
    }
};

/// Sequential view of one Philox key. Satisfies UniformRandomBitGenerator.
class TrialStream {
public:
    using result_type = std::uint64_t;

    TrialStream(std::uint64_t master_seed, std::uint64_t trial_index)
        : key_{master_seed, trial_index} {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return ~result_type{0}; }

    result_type operator()() {
        if (pos_ == 4) {
            buffer_ = Philox4x64::block({block_index_++, 0, 0, 0}, key_);
            pos_ = 0;
        }
        return buffer_[pos_++];
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

private:
    Philox4x64::Key key_;
    Philox4x64::Counter buffer_{};
    std::uint64_t block_index_ = 0;
    int pos_ = 4;
};

}  // namespace rydeit
