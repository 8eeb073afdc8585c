#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

namespace orthocone {

// Philox4x32-10 (Salmon et al., SC'11). Known-answer vectors live in tests/test_rng.cpp.
class Philox4x32 {
public:
    using ctr_type = std::array<std::uint32_t, 4>;
    using key_type = std::array<std::uint32_t, 2>;

    static ctr_type block(ctr_type ctr, key_type key) {
        for (int r = 0; r < 10; ++r) {
            if (r > 0) {
                key[0] += 0x9E3779B9u;
                key[1] += 0xBB67AE85u;
            }
            const std::uint64_t p0 = std::uint64_t{0xD2511F53u} * ctr[0];
            const std::uint64_t p1 = std::uint64_t{0xCD9E8D57u} * ctr[2];
            ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
                   static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
        }
        return ctr;
    }
};

// (seed, stream_index) names an independent sequence; nothing in it is mutated.
struct RngStream {
    std::uint64_t seed = 0;
    std::uint64_t stream_index = 0;
};

// Sequential generator over one (seed, stream, substream) triple.
// Counter layout: word 0 = block number, word 1 = substream, words 2..3 = stream index.
class PhiloxEngine {
public:
    using result_type = std::uint32_t;

    PhiloxEngine(RngStream s, std::uint32_t substream = 0)
        : key_{static_cast<std::uint32_t>(s.seed), static_cast<std::uint32_t>(s.seed >> 32)},
          ctr_{0u, substream, static_cast<std::uint32_t>(s.stream_index),
               static_cast<std::uint32_t>(s.stream_index >> 32)} {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() {
        if (pos_ == 4) {
            buf_ = Philox4x32::block(ctr_, key_);
            ++ctr_[0];
            pos_ = 0;
        }
        return buf_[pos_++];
    }

    // 53-bit uniform in the open interval (0, 1).
    double uniform() {
        const std::uint64_t a = (*this)() >> 5, b = (*this)() >> 6;
        return (static_cast<double>((a << 26) | b) + 0.5) * 0x1p-53;
    }

    // Box-Muller; the second variate of each pair is kept for the next call.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u = uniform(), v = uniform();
        const double r = std::sqrt(-2.0 * std::log(u));
        const double t = 2.0 * std::numbers::pi * v;
        spare_ = r * std::sin(t);
        have_spare_ = true;
        return r * std::cos(t);
    }

private:
    Philox4x32::key_type key_;
    Philox4x32::ctr_type ctr_;
    Philox4x32::ctr_type buf_{};
    int pos_ = 4;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace orthocone
