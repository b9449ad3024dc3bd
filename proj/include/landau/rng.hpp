#ifndef LANDAU_RNG_HPP
#define LANDAU_RNG_HPP

#include <cstdint>
#include <array>
#include <cmath>

namespace landau {

// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
// Stateless: every draw is a pure function of (key, counter), so the value
// attached to a lattice site is independent of evaluation order or thread
// schedule.
class Philox {
public:
    explicit Philox(uint64_t seed)
        : key0_(static_cast<uint32_t>(seed)),
          key1_(static_cast<uint32_t>(seed >> 32)) {}

    std::array<uint32_t, 4> block(uint32_t c0, uint32_t c1, uint32_t c2, uint32_t c3) const {
        uint32_t k0 = key0_, k1 = key1_;
        for (int round = 0; round < 10; ++round) {
            uint64_t p0 = kM0 * static_cast<uint64_t>(c0);
            uint64_t p1 = kM1 * static_cast<uint64_t>(c2);
            uint32_t hi0 = static_cast<uint32_t>(p0 >> 32), lo0 = static_cast<uint32_t>(p0);
            uint32_t hi1 = static_cast<uint32_t>(p1 >> 32), lo1 = static_cast<uint32_t>(p1);
            uint32_t n0 = hi1 ^ c1 ^ k0;
            uint32_t n1 = lo1;
            uint32_t n2 = hi0 ^ c3 ^ k1;
            uint32_t n3 = lo0;
            c0 = n0; c1 = n1; c2 = n2; c3 = n3;
            k0 += kW0; k1 += kW1;
        }
        return {c0, c1, c2, c3};
    }

    // One double in [0,1) from a 4-word counter, using 53 bits of the block.
    double uniform(uint32_t c0, uint32_t c1, uint32_t c2, uint32_t c3) const {
        auto r = block(c0, c1, c2, c3);
        uint64_t u = (static_cast<uint64_t>(r[0]) << 32) | r[1];
        return static_cast<double>(u >> 11) * 0x1.0p-53;
    }

    // Site-keyed draw: lattice coordinates plus a stream id (e.g. the Monte
    // Carlo sample index) plus a slot for multiple variates per site.
    double site_uniform(int32_t gx, int32_t gy, uint32_t stream, uint32_t slot = 0) const {
        return uniform(static_cast<uint32_t>(gx), static_cast<uint32_t>(gy), stream, slot);
    }

    uint64_t seed() const { return (static_cast<uint64_t>(key1_) << 32) | key0_; }

private:
    static constexpr uint32_t kM0 = 0xD2511F53u;
    static constexpr uint32_t kM1 = 0xCD9E8D57u;
    static constexpr uint32_t kW0 = 0x9E3779B9u;
    static constexpr uint32_t kW1 = 0xBB67AE85u;
    uint32_t key0_, key1_;
};

// Sequential view over the counter space, for bulk sampling in tests.
class PhiloxStream {
public:
    PhiloxStream(uint64_t seed, uint32_t stream) : rng_(seed), stream_(stream) {}
    double next() {
        if (have_ == 0) {
            auto r = rng_.block(static_cast<uint32_t>(ctr_), static_cast<uint32_t>(ctr_ >> 32), stream_, 0);
            buf_[0] = (static_cast<uint64_t>(r[0]) << 32) | r[1];
            buf_[1] = (static_cast<uint64_t>(r[2]) << 32) | r[3];
            have_ = 2;
            ++ctr_;
        }
        uint64_t u = buf_[2 - have_];
        --have_;
        return static_cast<double>(u >> 11) * 0x1.0p-53;
    }

private:
    Philox rng_;
    uint32_t stream_;
    uint64_t ctr_ = 0;
    uint64_t buf_[2] = {0, 0};
    int have_ = 0;
};

} // namespace landau

#endif
