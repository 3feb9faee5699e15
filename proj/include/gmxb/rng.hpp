#pragma once

#include <cmath>
#include <cstdint>

namespace gmxb {

// Counter-seeded generator with documented determinism: the stream of draws is
// a pure function of (seed, stream_index), independent of threading or call
// site. Streams are splitmix64 sequences; normals come from Box-Muller pairs.
class Rng {
public:
    Rng(std::uint64_t seed, std::uint64_t stream_index) {
        state_ = mix(seed + 0x9e3779b97f4a7c15ULL * (stream_index + 1));
    }

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        return mix(state_);
    }

    // Uniform in (0, 1].
    double next_uniform() {
        return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    }

    double next_normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = next_uniform();
        const double u2 = next_uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t state_ = 0;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

} // namespace gmxb
