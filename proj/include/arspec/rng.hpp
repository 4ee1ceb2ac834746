#ifndef ARSPEC_RNG_HPP
#define ARSPEC_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

namespace arspec {

// splitmix64 step; used to derive independent substream seeds from a master
// seed so that panel rows are reproducible regardless of evaluation order.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t substream_seed(std::uint64_t master, std::uint64_t stream) {
    std::uint64_t s = master ^ (0x6a09e667f3bcc909ULL + stream * 0xd1342543de82ef95ULL);
    return splitmix64(s);
}

// Deterministic Gaussian source.  Box-Muller on top of mt19937_64 so the
// stream does not depend on the standard library's normal_distribution.
class GaussianRng {
public:
    explicit GaussianRng(std::uint64_t seed) : engine_(seed) {}

    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1, u2;
        do {
            u1 = uniform01();
        } while (u1 <= 0.0);
        u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * M_PI * u2;
        spare_ = r * std::sin(theta);
        have_spare_ = true;
        return r * std::cos(theta);
    }

    double uniform01() {
        // 53-bit mantissa uniform in [0,1)
        return (engine_() >> 11) * 0x1.0p-53;
    }

    std::uint64_t raw() { return engine_(); }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace arspec

#endif
