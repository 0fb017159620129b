// SPDX-License-Identifier: Apache-2.0

#ifndef HESTON_RNG_HPP
#define HESTON_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

namespace heston {

// SplitMix64 scrambler; used to derive independent substream seeds from a
// master seed so parallel path order cannot affect results.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Standard-normal generator with a fully specified algorithm (mt19937_64
// bits + Box-Muller), so identical seeds give identical streams on any
// platform with the same libm.
class NormalRng {
  public:
    explicit NormalRng(std::uint64_t seed) : eng_(seed) {}

    double uniform() { // [0, 1)
        return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    }

    double normal() {
        if (have_) {
            have_ = false;
            return cached_;
        }
        const double u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log1p(-u1));
        const double a = 2.0 * M_PI * u2;
        cached_ = r * std::sin(a);
        have_ = true;
        return r * std::cos(a);
    }

  private:
    std::mt19937_64 eng_;
    bool have_ = false;
    double cached_ = 0.0;
};

} // namespace heston

#endif // HESTON_RNG_HPP
