#pragma once

#include <cstdint>

#include "pdisc/types.hpp"

namespace pdisc {

// splitmix64; used to derive independent per-item streams from one seed so
// that parallel and serial runs agree.
inline uint64_t splitmix64(uint64_t& state) {
    uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

inline uint64_t derive_seed(uint64_t seed, uint64_t index) {
    uint64_t s = seed ^ (0x9e3779b97f4a7c15ull * (index + 1));
    splitmix64(s);
    return splitmix64(s);
}

class Rng {
  public:
    explicit Rng(uint64_t seed) : state_(seed ? seed : 0x853c49e6748fea9bull) {}

    uint64_t next() { return splitmix64(state_); }

    // Uniform in [0,1).
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    cplx in_disc(double radius) {
        while (true) {
            double x = uniform(-1.0, 1.0), y = uniform(-1.0, 1.0);
            if (x * x + y * y <= 1.0) return {radius * x, radius * y};
        }
    }

    cplx on_circle() {
        double t = uniform(0.0, kTwoPi);
        return {std::cos(t), std::sin(t)};
    }

  private:
    uint64_t state_;
};

}  // namespace pdisc
