#pragma once

#include <cmath>
#include <cstdint>

namespace qcr::rng {

// splitmix64 finalizer
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Counter-based stream: output i is a pure function of (seed, stream, i).
// Streams indexed by chunk, not by thread, so parallel and serial runs of a
// chunked sampler are bit-identical.
class Stream {
  public:
    Stream(std::uint64_t seed, std::uint64_t stream_id)
        : base_(mix64(mix64(seed) ^ (0x9e3779b97f4a7c15ULL * (stream_id + 1)))) {}

    std::uint64_t next_u64() { return mix64(base_ + 0x9e3779b97f4a7c15ULL * ++ctr_); }

    // uniform in [0, 1)
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // uniform in (0, 1)
    double next_open() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    double next_normal() {
        double u = next_open();
        double v = next_open();
        return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * 3.14159265358979323846 * v);
    }

    // Marsaglia-Tsang; shape < 1 boosted via the U^{1/a} trick.
    double next_gamma(double shape) {
        if (shape < 1.0) {
            double u = next_open();
            return next_gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
        }
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x = next_normal();
            double t = 1.0 + c * x;
            if (t <= 0.0) continue;
            double v = t * t * t;
            double u = next_open();
            if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) return d * v;
        }
    }

  private:
    std::uint64_t base_;
    std::uint64_t ctr_ = 0;
};

}  // namespace qcr::rng
