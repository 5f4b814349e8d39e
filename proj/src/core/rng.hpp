#pragma once

#include <cstdint>
#include <random>

namespace conceft::rng {

// SplitMix64 step; used both as a generator for seed material and as the
// fixed seed-splitting function for derived substreams.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Deterministic substream seed: one master seed, independent children per
// (stream, index). Every generator in the project derives its seed this way
// so that a single master seed reproduces a whole run.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t index = 0) {
    std::uint64_t s = master ^ (0x5851f42d4c957f2dULL * (stream + 1)) ^ (0x14057b7ef767814fULL * (index + 1));
    splitmix64(s);
    return splitmix64(s);
}

// Seeded engine with hand-rolled samplers. std::mt19937_64 output is pinned
// by the standard, and the transforms below avoid the implementation-defined
// std distributions, so sequences are reproducible across toolchains.
class Engine {
public:
    explicit Engine(std::uint64_t seed) : gen_(seed) {}

    double uniform() {
        // 53-bit mantissa uniform in [0, 1)
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    double normal();
    double student_t4();
    int poisson(double lambda);

    std::uint64_t raw() { return gen_(); }

private:
    std::mt19937_64 gen_;
    bool has_cached_ = false;
    double cached_ = 0.0;
};

}  // namespace conceft::rng
