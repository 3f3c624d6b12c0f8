#pragma once

#include <cstdint>
#include <random>

namespace ssm {

// Seeded stream of uniform deviates. All randomness in the project flows
// through this class. Doubles are built from the top 53 bits of the engine
// output rather than std::uniform_real_distribution, whose output differs
// between standard libraries; this keeps seeded runs identical everywhere.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform on [0,1), 53-bit resolution.
    double next_uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    // Uniform integer in [0,n). n must be > 0. Modulo bias is below 2^-53
    // for every n used here.
    std::size_t next_below(std::size_t n) {
        return static_cast<std::size_t>(engine_() % n);
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace ssm
