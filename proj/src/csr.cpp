#include "ssm/csr.hpp"

#include <cmath>
#include <string>

#include "ssm/errors.hpp"
#include "ssm/rng.hpp"

namespace ssm {

CircularShiftRegister::CircularShiftRegister(std::size_t n_bits, std::size_t n_ones,
                                             std::uint64_t seed)
    : bits_(n_bits, 0), n_ones_(n_ones) {
    if (n_bits < 1) throw ValidationError("shift register needs at least one bit");
    if (n_ones > n_bits)
        throw ValidationError("shift register cannot hold " + std::to_string(n_ones) +
                              " ones in " + std::to_string(n_bits) + " bits");
    for (std::size_t i = 0; i < n_ones; ++i) bits_[i] = 1;
    RngStream rng(seed);
    for (std::size_t i = n_bits - 1; i > 0; --i) {
        const std::size_t j = static_cast<std::size_t>(rng.next_below(i + 1));
        std::swap(bits_[i], bits_[j]);
    }
}

void CircularShiftRegister::tick() { offset_ = (offset_ + 1) % bits_.size(); }

int CircularShiftRegister::tap(std::size_t i) const {
    if (i >= bits_.size())
        throw ValidationError("tap index " + std::to_string(i) + " out of range for " +
                              std::to_string(bits_.size()) + "-bit register");
    return bits_[(i + offset_) % bits_.size()];
}

MaskTensor mask_from_csr(CircularShiftRegister& csr, std::size_t rows, std::size_t cols,
                         std::size_t ticks_per_sample) {
    MaskTensor mask(rows, cols);
    const std::size_t n = csr.size();
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c)
            mask(r, c) = static_cast<double>(csr.tap((r * cols + c) % n));
    for (std::size_t t = 0; t < ticks_per_sample; ++t) csr.tick();
    return mask;
}

std::size_t ones_for_probability(double p, std::size_t n_bits) {
    if (!(p >= 0.0 && p <= 1.0))
        throw ValidationError("probability " + std::to_string(p) + " outside [0,1]");
    return static_cast<std::size_t>(std::llround(p * static_cast<double>(n_bits)));
}

void TimingSpec::validate() const {
    if (!(clock_period_ns > 0.0)) throw ValidationError("clock_period must be > 0 ns");
    if (!(switch_time_ns > 0.0)) throw ValidationError("switch_time must be > 0 ns");
    if (!(setup_margin_ns >= 0.0)) throw ValidationError("setup_margin must be >= 0 ns");
}

TimingReport timing_check(const TimingSpec& spec) {
    spec.validate();
    TimingReport r;
    r.min_period_ns = spec.switch_time_ns + spec.setup_margin_ns;
    r.max_frequency_mhz = 1000.0 / r.min_period_ns;
    r.slack_ns = spec.clock_period_ns - r.min_period_ns;
    r.valid = spec.clock_period_ns >= r.min_period_ns;
    return r;
}

MaskTensor CsrMaskSource::next(std::size_t rows, std::size_t cols, RngStream&) {
    return mask_from_csr(csr_, rows, cols, ticks_);
}

}  // namespace ssm
