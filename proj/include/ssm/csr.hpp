#pragma once

#include <cstdint>
#include <cstddef>
#include <vector>

#include "ssm/ssm.hpp"

namespace ssm {

// Ring of flip-flops holding a fixed multiset of bits. A tick rotates the
// ring; tap(i) reads position i relative to the current rotation. Every tap
// therefore emits exactly ones() ones per size() consecutive ticks.
class CircularShiftRegister {
public:
    CircularShiftRegister(std::size_t n_bits, std::size_t n_ones, std::uint64_t seed);

    void tick();
    int tap(std::size_t i) const;

    std::size_t size() const { return bits_.size(); }
    std::size_t ones() const { return n_ones_; }
    std::size_t offset() const { return offset_; }
    double rate() const { return static_cast<double>(n_ones_) / static_cast<double>(bits_.size()); }
    const std::vector<int>& bits() const { return bits_; }

private:
    std::vector<int> bits_;
    std::size_t offset_ = 0;
    std::size_t n_ones_ = 0;
};

// Tap assignment: synapse (r,c) reads tap((r*cols + c) mod N). Advances the
// register ticks_per_sample times after the mask is filled.
MaskTensor mask_from_csr(CircularShiftRegister& csr, std::size_t rows, std::size_t cols,
                         std::size_t ticks_per_sample);

// Quantizes a requested probability to the nearest realizable k/N.
std::size_t ones_for_probability(double p, std::size_t n_bits);

struct TimingSpec {
    double clock_period_ns = 0.0;
    double switch_time_ns = 20.0;
    double setup_margin_ns = 0.0;

    void validate() const;
};

struct TimingReport {
    bool valid = false;
    double min_period_ns = 0.0;
    double max_frequency_mhz = 0.0;
    double slack_ns = 0.0;
};

// Valid iff clock_period >= switch_time + setup_margin (boundary inclusive).
TimingReport timing_check(const TimingSpec& spec);

// Adapts a shift register to the training loop's mask interface. The rng
// argument is unused: the bitstream is fully determined by the register.
class CsrMaskSource final : public MaskSource {
public:
    CsrMaskSource(CircularShiftRegister& csr, std::size_t ticks_per_sample)
        : csr_(csr), ticks_(ticks_per_sample) {}

    MaskTensor next(std::size_t rows, std::size_t cols, RngStream& rng) override;
    double reliability() const override { return csr_.rate(); }

private:
    CircularShiftRegister& csr_;
    std::size_t ticks_;
};

}  // namespace ssm
