#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "ssm/csr.hpp"
#include "ssm/errors.hpp"

using namespace ssm;

TEST_CASE("ring construction places exactly k ones") {
    for (std::uint64_t seed : {1ull, 2ull, 99ull}) {
        CircularShiftRegister csr(10, 3, seed);
        int ones = 0;
        for (int b : csr.bits()) {
            CHECK((b == 0 || b == 1));
            ones += b;
        }
        CHECK(ones == 3);
        CHECK(csr.offset() == 0);
        CHECK(csr.rate() == 0.3);
    }
    CHECK_THROWS_AS(CircularShiftRegister(10, 11, 1), ValidationError);
    CHECK_THROWS_AS(CircularShiftRegister(0, 0, 1), ValidationError);
}

TEST_CASE("same seed reproduces the ring, different seeds permute it") {
    CircularShiftRegister a(10, 5, 4);
    CircularShiftRegister b(10, 5, 4);
    CHECK(a.bits() == b.bits());
    CircularShiftRegister c(10, 5, 5);
    std::vector<int> sa = a.bits(), sc = c.bits();
    std::sort(sa.begin(), sa.end());
    std::sort(sc.begin(), sc.end());
    CHECK(sa == sc);
}

TEST_CASE("degenerate fills read constant") {
    CircularShiftRegister empty(10, 0, 1);
    CircularShiftRegister full(10, 10, 1);
    for (int t = 0; t < 25; ++t) {
        for (std::size_t i = 0; i < 10; ++i) {
            CHECK(empty.tap(i) == 0);
            CHECK(full.tap(i) == 1);
        }
        empty.tick();
        full.tick();
    }
}

TEST_CASE("ticking rotates with period N and conserves population") {
    CircularShiftRegister csr(10, 3, 7);
    const std::vector<int> start = csr.bits();

    // One tick shifts every tap by one position.
    std::vector<int> before(10);
    for (std::size_t i = 0; i < 10; ++i) before[i] = csr.tap(i);
    csr.tick();
    for (std::size_t i = 0; i < 10; ++i) CHECK(csr.tap(i) == before[(i + 1) % 10]);

    for (int t = 0; t < 9; ++t) csr.tick();
    CHECK(csr.offset() == 0);
    for (std::size_t i = 0; i < 10; ++i) CHECK(csr.tap(i) == before[i]);

    for (int t = 0; t < 1000000; ++t) csr.tick();
    int ones = 0;
    for (int b : csr.bits()) ones += b;
    CHECK(ones == 3);
    CHECK(csr.bits() == start);
}

TEST_CASE("every tap emits exactly k ones per N ticks") {
    CircularShiftRegister csr(10, 3, 11);
    std::vector<int> counts(10, 0);
    for (int t = 0; t < 10; ++t) {
        for (std::size_t i = 0; i < 10; ++i) counts[i] += csr.tap(i);
        csr.tick();
    }
    for (int c : counts) CHECK(c == 3);
}

TEST_CASE("tap index range is enforced") {
    CircularShiftRegister csr(10, 3, 1);
    CHECK_NOTHROW(csr.tap(9));
    CHECK_THROWS_AS(csr.tap(10), ValidationError);
}

TEST_CASE("a single circulating one never fires two taps at once") {
    CircularShiftRegister csr(8, 1, 3);
    for (int t = 0; t < 16; ++t) {
        int simultaneous = 0;
        for (std::size_t i = 0; i < 8; ++i) simultaneous += csr.tap(i);
        CHECK(simultaneous == 1);
        csr.tick();
    }
}

TEST_CASE("masks read taps round-robin and advance the ring") {
    CircularShiftRegister csr(10, 3, 13);
    std::vector<int> taps(10);
    for (std::size_t i = 0; i < 10; ++i) taps[i] = csr.tap(i);

    CircularShiftRegister worker(10, 3, 13);
    const MaskTensor row = mask_from_csr(worker, 1, 10, 1);
    double ones = 0.0;
    for (std::size_t c = 0; c < 10; ++c) {
        CHECK(row(0, c) == static_cast<double>(taps[c]));
        ones += row(0, c);
    }
    CHECK(ones == 3.0);

    // Consecutive draws with one tick in between are cyclic shifts.
    const MaskTensor next = mask_from_csr(worker, 1, 10, 1);
    for (std::size_t c = 0; c < 10; ++c) CHECK(next(0, c) == row(0, (c + 1) % 10));

    // Shapes wider than the ring repeat taps with period N.
    CircularShiftRegister wide(10, 3, 13);
    const MaskTensor big = mask_from_csr(wide, 5, 8, 0);
    for (std::size_t r = 0; r < 5; ++r)
        for (std::size_t c = 0; c < 8; ++c) {
            const std::size_t flat = r * 8 + c;
            CHECK(big(r, c) == big(flat % 10 / 8, flat % 10 % 8));
        }
}

TEST_CASE("mask generation is deterministic and tick-count aware") {
    CircularShiftRegister a(10, 4, 21);
    CircularShiftRegister b(10, 4, 21);
    CHECK(mask_from_csr(a, 3, 4, 2) == mask_from_csr(b, 3, 4, 2));
    CHECK(a.offset() == 2);
    CHECK(mask_from_csr(a, 3, 4, 0) == mask_from_csr(b, 3, 4, 0));
    CHECK(a.offset() == 2);
}

TEST_CASE("probability quantization rounds to the nearest tap count") {
    CHECK(ones_for_probability(0.33, 10) == 3);
    CHECK(ones_for_probability(0.0, 10) == 0);
    CHECK(ones_for_probability(1.0, 10) == 10);
    CHECK(ones_for_probability(0.5, 10) == 5);
    CHECK(ones_for_probability(0.04, 10) == 0);
    CHECK(ones_for_probability(0.06, 10) == 1);
    CHECK_THROWS_AS(ones_for_probability(1.5, 10), ValidationError);
}

TEST_CASE("timing check applies the inclusive period bound") {
    TimingSpec spec;
    spec.clock_period_ns = 100.0;
    spec.switch_time_ns = 20.0;
    spec.setup_margin_ns = 5.0;
    TimingReport r = timing_check(spec);
    CHECK(r.valid);
    CHECK(r.min_period_ns == 25.0);
    CHECK(r.max_frequency_mhz == 40.0);
    CHECK(r.slack_ns == 75.0);

    spec.clock_period_ns = 10.0;
    spec.setup_margin_ns = 0.0;
    r = timing_check(spec);
    CHECK_FALSE(r.valid);
    CHECK(r.slack_ns == -10.0);

    // Boundary: zero margin and a period equal to the switch time passes.
    spec.clock_period_ns = 20.0;
    r = timing_check(spec);
    CHECK(r.valid);
    CHECK(r.slack_ns == 0.0);
    CHECK(r.max_frequency_mhz == 50.0);

    spec.clock_period_ns = 0.0;
    CHECK_THROWS_AS(timing_check(spec), ValidationError);
    spec.clock_period_ns = 20.0;
    spec.switch_time_ns = -1.0;
    CHECK_THROWS_AS(timing_check(spec), ValidationError);
}

TEST_CASE("the mask source adapter reports the realized rate") {
    CircularShiftRegister csr(10, 3, 1);
    CsrMaskSource source(csr, 1);
    CHECK(source.reliability() == 0.3);
    RngStream rng(1);
    const MaskTensor m = source.next(2, 5, rng);
    double ones = 0.0;
    for (double e : m.values()) ones += e;
    CHECK(ones == 3.0);  // 10 taps covering the ring once
    CHECK(csr.offset() == 1);
}
