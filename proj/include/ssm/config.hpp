#pragma once

#include <cstdint>
#include <string>

#include "ssm/cost.hpp"
#include "ssm/crossbar.hpp"
#include "ssm/csr.hpp"
#include "ssm/ssm.hpp"

namespace ssm {

// Flat key=value run description. Every field has a default so a missing
// config file means "run the stock experiment". csr_k < 0 and n_cu = 0 mean
// "derive from the other fields"; the resolved echo shows what was derived.
struct RunConfig {
    SsmConfig ssm;

    double g_on = 1e-4;
    double g_off = 1e-6;
    double v_threshold = 1.08;
    double switch_time_ns = 20.0;
    double v_prog = 2.0;
    double activation_gain = 1.0;

    std::string rng_source = "ideal";
    std::size_t csr_n = 10;
    long long csr_k = -1;
    std::size_t ticks_per_sample = 1;
    double clock_period_ns = 25.0;
    double setup_margin_ns = 5.0;
    bool dump_bitstream = false;

    std::size_t quant_levels = 0;

    std::string cu_variant = "cmos";
    std::size_t n_cu = 0;
    std::size_t diff_pair_multiplier = 2;
    double ssc_area_um2 = 0.3525;
    double ssc_power_uw = 0.0196;
    double cu_cmos_area_um2 = 24.45;
    double cu_cmos_power_uw = 3.440;
    double cu_mem_area_um2 = 12.57;
    double cu_mem_power_uw = 50.7;
    std::size_t dff_per_cu = 10;

    std::string dataset;
    std::string checkpoint;
    std::string metrics;
    std::string netlist;

    std::string gen_kind = "bars-stripes";
    std::size_t gen_rows = 4;
    std::size_t gen_cols = 4;
    std::size_t gen_per_class = 100;
    std::size_t gen_dim = 16;
    double gen_sep_sigmas = 4.0;
    double gen_sigma = 0.1;

    void validate() const;

    std::size_t effective_csr_k() const;
    double realized_p() const;
    std::size_t effective_n_cu() const;
    TechnologyTable technology() const;
    MemristorDevice device() const;

    // SsmConfig with p replaced by the realized probability, so the reference
    // model and the hardware masks agree on the synapse reliability.
    SsmConfig resolved_ssm() const;
};

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

// Applies one "key=value" assignment, as used by the CLI's --set flag.
void apply_config_override(RunConfig& cfg, const std::string& assignment);

// Full key=value echo, defaults and derived values filled in, fixed order.
std::string resolved_text(const RunConfig& cfg);

}  // namespace ssm
