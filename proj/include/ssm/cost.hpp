#pragma once

#include <cstddef>
#include <string>

namespace ssm {

enum class ControlUnitVariant { cmos, memristive };

ControlUnitVariant variant_from_string(const std::string& s);
std::string to_string(ControlUnitVariant v);

struct ComponentCost {
    double area_um2 = 0.0;
    double power_uw = 0.0;
};

// Per-component area and power figures. Defaults follow the published
// calculations for the design: one synaptic sampling cell, one CMOS control
// unit of 10 flip-flops, and its memristive counterpart.
struct TechnologyTable {
    ComponentCost ssc{0.3525, 0.0196};
    ComponentCost cu_cmos{24.45, 3.440};
    ComponentCost cu_memristive{12.57, 50.7};
    std::size_t dff_per_cu = 10;

    void validate() const;
    const ComponentCost& control_unit(ControlUnitVariant v) const;
};

struct CostReport {
    std::size_t num_visible = 0;
    std::size_t num_hidden = 0;
    std::size_t num_outputs = 0;
    std::size_t ssc_count = 0;
    std::size_t cu_count = 0;
    ControlUnitVariant variant = ControlUnitVariant::cmos;
    double ssc_area_um2 = 0.0;
    double ssc_power_uw = 0.0;
    double cu_area_um2 = 0.0;
    double cu_power_uw = 0.0;
    double total_area_um2 = 0.0;
    double total_power_uw = 0.0;
};

// One control unit per dff_per_cu synapses, each synapse needing one tap.
std::size_t default_control_units(std::size_t num_visible, std::size_t num_hidden,
                                  std::size_t num_outputs, std::size_t dff_per_cu);

// Subtotals from raw component counts. Totals are the sum of the two
// subtotals.
CostReport estimate_components(std::size_t ssc_count, std::size_t n_cu,
                               ControlUnitVariant variant, const TechnologyTable& tech);

// SSC count covers both crossbars: (v*h + h*o) cells, times the
// differential-pair multiplier (2 for signed weights, 1 for unipolar).
CostReport estimate(std::size_t num_visible, std::size_t num_hidden, std::size_t num_outputs,
                    ControlUnitVariant variant, std::size_t n_cu, const TechnologyTable& tech,
                    std::size_t diff_pair_multiplier = 2);

struct TradeoffSummary {
    double area_saving_um2 = 0.0;
    double power_increase_uw = 0.0;
    bool memristive_area_lower = false;
    bool memristive_power_higher = false;
};

// Area saving and power increase of the second report relative to the first.
// Both reports must describe the same component counts.
TradeoffSummary compare_variants(const CostReport& report_cmos, const CostReport& report_mem);

std::string cost_report_text(const CostReport& report);

}  // namespace ssm
