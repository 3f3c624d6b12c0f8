#include "ssm/cost.hpp"

#include <cstdio>

#include "ssm/errors.hpp"

namespace ssm {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw ValidationError(what);
}

std::string kv(const char* key, double v) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "%s=%.12g\n", key, v);
    return buf;
}

}  // namespace

ControlUnitVariant variant_from_string(const std::string& s) {
    if (s == "cmos") return ControlUnitVariant::cmos;
    if (s == "memristive") return ControlUnitVariant::memristive;
    throw ValidationError("unknown control unit variant '" + s +
                          "' (expected cmos or memristive)");
}

std::string to_string(ControlUnitVariant v) {
    return v == ControlUnitVariant::cmos ? "cmos" : "memristive";
}

void TechnologyTable::validate() const {
    for (const ComponentCost* c : {&ssc, &cu_cmos, &cu_memristive}) {
        require(c->area_um2 > 0.0, "technology table areas must be > 0");
        require(c->power_uw > 0.0, "technology table powers must be > 0");
    }
    require(dff_per_cu >= 1, "dff_per_cu must be >= 1");
}

const ComponentCost& TechnologyTable::control_unit(ControlUnitVariant v) const {
    return v == ControlUnitVariant::cmos ? cu_cmos : cu_memristive;
}

std::size_t default_control_units(std::size_t num_visible, std::size_t num_hidden,
                                  std::size_t num_outputs, std::size_t dff_per_cu) {
    require(dff_per_cu >= 1, "dff_per_cu must be >= 1");
    const std::size_t synapses = num_visible * num_hidden + num_hidden * num_outputs;
    return (synapses + dff_per_cu - 1) / dff_per_cu;
}

CostReport estimate_components(std::size_t ssc_count, std::size_t n_cu,
                               ControlUnitVariant variant, const TechnologyTable& tech) {
    tech.validate();
    const ComponentCost& cu = tech.control_unit(variant);
    CostReport r;
    r.ssc_count = ssc_count;
    r.cu_count = n_cu;
    r.variant = variant;
    r.ssc_area_um2 = static_cast<double>(ssc_count) * tech.ssc.area_um2;
    r.ssc_power_uw = static_cast<double>(ssc_count) * tech.ssc.power_uw;
    r.cu_area_um2 = static_cast<double>(n_cu) * cu.area_um2;
    r.cu_power_uw = static_cast<double>(n_cu) * cu.power_uw;
    r.total_area_um2 = r.ssc_area_um2 + r.cu_area_um2;
    r.total_power_uw = r.ssc_power_uw + r.cu_power_uw;
    return r;
}

CostReport estimate(std::size_t num_visible, std::size_t num_hidden, std::size_t num_outputs,
                    ControlUnitVariant variant, std::size_t n_cu, const TechnologyTable& tech,
                    std::size_t diff_pair_multiplier) {
    require(num_visible >= 1 && num_hidden >= 1 && num_outputs >= 1,
            "cost estimate needs all layer sizes >= 1");
    const std::size_t synapses = num_visible * num_hidden + num_hidden * num_outputs;
    CostReport r = estimate_components(synapses * diff_pair_multiplier, n_cu, variant, tech);
    r.num_visible = num_visible;
    r.num_hidden = num_hidden;
    r.num_outputs = num_outputs;
    return r;
}

TradeoffSummary compare_variants(const CostReport& report_cmos, const CostReport& report_mem) {
    require(report_cmos.num_visible == report_mem.num_visible &&
                report_cmos.num_hidden == report_mem.num_hidden &&
                report_cmos.num_outputs == report_mem.num_outputs &&
                report_cmos.ssc_count == report_mem.ssc_count &&
                report_cmos.cu_count == report_mem.cu_count,
            "compare_variants: reports describe different component counts");
    TradeoffSummary s;
    s.area_saving_um2 = report_cmos.total_area_um2 - report_mem.total_area_um2;
    s.power_increase_uw = report_mem.total_power_uw - report_cmos.total_power_uw;
    s.memristive_area_lower = report_mem.total_area_um2 < report_cmos.total_area_um2;
    s.memristive_power_higher = report_mem.total_power_uw > report_cmos.total_power_uw;
    return s;
}

std::string cost_report_text(const CostReport& report) {
    std::string out;
    out += "cu_variant=" + to_string(report.variant) + "\n";
    out += "num_visible=" + std::to_string(report.num_visible) + "\n";
    out += "num_hidden=" + std::to_string(report.num_hidden) + "\n";
    out += "num_outputs=" + std::to_string(report.num_outputs) + "\n";
    out += "ssc_count=" + std::to_string(report.ssc_count) + "\n";
    out += "cu_count=" + std::to_string(report.cu_count) + "\n";
    out += kv("ssc_area_um2", report.ssc_area_um2);
    out += kv("ssc_power_uw", report.ssc_power_uw);
    out += kv("cu_area_um2", report.cu_area_um2);
    out += kv("cu_power_uw", report.cu_power_uw);
    out += kv("total_area_um2", report.total_area_um2);
    out += kv("total_power_uw", report.total_power_uw);
    return out;
}

}  // namespace ssm
