#include "ssm/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "ssm/errors.hpp"

namespace ssm {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0;
    std::size_t b = s.size();
    while (a < b && (s[a] == ' ' || s[a] == '\t' || s[a] == '\r')) ++a;
    while (b > a && (s[b - 1] == ' ' || s[b - 1] == '\t' || s[b - 1] == '\r')) --b;
    return s.substr(a, b - a);
}

double to_double(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        const double x = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ValidationError("config key '" + key + "': '" + v + "' is not a number");
    }
}

long long to_ll(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        const long long x = std::stoll(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ValidationError("config key '" + key + "': '" + v + "' is not an integer");
    }
}

std::size_t to_count(const std::string& key, const std::string& v) {
    const long long x = to_ll(key, v);
    if (x < 0) throw ValidationError("config key '" + key + "' cannot be negative");
    return static_cast<std::size_t>(x);
}

std::uint64_t to_u64(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        const unsigned long long x = std::stoull(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ValidationError("config key '" + key + "': '" + v +
                              "' is not an unsigned integer");
    }
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw ValidationError("config key '" + key + "': '" + v + "' is not a boolean");
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void apply_key(RunConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "num_visible") cfg.ssm.num_visible = to_count(key, value);
    else if (key == "num_hidden") cfg.ssm.num_hidden = to_count(key, value);
    else if (key == "num_outputs") cfg.ssm.num_outputs = to_count(key, value);
    else if (key == "p") cfg.ssm.p = to_double(key, value);
    else if (key == "p_realized") to_double(key, value);  // derived, recomputed on load
    else if (key == "learn_rate") cfg.ssm.learn_rate = to_double(key, value);
    else if (key == "num_epochs") cfg.ssm.num_epochs = to_count(key, value);
    else if (key == "batch_size") cfg.ssm.batch_size = to_count(key, value);
    else if (key == "seed") cfg.ssm.seed = to_u64(key, value);
    else if (key == "weight_init_scale") cfg.ssm.weight_init_scale = to_double(key, value);
    else if (key == "mask_refresh") cfg.ssm.mask_refresh = mask_refresh_from_string(value);
    else if (key == "update_biases") cfg.ssm.update_biases = to_bool(key, value);
    else if (key == "g_on") cfg.g_on = to_double(key, value);
    else if (key == "g_off") cfg.g_off = to_double(key, value);
    else if (key == "v_threshold") cfg.v_threshold = to_double(key, value);
    else if (key == "switch_time_ns") cfg.switch_time_ns = to_double(key, value);
    else if (key == "v_prog") cfg.v_prog = to_double(key, value);
    else if (key == "activation_gain") cfg.activation_gain = to_double(key, value);
    else if (key == "rng_source") cfg.rng_source = value;
    else if (key == "csr_n") cfg.csr_n = to_count(key, value);
    else if (key == "csr_k") cfg.csr_k = to_ll(key, value);
    else if (key == "ticks_per_sample") cfg.ticks_per_sample = to_count(key, value);
    else if (key == "clock_period_ns") cfg.clock_period_ns = to_double(key, value);
    else if (key == "setup_margin_ns") cfg.setup_margin_ns = to_double(key, value);
    else if (key == "dump_bitstream") cfg.dump_bitstream = to_bool(key, value);
    else if (key == "quant_levels") cfg.quant_levels = to_count(key, value);
    else if (key == "cu_variant") cfg.cu_variant = value;
    else if (key == "n_cu") cfg.n_cu = to_count(key, value);
    else if (key == "diff_pair_multiplier") cfg.diff_pair_multiplier = to_count(key, value);
    else if (key == "ssc_area_um2") cfg.ssc_area_um2 = to_double(key, value);
    else if (key == "ssc_power_uw") cfg.ssc_power_uw = to_double(key, value);
    else if (key == "cu_cmos_area_um2") cfg.cu_cmos_area_um2 = to_double(key, value);
    else if (key == "cu_cmos_power_uw") cfg.cu_cmos_power_uw = to_double(key, value);
    else if (key == "cu_mem_area_um2") cfg.cu_mem_area_um2 = to_double(key, value);
    else if (key == "cu_mem_power_uw") cfg.cu_mem_power_uw = to_double(key, value);
    else if (key == "dff_per_cu") cfg.dff_per_cu = to_count(key, value);
    else if (key == "dataset") cfg.dataset = value;
    else if (key == "checkpoint") cfg.checkpoint = value;
    else if (key == "metrics") cfg.metrics = value;
    else if (key == "netlist") cfg.netlist = value;
    else if (key == "gen_kind") cfg.gen_kind = value;
    else if (key == "gen_rows") cfg.gen_rows = to_count(key, value);
    else if (key == "gen_cols") cfg.gen_cols = to_count(key, value);
    else if (key == "gen_per_class") cfg.gen_per_class = to_count(key, value);
    else if (key == "gen_dim") cfg.gen_dim = to_count(key, value);
    else if (key == "gen_sep_sigmas") cfg.gen_sep_sigmas = to_double(key, value);
    else if (key == "gen_sigma") cfg.gen_sigma = to_double(key, value);
    else throw ValidationError("unknown config key '" + key + "'");
}

}  // namespace

void RunConfig::validate() const {
    ssm.validate();
    device().validate();
    if (rng_source != "ideal" && rng_source != "csr")
        throw ValidationError("rng_source must be 'ideal' or 'csr', got '" + rng_source + "'");
    if (csr_n < 1) throw ValidationError("csr_n must be >= 1");
    if (csr_k > static_cast<long long>(csr_n))
        throw ValidationError("csr_k cannot exceed csr_n");
    variant_from_string(cu_variant);
    technology().validate();
    if (gen_kind != "bars-stripes" && gen_kind != "blobs")
        throw ValidationError("gen_kind must be 'bars-stripes' or 'blobs', got '" + gen_kind +
                              "'");
}

std::size_t RunConfig::effective_csr_k() const {
    if (csr_k >= 0) return static_cast<std::size_t>(csr_k);
    return ones_for_probability(ssm.p, csr_n);
}

double RunConfig::realized_p() const {
    if (rng_source != "csr") return ssm.p;
    return static_cast<double>(effective_csr_k()) / static_cast<double>(csr_n);
}

std::size_t RunConfig::effective_n_cu() const {
    if (n_cu > 0) return n_cu;
    return default_control_units(ssm.num_visible, ssm.num_hidden, ssm.num_outputs, dff_per_cu);
}

TechnologyTable RunConfig::technology() const {
    TechnologyTable t;
    t.ssc = {ssc_area_um2, ssc_power_uw};
    t.cu_cmos = {cu_cmos_area_um2, cu_cmos_power_uw};
    t.cu_memristive = {cu_mem_area_um2, cu_mem_power_uw};
    t.dff_per_cu = dff_per_cu;
    return t;
}

MemristorDevice RunConfig::device() const {
    MemristorDevice d;
    d.g_on = g_on;
    d.g_off = g_off;
    d.v_threshold = v_threshold;
    d.switch_time_ns = switch_time_ns;
    d.v_prog = v_prog;
    return d;
}

SsmConfig RunConfig::resolved_ssm() const {
    SsmConfig s = ssm;
    s.p = realized_p();
    return s;
}

RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const std::size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw ValidationError("config line " + std::to_string(lineno) +
                                  ": expected key=value, got '" + t + "'");
        apply_key(cfg, trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
    }
    return cfg;
}

void apply_config_override(RunConfig& cfg, const std::string& assignment) {
    const std::size_t eq = assignment.find('=');
    if (eq == std::string::npos)
        throw ValidationError("expected key=value, got '" + assignment + "'");
    apply_key(cfg, trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string resolved_text(const RunConfig& cfg) {
    std::string out;
    const auto add = [&](const std::string& k, const std::string& v) { out += k + "=" + v + "\n"; };
    add("num_visible", std::to_string(cfg.ssm.num_visible));
    add("num_hidden", std::to_string(cfg.ssm.num_hidden));
    add("num_outputs", std::to_string(cfg.ssm.num_outputs));
    add("p", fmt(cfg.ssm.p));
    add("p_realized", fmt(cfg.realized_p()));
    add("learn_rate", fmt(cfg.ssm.learn_rate));
    add("num_epochs", std::to_string(cfg.ssm.num_epochs));
    add("batch_size", std::to_string(cfg.ssm.batch_size));
    add("seed", std::to_string(cfg.ssm.seed));
    add("weight_init_scale", fmt(cfg.ssm.weight_init_scale));
    add("mask_refresh", to_string(cfg.ssm.mask_refresh));
    add("update_biases", cfg.ssm.update_biases ? "true" : "false");
    add("g_on", fmt(cfg.g_on));
    add("g_off", fmt(cfg.g_off));
    add("v_threshold", fmt(cfg.v_threshold));
    add("switch_time_ns", fmt(cfg.switch_time_ns));
    add("v_prog", fmt(cfg.v_prog));
    add("activation_gain", fmt(cfg.activation_gain));
    add("rng_source", cfg.rng_source);
    add("csr_n", std::to_string(cfg.csr_n));
    add("csr_k", std::to_string(cfg.effective_csr_k()));
    add("ticks_per_sample", std::to_string(cfg.ticks_per_sample));
    add("clock_period_ns", fmt(cfg.clock_period_ns));
    add("setup_margin_ns", fmt(cfg.setup_margin_ns));
    add("dump_bitstream", cfg.dump_bitstream ? "true" : "false");
    add("quant_levels", std::to_string(cfg.quant_levels));
    add("cu_variant", cfg.cu_variant);
    add("n_cu", std::to_string(cfg.effective_n_cu()));
    add("diff_pair_multiplier", std::to_string(cfg.diff_pair_multiplier));
    add("ssc_area_um2", fmt(cfg.ssc_area_um2));
    add("ssc_power_uw", fmt(cfg.ssc_power_uw));
    add("cu_cmos_area_um2", fmt(cfg.cu_cmos_area_um2));
    add("cu_cmos_power_uw", fmt(cfg.cu_cmos_power_uw));
    add("cu_mem_area_um2", fmt(cfg.cu_mem_area_um2));
    add("cu_mem_power_uw", fmt(cfg.cu_mem_power_uw));
    add("dff_per_cu", std::to_string(cfg.dff_per_cu));
    add("dataset", cfg.dataset);
    add("checkpoint", cfg.checkpoint);
    add("metrics", cfg.metrics);
    add("netlist", cfg.netlist);
    add("gen_kind", cfg.gen_kind);
    add("gen_rows", std::to_string(cfg.gen_rows));
    add("gen_cols", std::to_string(cfg.gen_cols));
    add("gen_per_class", std::to_string(cfg.gen_per_class));
    add("gen_dim", std::to_string(cfg.gen_dim));
    add("gen_sep_sigmas", fmt(cfg.gen_sep_sigmas));
    add("gen_sigma", fmt(cfg.gen_sigma));
    return out;
}

}  // namespace ssm
