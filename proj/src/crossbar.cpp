#include "ssm/crossbar.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "ssm/errors.hpp"

namespace ssm {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw ValidationError(what);
}

double snap_to_grid(double g, double g_off, double g_on, std::size_t levels) {
    if (levels == 0) return g;
    if (levels == 1) return g_off;
    const double step = (g_on - g_off) / static_cast<double>(levels - 1);
    const double idx = std::round((g - g_off) / step);
    const double snapped = g_off + idx * step;
    return std::clamp(snapped, g_off, g_on);
}

void check_binary_mask(const MaskTensor& mask, std::size_t rows, std::size_t cols,
                       const char* where) {
    require(mask.rows() == rows && mask.cols() == cols,
            std::string(where) + ": mask shape " + std::to_string(mask.rows()) + "x" +
                std::to_string(mask.cols()) + " does not match crossbar " +
                std::to_string(rows) + "x" + std::to_string(cols));
    for (double e : mask.values())
        require(e == 0.0 || e == 1.0, std::string(where) + ": mask entries must be 0 or 1");
}

std::string fmt_g(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

}  // namespace

void MemristorDevice::validate() const {
    require(g_off > 0.0 && g_off < g_on, "device needs 0 < g_off < g_on");
    require(v_threshold > 0.0, "device threshold must be > 0 V");
    require(switch_time_ns > 0.0, "device switch time must be > 0 ns");
    require(v_prog > v_threshold, "programming voltage must exceed the threshold");
    require(x >= 0.0 && x <= 1.0, "device state x outside [0,1]");
}

MemristorDevice write_pulse(MemristorDevice device, double volts, double dt_ns) {
    device.validate();
    require(dt_ns > 0.0, "pulse duration must be > 0 ns");
    require(std::isfinite(volts), "pulse voltage must be finite");
    const double mag = std::abs(volts);
    if (mag <= device.v_threshold) return device;
    const double overdrive = (mag - device.v_threshold) / (device.v_prog - device.v_threshold);
    const double step = overdrive * dt_ns / device.switch_time_ns;
    const double signed_step = volts > 0.0 ? step : -step;
    device.x = std::clamp(device.x + signed_step, 0.0, 1.0);
    return device;
}

std::size_t program_device(MemristorDevice& device, double g_target) {
    device.validate();
    require(g_target >= device.g_off && g_target <= device.g_on,
            "target conductance outside [g_off, g_on]");
    const double range = device.g_on - device.g_off;
    const double tol = 0.01 * range;
    std::size_t pulses = 0;
    while (pulses < 20) {
        const double err = g_target - device.conductance();
        if (std::abs(err) <= tol) break;
        const double dx = err / range;
        const double dt = std::abs(dx) * device.switch_time_ns;
        device = write_pulse(device, dx > 0.0 ? device.v_prog : -device.v_prog, dt);
        ++pulses;
    }
    return pulses;
}

double ssc_output(const SynapticSamplingCell& cell, double v_pre) {
    require(cell.gate == 0 || cell.gate == 1, "SSC gate must be 0 or 1");
    cell.device.validate();
    if (std::abs(v_pre) > cell.device.v_threshold)
        throw ReadDisturbError("read voltage " + std::to_string(v_pre) +
                               " V exceeds device threshold " +
                               std::to_string(cell.device.v_threshold) + " V");
    if (cell.gate == 0) return 0.0;
    return cell.device.conductance() * v_pre;
}

Matrix CrossbarProgram::decode_weights() const {
    Matrix w(g_pos.rows(), g_pos.cols());
    for (std::size_t i = 0; i < w.rows(); ++i)
        for (std::size_t j = 0; j < w.cols(); ++j)
            w(i, j) = (g_pos(i, j) - g_neg(i, j)) / scale;
    return w;
}

Matrix CrossbarProgram::decode_readout() const {
    Matrix w(g_pos_out.rows(), g_pos_out.cols());
    for (std::size_t i = 0; i < w.rows(); ++i)
        for (std::size_t j = 0; j < w.cols(); ++j)
            w(i, j) = (g_pos_out(i, j) - g_neg_out(i, j)) / scale;
    return w;
}

CrossbarProgram map_weights(const SsmNetwork& net, const MemristorDevice& device,
                            std::size_t quant_levels) {
    net.validate();
    device.validate();

    double max_abs = 0.0;
    for (double w : net.weights.values()) max_abs = std::max(max_abs, std::abs(w));
    for (double w : net.readout.values()) max_abs = std::max(max_abs, std::abs(w));

    CrossbarProgram prog;
    prog.g_on = device.g_on;
    prog.g_off = device.g_off;
    prog.quant_levels = quant_levels;
    prog.scale = max_abs > 0.0 ? (device.g_on - device.g_off) / max_abs : 1.0;
    prog.bias_hidden = net.bias_hidden;

    auto encode = [&](const Matrix& w, Matrix& pos, Matrix& neg) {
        pos = Matrix(w.rows(), w.cols(), device.g_off);
        neg = Matrix(w.rows(), w.cols(), device.g_off);
        for (std::size_t i = 0; i < w.rows(); ++i)
            for (std::size_t j = 0; j < w.cols(); ++j) {
                const double v = w(i, j);
                if (v >= 0.0)
                    pos(i, j) = device.g_off + prog.scale * v;
                else
                    neg(i, j) = device.g_off + prog.scale * (-v);
                pos(i, j) = snap_to_grid(pos(i, j), device.g_off, device.g_on, quant_levels);
                neg(i, j) = snap_to_grid(neg(i, j), device.g_off, device.g_on, quant_levels);
            }
    };
    encode(net.weights, prog.g_pos, prog.g_neg);
    encode(net.readout, prog.g_pos_out, prog.g_neg_out);
    return prog;
}

std::size_t wta(const Vector& scores) {
    require(!scores.empty(), "WTA needs at least one score");
    std::size_t best = 0;
    for (std::size_t k = 0; k < scores.size(); ++k) {
        require(std::isfinite(scores[k]), "WTA scores must be finite");
        if (scores[k] > scores[best]) best = k;
    }
    return best;
}

HwForwardTrace forward_hw(const CrossbarProgram& program, const Vector& v_in,
                          const MaskTensor& mask_in, const MaskTensor& mask_out) {
    const std::size_t n_vis = program.num_visible();
    const std::size_t n_hid = program.num_hidden();
    const std::size_t n_out = program.num_outputs();
    require(v_in.size() == n_vis, "forward_hw: input length " + std::to_string(v_in.size()) +
                                      " does not match " + std::to_string(n_vis) + " rows");
    require(program.bias_hidden.size() == n_hid, "forward_hw: bias length mismatch");
    for (std::size_t i = 0; i < v_in.size(); ++i)
        require(v_in[i] >= 0.0 && v_in[i] <= 1.0,
                "forward_hw: input voltage at index " + std::to_string(i) + " is " +
                    std::to_string(v_in[i]) + ", outside [0,1]");
    check_binary_mask(mask_in, n_vis, n_hid, "forward_hw");
    check_binary_mask(mask_out, n_hid, n_out, "forward_hw");

    HwForwardTrace trace;
    trace.column_currents.assign(n_hid, 0.0);
    trace.activation_voltages.assign(n_hid, 0.0);
    trace.output_scores.assign(n_out, 0.0);

    for (std::size_t j = 0; j < n_hid; ++j) {
        double current = 0.0;
        for (std::size_t i = 0; i < n_vis; ++i)
            current += mask_in(i, j) * v_in[i] * (program.g_pos(i, j) - program.g_neg(i, j));
        trace.column_currents[j] = current;
        const double z =
            program.activation_gain * current / program.scale + program.bias_hidden[j];
        trace.activation_voltages[j] = activation_probability(z);
    }

    for (std::size_t k = 0; k < n_out; ++k) {
        double current = 0.0;
        for (std::size_t j = 0; j < n_hid; ++j)
            current += mask_out(j, k) * trace.activation_voltages[j] *
                       (program.g_pos_out(j, k) - program.g_neg_out(j, k));
        trace.output_scores[k] =
            activation_probability(program.activation_gain * current / program.scale);
    }
    trace.winner = wta(trace.output_scores);
    return trace;
}

EquivalenceReport equivalence_report(const SsmNetwork& net, const CrossbarProgram& program,
                                     const Matrix& inputs, const std::vector<MaskPair>& masks) {
    require(masks.size() == inputs.rows(),
            "equivalence_report: " + std::to_string(masks.size()) + " mask pairs for " +
                std::to_string(inputs.rows()) + " inputs");
    require(inputs.cols() == net.weights.rows() || inputs.rows() == 0,
            "equivalence_report: input width does not match the network");

    EquivalenceReport report;
    report.num_inputs = inputs.rows();
    for (std::size_t b = 0; b < inputs.rows(); ++b) {
        const Vector v = row_of(inputs, b);
        const LayerProbs ref = forward_masked(net, v, masks[b].input, masks[b].output);
        const HwForwardTrace hw = forward_hw(program, v, masks[b].input, masks[b].output);
        for (std::size_t k = 0; k < ref.output.size(); ++k)
            report.max_abs_score_diff =
                std::max(report.max_abs_score_diff, std::abs(ref.output[k] - hw.output_scores[k]));
        if (wta(ref.output) != hw.winner) ++report.num_disagreements;
    }
    report.wta_agreement =
        report.num_inputs == 0
            ? 1.0
            : 1.0 - static_cast<double>(report.num_disagreements) /
                        static_cast<double>(report.num_inputs);
    return report;
}

std::string netlist_text(const CrossbarProgram& program, std::size_t csr_size) {
    require(csr_size >= 1, "netlist needs a CSR with at least one bit");
    std::string out;
    auto emit_xbar = [&](const Matrix& pos, const Matrix& neg) {
        out += "XBAR " + std::to_string(pos.rows()) + " " + std::to_string(pos.cols()) + "\n";
        for (std::size_t r = 0; r < pos.rows(); ++r)
            for (std::size_t c = 0; c < pos.cols(); ++c) {
                const std::size_t tap = (r * pos.cols() + c) % csr_size;
                out += "SSC " + std::to_string(r) + " " + std::to_string(c) +
                       " gpos=" + fmt_g(pos(r, c)) + " gneg=" + fmt_g(neg(r, c)) +
                       " tap=" + std::to_string(tap) + "\n";
            }
        for (std::size_t c = 0; c < pos.cols(); ++c)
            out += "ACT " + std::to_string(c) + "\n";
    };
    emit_xbar(program.g_pos, program.g_neg);
    emit_xbar(program.g_pos_out, program.g_neg_out);
    out += "WTA " + std::to_string(program.num_outputs()) + "\n";
    return out;
}

}  // namespace ssm
