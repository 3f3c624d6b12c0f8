#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "ssm/matrix.hpp"
#include "ssm/ssm.hpp"

namespace ssm {

// Threshold-switching device. State x in [0,1] moves only while the applied
// voltage magnitude exceeds v_threshold; conductance interpolates between
// g_off and g_on.
struct MemristorDevice {
    double g_on = 1e-4;
    double g_off = 1e-6;
    double v_threshold = 1.08;
    double switch_time_ns = 20.0;
    double v_prog = 2.0;
    double x = 0.0;

    double conductance() const { return g_off + x * (g_on - g_off); }
    void validate() const;
};

// Linear overdrive rate law: a pulse at v_prog moves x by dt/switch_time.
// Pulses at or below the threshold leave x untouched.
MemristorDevice write_pulse(MemristorDevice device, double volts, double dt_ns);

// Closed-loop program-and-verify toward a target conductance. Stops once
// within 1% of the g_off..g_on range or after 20 pulses. Returns the number
// of pulses applied.
std::size_t program_device(MemristorDevice& device, double g_target);

struct SynapticSamplingCell {
    MemristorDevice device;
    int gate = 0;
};

// gate=0 blocks the input entirely. Reads must stay below the device
// threshold; anything above is a read disturb.
double ssc_output(const SynapticSamplingCell& cell, double v_pre);

// Differential-pair image of a trained network: two conductance matrices per
// crossbar encode signed weights as g_pos - g_neg. scale converts between
// weight units and siemens.
struct CrossbarProgram {
    Matrix g_pos;
    Matrix g_neg;
    Matrix g_pos_out;
    Matrix g_neg_out;
    Vector bias_hidden;
    double scale = 1.0;
    std::size_t quant_levels = 0;
    double g_on = 1e-4;
    double g_off = 1e-6;
    double activation_gain = 1.0;

    std::size_t num_visible() const { return g_pos.rows(); }
    std::size_t num_hidden() const { return g_pos.cols(); }
    std::size_t num_outputs() const { return g_pos_out.cols(); }

    Matrix decode_weights() const;
    Matrix decode_readout() const;
};

// Signed weights map to conductance pairs: w >= 0 puts g_off + scale*w on the
// positive column and g_off on the negative one, mirrored for w < 0. scale is
// (g_on - g_off) / max|w| across both layers so the largest weight reaches
// g_on; an all-zero network uses scale 1. quant_levels > 0 snaps every
// conductance to a uniform grid over [g_off, g_on].
CrossbarProgram map_weights(const SsmNetwork& net, const MemristorDevice& device,
                            std::size_t quant_levels);

struct HwForwardTrace {
    Vector column_currents;
    Vector activation_voltages;
    Vector output_scores;
    std::size_t winner = 0;
};

// Column currents are masked weighted sums of the input voltages; activation
// blocks apply 0.5*(1+erf(gain*I/scale + bias)). The second crossbar runs the
// same way without bias, then WTA picks the winner.
HwForwardTrace forward_hw(const CrossbarProgram& program, const Vector& v_in,
                          const MaskTensor& mask_in, const MaskTensor& mask_out);

// Index of the maximum score; ties resolve to the lowest index.
std::size_t wta(const Vector& scores);

struct MaskPair {
    MaskTensor input;
    MaskTensor output;
};

struct EquivalenceReport {
    double max_abs_score_diff = 0.0;
    double wta_agreement = 1.0;
    std::size_t num_inputs = 0;
    std::size_t num_disagreements = 0;
};

// Runs the reference network and the hardware model over the same inputs and
// masks, comparing output scores and WTA decisions.
EquivalenceReport equivalence_report(const SsmNetwork& net, const CrossbarProgram& program,
                                     const Matrix& inputs, const std::vector<MaskPair>& masks);

// Line-oriented netlist: XBAR headers, one SSC line per cell with its
// conductance pair and CSR tap, ACT per column, WTA at the end.
std::string netlist_text(const CrossbarProgram& program, std::size_t csr_size);

}  // namespace ssm
