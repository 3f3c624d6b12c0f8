#include "ssm/commands.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <vector>

#include "ssm/checkpoint.hpp"
#include "ssm/dataset.hpp"
#include "ssm/errors.hpp"

namespace ssm {

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void ensure_dir(const std::string& out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create output directory '" + out_dir + "': " + ec.message());
}

void write_text(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + path + "'");
    out << content;
    if (!out) throw IoError("failed writing '" + path + "'");
}

std::string prepare_run(const RunConfig& cfg, const std::string& out_dir) {
    cfg.validate();
    ensure_dir(out_dir);
    const std::string echo_path = out_dir + "/config-resolved.txt";
    write_text(echo_path, resolved_text(cfg));
    return echo_path;
}

std::string path_or(const std::string& configured, const std::string& out_dir,
                    const char* fallback) {
    return configured.empty() ? out_dir + "/" + fallback : configured;
}

Dataset load_input_dataset(const RunConfig& cfg) {
    if (cfg.dataset.empty()) throw ValidationError("no dataset path configured");
    return load_dataset_csv(cfg.dataset);
}

SsmNetwork load_input_checkpoint(const RunConfig& cfg, const std::string& out_dir) {
    const std::string path = path_or(cfg.checkpoint, out_dir, "checkpoint.txt");
    const SsmNetwork net = load_checkpoint(path).network;
    if (net.num_visible() != cfg.ssm.num_visible || net.num_hidden() != cfg.ssm.num_hidden ||
        net.num_outputs() != cfg.ssm.num_outputs)
        throw ValidationError("checkpoint dims " + std::to_string(net.num_visible()) + "-" +
                              std::to_string(net.num_hidden()) + "-" +
                              std::to_string(net.num_outputs()) +
                              " do not match the configured network");
    return net;
}

}  // namespace

TrainOutcome cmd_train(const RunConfig& cfg, const std::string& out_dir) {
    prepare_run(cfg, out_dir);
    const Dataset ds = load_input_dataset(cfg);
    const SsmConfig scfg = cfg.resolved_ssm();
    const std::vector<int>* labels = ds.has_labels() ? &ds.labels : nullptr;

    TrainOutcome out;
    if (cfg.rng_source == "csr") {
        CircularShiftRegister csr(cfg.csr_n, cfg.effective_csr_k(), scfg.seed);
        CsrMaskSource source(csr, cfg.ticks_per_sample);
        out.result = train(ds.examples, labels, scfg, source);
    } else {
        out.result = train(ds.examples, labels, scfg);
    }

    out.checkpoint_path = path_or(cfg.checkpoint, out_dir, "checkpoint.txt");
    save_checkpoint(out.checkpoint_path, out.result.network, scfg.seed);

    std::string metrics_text;
    for (const EpochMetrics& m : out.result.metrics)
        metrics_text += "epoch=" + std::to_string(m.epoch) +
                        " recon_err=" + fmt(m.reconstruction_error) +
                        " wdelta=" + fmt(m.mean_abs_weight_delta) + "\n";
    out.metrics_path = path_or(cfg.metrics, out_dir, "metrics.txt");
    write_text(out.metrics_path, metrics_text);
    return out;
}

EvalOutcome cmd_eval(const RunConfig& cfg, const std::string& out_dir) {
    prepare_run(cfg, out_dir);
    const Dataset ds = load_input_dataset(cfg);
    const SsmNetwork net = load_input_checkpoint(cfg, out_dir);
    if (ds.examples.rows() > 0 && ds.examples.cols() != net.num_visible())
        throw ValidationError("dataset width " + std::to_string(ds.examples.cols()) +
                              " does not match the network's " +
                              std::to_string(net.num_visible()) + " visible units");

    EvalOutcome out;
    out.num_examples = ds.examples.rows();
    std::string lines;
    for (std::size_t r = 0; r < ds.examples.rows(); ++r) {
        const LayerProbs probs = forward_expected(net, row_of(ds.examples, r));
        const std::size_t winner = wta(probs.output);
        lines += "example=" + std::to_string(r) + " winner=" + std::to_string(winner);
        if (ds.has_labels()) {
            const bool correct = static_cast<int>(winner) == ds.labels[r];
            if (correct) ++out.num_correct;
            lines += " label=" + std::to_string(ds.labels[r]) +
                     " correct=" + (correct ? std::string("1") : std::string("0"));
        }
        lines += "\n";
    }
    if (ds.has_labels() && out.num_examples > 0) {
        out.has_accuracy = true;
        out.accuracy =
            static_cast<double>(out.num_correct) / static_cast<double>(out.num_examples);
        lines += "accuracy=" + fmt(out.accuracy) + "\n";
    }
    out.predictions_path = out_dir + "/predictions.txt";
    write_text(out.predictions_path, lines);
    return out;
}

SimulateOutcome cmd_simulate_hw(const RunConfig& cfg, const std::string& out_dir) {
    prepare_run(cfg, out_dir);
    const Dataset ds = load_input_dataset(cfg);
    const SsmNetwork net = load_input_checkpoint(cfg, out_dir);
    if (ds.examples.rows() > 0 && ds.examples.cols() != net.num_visible())
        throw ValidationError("dataset width " + std::to_string(ds.examples.cols()) +
                              " does not match the network's " +
                              std::to_string(net.num_visible()) + " visible units");

    const CrossbarProgram program = [&] {
        CrossbarProgram p = map_weights(net, cfg.device(), cfg.quant_levels);
        p.activation_gain = cfg.activation_gain;
        return p;
    }();

    const std::size_t n_vis = net.num_visible();
    const std::size_t n_hid = net.num_hidden();
    const std::size_t n_out = net.num_outputs();
    std::vector<MaskPair> masks;
    masks.reserve(ds.examples.rows());
    RngStream rng(cfg.ssm.seed);
    if (cfg.rng_source == "csr") {
        CircularShiftRegister csr(cfg.csr_n, cfg.effective_csr_k(), cfg.ssm.seed);
        for (std::size_t r = 0; r < ds.examples.rows(); ++r) {
            MaskPair pair;
            pair.input = mask_from_csr(csr, n_vis, n_hid, cfg.ticks_per_sample);
            pair.output = mask_from_csr(csr, n_hid, n_out, cfg.ticks_per_sample);
            masks.push_back(std::move(pair));
        }
    } else {
        const double p = cfg.realized_p();
        for (std::size_t r = 0; r < ds.examples.rows(); ++r) {
            MaskPair pair;
            pair.input = sample_mask(n_vis, n_hid, p, rng);
            pair.output = sample_mask(n_hid, n_out, p, rng);
            masks.push_back(std::move(pair));
        }
    }

    SimulateOutcome out;
    std::string lines;
    for (std::size_t r = 0; r < ds.examples.rows(); ++r) {
        const HwForwardTrace trace =
            forward_hw(program, row_of(ds.examples, r), masks[r].input, masks[r].output);
        lines += "example=" + std::to_string(r) + " winner=" + std::to_string(trace.winner) +
                 "\n";
    }
    out.report = equivalence_report(net, program, ds.examples, masks);

    out.predictions_path = out_dir + "/predictions.txt";
    write_text(out.predictions_path, lines);
    out.equivalence_path = out_dir + "/equivalence.txt";
    write_text(out.equivalence_path,
               "num_inputs=" + std::to_string(out.report.num_inputs) + "\n" +
                   "max_abs_score_diff=" + fmt(out.report.max_abs_score_diff) + "\n" +
                   "wta_agreement=" + fmt(out.report.wta_agreement) + "\n" +
                   "num_disagreements=" + std::to_string(out.report.num_disagreements) + "\n");
    return out;
}

RngTestOutcome cmd_rng_test(const RunConfig& cfg, const std::string& out_dir) {
    prepare_run(cfg, out_dir);
    const std::size_t n = cfg.csr_n;
    const std::size_t k = cfg.effective_csr_k();
    CircularShiftRegister csr(n, k, cfg.ssm.seed);

    const std::vector<int> bits0 = csr.bits();
    const std::size_t offset0 = csr.offset();
    std::vector<std::size_t> tap_ones(n, 0);
    for (std::size_t t = 0; t < n; ++t) {
        for (std::size_t i = 0; i < n; ++i) tap_ones[i] += static_cast<std::size_t>(csr.tap(i));
        csr.tick();
    }

    RngTestOutcome out;
    out.realized_p = csr.rate();
    out.period_ok = csr.bits() == bits0 && csr.offset() == offset0;

    TimingSpec spec;
    spec.clock_period_ns = cfg.clock_period_ns;
    spec.switch_time_ns = cfg.switch_time_ns;
    spec.setup_margin_ns = cfg.setup_margin_ns;
    out.timing = timing_check(spec);

    std::string text;
    text += "requested_p=" + fmt(cfg.ssm.p) + "\n";
    text += "realized_p=" + fmt(out.realized_p) + "\n";
    text += "csr_n=" + std::to_string(n) + "\n";
    text += "csr_k=" + std::to_string(k) + "\n";
    text += "period_ok=" + std::string(out.period_ok ? "1" : "0") + "\n";
    for (std::size_t i = 0; i < n; ++i)
        text += "tap" + std::to_string(i) + "_freq=" +
                fmt(static_cast<double>(tap_ones[i]) / static_cast<double>(n)) + "\n";
    text += "timing_valid=" + std::string(out.timing.valid ? "1" : "0") + "\n";
    text += "min_period_ns=" + fmt(out.timing.min_period_ns) + "\n";
    text += "max_frequency_mhz=" + fmt(out.timing.max_frequency_mhz) + "\n";
    text += "slack_ns=" + fmt(out.timing.slack_ns) + "\n";
    out.report_path = out_dir + "/rng-report.txt";
    write_text(out.report_path, text);

    if (cfg.dump_bitstream) {
        std::string stream;
        CircularShiftRegister dump_csr(n, k, cfg.ssm.seed);
        for (std::size_t t = 0; t < 10 * n; ++t) {
            stream += dump_csr.tap(0) ? "1\n" : "0\n";
            dump_csr.tick();
        }
        write_text(out_dir + "/bitstream.txt", stream);
    }
    return out;
}

CostOutcome cmd_cost(const RunConfig& cfg, const std::string& out_dir) {
    prepare_run(cfg, out_dir);
    const TechnologyTable tech = cfg.technology();
    const std::size_t n_cu = cfg.effective_n_cu();

    CostOutcome out;
    out.report = estimate(cfg.ssm.num_visible, cfg.ssm.num_hidden, cfg.ssm.num_outputs,
                          variant_from_string(cfg.cu_variant), n_cu, tech,
                          cfg.diff_pair_multiplier);
    const CostReport cmos = estimate(cfg.ssm.num_visible, cfg.ssm.num_hidden,
                                     cfg.ssm.num_outputs, ControlUnitVariant::cmos, n_cu, tech,
                                     cfg.diff_pair_multiplier);
    const CostReport mem = estimate(cfg.ssm.num_visible, cfg.ssm.num_hidden,
                                    cfg.ssm.num_outputs, ControlUnitVariant::memristive, n_cu,
                                    tech, cfg.diff_pair_multiplier);
    out.tradeoff = compare_variants(cmos, mem);

    std::string text = cost_report_text(out.report);
    text += "area_saving_um2=" + fmt(out.tradeoff.area_saving_um2) + "\n";
    text += "power_increase_uw=" + fmt(out.tradeoff.power_increase_uw) + "\n";
    text += "memristive_area_lower=" + std::string(out.tradeoff.memristive_area_lower ? "1" : "0") +
            "\n";
    text += "memristive_power_higher=" +
            std::string(out.tradeoff.memristive_power_higher ? "1" : "0") + "\n";
    out.report_path = out_dir + "/cost.txt";
    write_text(out.report_path, text);
    return out;
}

std::string cmd_export_netlist(const RunConfig& cfg, const std::string& out_dir) {
    prepare_run(cfg, out_dir);
    const SsmNetwork net = load_input_checkpoint(cfg, out_dir);
    CrossbarProgram program = map_weights(net, cfg.device(), cfg.quant_levels);
    program.activation_gain = cfg.activation_gain;
    const std::string path = path_or(cfg.netlist, out_dir, "netlist.txt");
    write_text(path, netlist_text(program, cfg.csr_n));
    return path;
}

std::string cmd_gen_data(const RunConfig& cfg, const std::string& out_dir) {
    prepare_run(cfg, out_dir);
    Dataset ds;
    if (cfg.gen_kind == "bars-stripes")
        ds = make_bars_stripes(cfg.gen_rows, cfg.gen_cols);
    else
        ds = make_blobs(cfg.gen_per_class, cfg.gen_dim, cfg.gen_sep_sigmas, cfg.gen_sigma,
                        cfg.ssm.seed);
    const std::string path = out_dir + "/dataset.csv";
    save_dataset_csv(path, ds);
    return path;
}

}  // namespace ssm
