#include <cstdint>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ssm/commands.hpp"
#include "ssm/errors.hpp"

namespace {

int dispatch(const std::string& name, const ssm::RunConfig& cfg, const std::string& out_dir) {
    using namespace ssm;
    if (cfg.rng_source == "csr")
        std::printf("requested p=%g, realized p=%g (k=%zu of %zu)\n", cfg.ssm.p,
                    cfg.realized_p(), cfg.effective_csr_k(), cfg.csr_n);

    if (name == "train") {
        const TrainOutcome out = cmd_train(cfg, out_dir);
        if (!out.result.metrics.empty()) {
            const EpochMetrics& last = out.result.metrics.back();
            std::printf("epoch %zu: recon_err=%g wdelta=%g\n", last.epoch,
                        last.reconstruction_error, last.mean_abs_weight_delta);
        }
        std::printf("wrote %s and %s\n", out.checkpoint_path.c_str(), out.metrics_path.c_str());
    } else if (name == "eval") {
        const EvalOutcome out = cmd_eval(cfg, out_dir);
        if (out.has_accuracy)
            std::printf("accuracy=%g over %zu examples\n", out.accuracy, out.num_examples);
        std::printf("wrote %s\n", out.predictions_path.c_str());
    } else if (name == "simulate-hw") {
        const SimulateOutcome out = cmd_simulate_hw(cfg, out_dir);
        std::printf("wta_agreement=%g max_abs_score_diff=%g over %zu inputs\n",
                    out.report.wta_agreement, out.report.max_abs_score_diff,
                    out.report.num_inputs);
        std::printf("wrote %s and %s\n", out.predictions_path.c_str(),
                    out.equivalence_path.c_str());
    } else if (name == "rng-test") {
        const RngTestOutcome out = cmd_rng_test(cfg, out_dir);
        std::printf("realized_p=%g period_ok=%d timing_valid=%d max_frequency=%g MHz\n",
                    out.realized_p, out.period_ok ? 1 : 0, out.timing.valid ? 1 : 0,
                    out.timing.max_frequency_mhz);
        std::printf("wrote %s\n", out.report_path.c_str());
    } else if (name == "cost") {
        const CostOutcome out = cmd_cost(cfg, out_dir);
        std::printf("total_area_um2=%g total_power_uw=%g (%s control units)\n",
                    out.report.total_area_um2, out.report.total_power_uw,
                    to_string(out.report.variant).c_str());
        std::printf("wrote %s\n", out.report_path.c_str());
    } else if (name == "export-netlist") {
        std::printf("wrote %s\n", cmd_export_netlist(cfg, out_dir).c_str());
    } else if (name == "gen-data") {
        std::printf("wrote %s\n", cmd_gen_data(cfg, out_dir).c_str());
    }
    return ssm::exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-level simulator for stochastic-synapse networks on memristive crossbars"};
    app.require_subcommand(1);
    app.fallthrough(true);

    std::string config_path;
    std::string out_dir = "out";
    std::uint64_t seed = 0;
    std::vector<std::string> overrides;
    app.add_option("--config", config_path, "key=value run configuration file");
    CLI::Option* seed_opt = app.add_option("--seed", seed, "override the config seed");
    app.add_option("--out", out_dir, "output directory (default: out)");
    app.add_option("--set", overrides, "override one config key, e.g. --set p=0.3");

    app.add_subcommand("train", "fit the network and write checkpoint plus per-epoch metrics");
    app.add_subcommand("eval", "classify a dataset with a trained checkpoint");
    app.add_subcommand("simulate-hw",
                       "run the crossbar model and compare it against the reference network");
    app.add_subcommand("rng-test", "report shift-register tap statistics and clock timing");
    app.add_subcommand("cost", "estimate area and power for the configured design");
    app.add_subcommand("export-netlist", "write the programmed crossbars as a netlist");
    app.add_subcommand("gen-data", "write a synthetic dataset");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ssm::exit_ok : ssm::exit_validation;
    }

    try {
        ssm::RunConfig cfg =
            config_path.empty() ? ssm::RunConfig{} : ssm::load_config(config_path);
        for (const std::string& kv : overrides) ssm::apply_config_override(cfg, kv);
        if (seed_opt->count() > 0) cfg.ssm.seed = seed;
        return dispatch(app.get_subcommands().front()->get_name(), cfg, out_dir);
    } catch (const ssm::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return ssm::exit_validation;
    } catch (const ssm::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return ssm::exit_io;
    } catch (const ssm::DivergedError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return ssm::exit_diverged;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return ssm::exit_validation;
    }
}
