#pragma once

#include <cstddef>
#include <string>

#include "ssm/config.hpp"
#include "ssm/cost.hpp"
#include "ssm/crossbar.hpp"
#include "ssm/csr.hpp"
#include "ssm/ssm.hpp"

namespace ssm {

// Command bodies shared by the CLI binary and the tests. Each one validates
// the config, makes sure out_dir exists, writes the resolved-config echo next
// to its outputs, and reports failures through the exception types that map
// to exit codes.

struct TrainOutcome {
    TrainResult result;
    std::string checkpoint_path;
    std::string metrics_path;
};
TrainOutcome cmd_train(const RunConfig& cfg, const std::string& out_dir);

struct EvalOutcome {
    std::size_t num_examples = 0;
    std::size_t num_correct = 0;
    bool has_accuracy = false;
    double accuracy = 0.0;
    std::string predictions_path;
};
EvalOutcome cmd_eval(const RunConfig& cfg, const std::string& out_dir);

struct SimulateOutcome {
    EquivalenceReport report;
    std::string predictions_path;
    std::string equivalence_path;
};
SimulateOutcome cmd_simulate_hw(const RunConfig& cfg, const std::string& out_dir);

struct RngTestOutcome {
    double realized_p = 0.0;
    bool period_ok = false;
    TimingReport timing;
    std::string report_path;
};
RngTestOutcome cmd_rng_test(const RunConfig& cfg, const std::string& out_dir);

struct CostOutcome {
    CostReport report;
    TradeoffSummary tradeoff;
    std::string report_path;
};
CostOutcome cmd_cost(const RunConfig& cfg, const std::string& out_dir);

std::string cmd_export_netlist(const RunConfig& cfg, const std::string& out_dir);

std::string cmd_gen_data(const RunConfig& cfg, const std::string& out_dir);

}  // namespace ssm
