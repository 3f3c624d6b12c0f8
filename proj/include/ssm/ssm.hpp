#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "ssm/matrix.hpp"
#include "ssm/rng.hpp"

namespace ssm {

// How often a fresh synapse mask is drawn during training.
//   per_epoch   — one mask per epoch, shared by both phases and all batches
//   per_phase   — fresh masks for the data and reconstruction phases of each batch
//   per_example — fresh mask per training example (shared by its two phases)
enum class MaskRefresh { per_epoch, per_phase, per_example };

MaskRefresh mask_refresh_from_string(const std::string& s);
std::string to_string(MaskRefresh refresh);

struct SsmConfig {
    std::size_t num_visible = 16;
    std::size_t num_hidden = 8;
    std::size_t num_outputs = 2;
    double p = 0.5;  // synapse reliability (Bernoulli parameter)
    double learn_rate = 0.05;
    std::size_t num_epochs = 200;
    std::size_t batch_size = 32;  // clamped to the dataset size by train()
    std::uint64_t seed = 1;
    double weight_init_scale = 0.1;
    MaskRefresh mask_refresh = MaskRefresh::per_epoch;
    bool update_biases = false;  // contrastive rule updates weights only by default

    void validate() const;  // throws ValidationError
};

// Two-layer stochastic network: visible-to-hidden weights plus a readout
// layer feeding the winner-take-all stage.
struct SsmNetwork {
    Matrix weights;       // num_visible x num_hidden
    Vector bias_hidden;   // num_hidden
    Vector bias_visible;  // num_visible
    Matrix readout;       // num_hidden x num_outputs
    double p = 0.5;

    std::size_t num_visible() const { return weights.rows(); }
    std::size_t num_hidden() const { return weights.cols(); }
    std::size_t num_outputs() const { return readout.cols(); }
    void validate() const;
};

// Weights uniform in [-weight_init_scale, +weight_init_scale], biases zero.
SsmNetwork init_network(const SsmConfig& cfg, RngStream& rng);

struct EpochMetrics {
    std::size_t epoch = 0;
    double reconstruction_error = 0.0;   // mean squared visible reconstruction error
    double mean_abs_weight_delta = 0.0;  // mean |entry| of the applied weight updates
};

// One Bernoulli(p) draw per synapse, row-major draw order.
MaskTensor sample_mask(std::size_t rows, std::size_t cols, double p, RngStream& rng);

// z_j = sum_i mask_ij * u_i * w_ij + bias_j
Vector stochastic_preactivation(const Vector& input, const Matrix& weights,
                                const MaskTensor& mask, const Vector& bias);

// P(unit = 1) = (1 + erf(z)) / 2
double activation_probability(double z);
Vector activation_probability(const Vector& z);

// state_j = 1 iff probs_j > u, u drawn uniform on [0,1). Strict comparison,
// so probability 0 never fires and probability 1 always does.
Vector sample_states(const Vector& probs, RngStream& rng);

// Exact mean of stochastic_preactivation over masks: p*(u.W) + bias.
Vector expected_preactivation(const Vector& input, const Matrix& weights,
                              const Vector& bias, double p);

struct CdResult {
    Matrix weight_delta;  // learn_rate * (data_exp - rec_exp) / batch_rows
    Matrix data_exp;
    Matrix rec_exp;
};

// One contrastive step: data phase (masked up-pass, hidden sampling, positive
// statistics) then reconstruction phase (masked down-pass from the sampled
// hidden states, masked up-pass on the reconstruction probabilities, negative
// statistics). The same mask is used in both phases.
CdResult cd_step(const Matrix& batch, const SsmNetwork& net, const MaskTensor& mask,
                 double learn_rate, RngStream& rng);

// Down-pass only: visible probabilities from a given hidden state vector.
Vector visible_probs_from_hidden(const SsmNetwork& net, const Vector& hidden,
                                 const MaskTensor& mask);

// Samples the hidden state induced by `visible`, then runs the down-pass.
Vector reconstruct(const SsmNetwork& net, const Vector& visible,
                   const MaskTensor& mask, RngStream& rng);

struct LayerProbs {
    Vector hidden;  // hidden activation probabilities
    Vector output;  // readout scores after the activation block
};

// Reference forward pass with explicit masks on both layers. The readout
// layer has no bias term.
LayerProbs forward_masked(const SsmNetwork& net, const Vector& input,
                          const MaskTensor& mask_in, const MaskTensor& mask_out);

// Mean-field forward pass: masks replaced by their expectation p.
LayerProbs forward_expected(const SsmNetwork& net, const Vector& input);

// Source of synapse masks for the trainer: either the ideal Bernoulli stream
// or a hardware-style bit generator.
class MaskSource {
public:
    virtual ~MaskSource() = default;
    virtual MaskTensor next(std::size_t rows, std::size_t cols, RngStream& rng) = 0;
    // Marginal probability of a 1 at any synapse.
    virtual double reliability() const = 0;
};

class BernoulliMaskSource final : public MaskSource {
public:
    explicit BernoulliMaskSource(double p);
    MaskTensor next(std::size_t rows, std::size_t cols, RngStream& rng) override;
    double reliability() const override { return p_; }

private:
    double p_;
};

struct TrainResult {
    SsmNetwork network;
    std::vector<EpochMetrics> metrics;
};

// Full training loop. Deterministic given cfg (including seed): weight init,
// mask draws and unit sampling all come from one stream consumed in a fixed
// order. labels may be null; when present the readout layer is trained by a
// delta rule on the data-phase hidden activation probabilities.
TrainResult train(const Matrix& dataset, const std::vector<int>* labels,
                  const SsmConfig& cfg);
TrainResult train(const Matrix& dataset, const std::vector<int>* labels,
                  const SsmConfig& cfg, MaskSource& masks);

namespace detail {

// Raw per-batch statistics. data_exp/rec_exp are sums over the batch, not
// yet divided by the batch size.
struct CdStats {
    Matrix data_exp;
    Matrix rec_exp;
    Matrix hidden_probs;       // data-phase activation probabilities, B x H
    Matrix visible_probs;      // reconstruction probabilities, B x V
    Vector hidden_bias_sum;    // sum_b (A - A') per hidden unit
    Vector visible_bias_sum;   // sum_b (v - A_v) per visible unit
    double squared_error = 0;  // sum over (example, visible) of (v - A_v)^2
};

CdStats cd_phases(const Matrix& batch, const SsmNetwork& net,
                  const MaskTensor& mask_data, const MaskTensor& mask_rec,
                  RngStream& rng);

Matrix weight_delta_from(const Matrix& data_exp, const Matrix& rec_exp,
                         double learn_rate, std::size_t batch_rows);

}  // namespace detail

}  // namespace ssm
