#include "ssm/ssm.hpp"

#include <algorithm>
#include <cmath>

#include "ssm/errors.hpp"

namespace ssm {

namespace {

std::string shape_str(const Matrix& m) {
    return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

void require(bool ok, const std::string& what) {
    if (!ok) throw ValidationError(what);
}

void check_mask(const MaskTensor& mask, const Matrix& weights, const char* where) {
    if (!mask.same_shape(weights))
        throw ValidationError(std::string(where) + ": mask " + shape_str(mask) +
                              " does not match weights " + shape_str(weights));
    for (double e : mask.values())
        if (e != 0.0 && e != 1.0)
            throw ValidationError(std::string(where) + ": mask entry " + std::to_string(e) +
                                  " is not 0 or 1");
}

void check_finite(const Vector& v, const char* where) {
    for (double x : v)
        if (!std::isfinite(x)) throw ValidationError(std::string(where) + ": non-finite input");
}

void check_unit_range(const Matrix& m, const char* what) {
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c) {
            const double v = m(r, c);
            if (!(v >= 0.0 && v <= 1.0))
                throw ValidationError(std::string(what) + " value at row " + std::to_string(r) +
                                      ", col " + std::to_string(c) + " is " + std::to_string(v) +
                                      ", outside [0,1]");
        }
}

}  // namespace

MaskRefresh mask_refresh_from_string(const std::string& s) {
    if (s == "per-epoch") return MaskRefresh::per_epoch;
    if (s == "per-phase") return MaskRefresh::per_phase;
    if (s == "per-example") return MaskRefresh::per_example;
    throw ValidationError("unknown mask_refresh '" + s +
                          "' (expected per-epoch, per-phase or per-example)");
}

std::string to_string(MaskRefresh refresh) {
    switch (refresh) {
        case MaskRefresh::per_epoch: return "per-epoch";
        case MaskRefresh::per_phase: return "per-phase";
        case MaskRefresh::per_example: return "per-example";
    }
    return "per-epoch";
}

void SsmConfig::validate() const {
    require(p >= 0.0 && p <= 1.0, "p must be in [0,1], got " + std::to_string(p));
    require(num_visible >= 1, "num_visible must be >= 1");
    require(num_hidden >= 1, "num_hidden must be >= 1");
    require(num_outputs >= 1, "num_outputs must be >= 1");
    require(batch_size >= 1, "batch_size must be >= 1");
    require(std::isfinite(learn_rate) && learn_rate >= 0.0,
            "learn_rate must be finite and non-negative");
    require(std::isfinite(weight_init_scale) && weight_init_scale >= 0.0,
            "weight_init_scale must be finite and non-negative");
}

void SsmNetwork::validate() const {
    require(weights.rows() >= 1 && weights.cols() >= 1, "weight matrix is empty");
    require(bias_hidden.size() == weights.cols(), "bias_hidden length mismatch");
    require(bias_visible.size() == weights.rows(), "bias_visible length mismatch");
    require(readout.rows() == weights.cols(), "readout rows must equal num_hidden");
    require(readout.cols() >= 1, "readout has no output columns");
    require(p >= 0.0 && p <= 1.0, "network p out of [0,1]");
    for (double w : weights.values())
        require(std::isfinite(w), "non-finite weight");
    for (double w : readout.values())
        require(std::isfinite(w), "non-finite readout weight");
    check_finite(bias_hidden, "bias_hidden");
    check_finite(bias_visible, "bias_visible");
}

SsmNetwork init_network(const SsmConfig& cfg, RngStream& rng) {
    cfg.validate();
    SsmNetwork net;
    net.weights = Matrix(cfg.num_visible, cfg.num_hidden);
    net.bias_hidden.assign(cfg.num_hidden, 0.0);
    net.bias_visible.assign(cfg.num_visible, 0.0);
    net.readout = Matrix(cfg.num_hidden, cfg.num_outputs);
    net.p = cfg.p;
    const double s = cfg.weight_init_scale;
    for (double& w : net.weights.values()) w = -s + 2.0 * s * rng.next_uniform();
    for (double& w : net.readout.values()) w = -s + 2.0 * s * rng.next_uniform();
    return net;
}

MaskTensor sample_mask(std::size_t rows, std::size_t cols, double p, RngStream& rng) {
    require(p >= 0.0 && p <= 1.0, "sample_mask: p must be in [0,1], got " + std::to_string(p));
    MaskTensor mask(rows, cols);
    for (double& e : mask.values()) e = rng.next_uniform() < p ? 1.0 : 0.0;
    return mask;
}

Vector stochastic_preactivation(const Vector& input, const Matrix& weights,
                                const MaskTensor& mask, const Vector& bias) {
    require(input.size() == weights.rows(),
            "stochastic_preactivation: input length " + std::to_string(input.size()) +
                " does not match weight rows " + std::to_string(weights.rows()));
    require(bias.size() == weights.cols(),
            "stochastic_preactivation: bias length " + std::to_string(bias.size()) +
                " does not match weight cols " + std::to_string(weights.cols()));
    check_mask(mask, weights, "stochastic_preactivation");
    check_finite(input, "stochastic_preactivation");
    check_finite(bias, "stochastic_preactivation");

    Vector z(weights.cols());
    for (std::size_t j = 0; j < weights.cols(); ++j) {
        double acc = 0.0;
        for (std::size_t i = 0; i < weights.rows(); ++i)
            acc += mask(i, j) * input[i] * weights(i, j);
        z[j] = acc + bias[j];
    }
    return z;
}

double activation_probability(double z) {
    if (!std::isfinite(z))
        throw ValidationError("activation_probability: non-finite input");
    return 0.5 * (1.0 + std::erf(z));
}

Vector activation_probability(const Vector& z) {
    Vector out(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) out[i] = activation_probability(z[i]);
    return out;
}

Vector sample_states(const Vector& probs, RngStream& rng) {
    for (double q : probs)
        require(q >= 0.0 && q <= 1.0,
                "sample_states: probability " + std::to_string(q) + " outside [0,1]");
    Vector state(probs.size());
    for (std::size_t j = 0; j < probs.size(); ++j)
        state[j] = probs[j] > rng.next_uniform() ? 1.0 : 0.0;
    return state;
}

Vector expected_preactivation(const Vector& input, const Matrix& weights,
                              const Vector& bias, double p) {
    require(p >= 0.0 && p <= 1.0, "expected_preactivation: p outside [0,1]");
    require(input.size() == weights.rows(), "expected_preactivation: input length mismatch");
    require(bias.size() == weights.cols(), "expected_preactivation: bias length mismatch");
    Vector z(weights.cols());
    for (std::size_t j = 0; j < weights.cols(); ++j) {
        double acc = 0.0;
        for (std::size_t i = 0; i < weights.rows(); ++i) acc += input[i] * weights(i, j);
        z[j] = p * acc + bias[j];
    }
    return z;
}

namespace detail {

CdStats cd_phases(const Matrix& batch, const SsmNetwork& net, const MaskTensor& mask_data,
                  const MaskTensor& mask_rec, RngStream& rng) {
    const std::size_t bsz = batch.rows();
    const std::size_t n_vis = net.weights.rows();
    const std::size_t n_hid = net.weights.cols();

    CdStats s;
    s.hidden_probs = Matrix(bsz, n_hid);
    s.visible_probs = Matrix(bsz, n_vis);
    s.data_exp = Matrix(n_vis, n_hid);
    s.rec_exp = Matrix(n_vis, n_hid);
    s.hidden_bias_sum.assign(n_hid, 0.0);
    s.visible_bias_sum.assign(n_vis, 0.0);

    // Data phase: masked up-pass, then one sampling draw per (example, unit)
    // in row-major order.
    for (std::size_t b = 0; b < bsz; ++b)
        for (std::size_t j = 0; j < n_hid; ++j) {
            double acc = 0.0;
            for (std::size_t i = 0; i < n_vis; ++i)
                acc += mask_data(i, j) * batch(b, i) * net.weights(i, j);
            s.hidden_probs(b, j) = activation_probability(acc + net.bias_hidden[j]);
        }
    Matrix hidden_states(bsz, n_hid);
    for (std::size_t b = 0; b < bsz; ++b)
        for (std::size_t j = 0; j < n_hid; ++j)
            hidden_states(b, j) = s.hidden_probs(b, j) > rng.next_uniform() ? 1.0 : 0.0;
    for (std::size_t i = 0; i < n_vis; ++i)
        for (std::size_t j = 0; j < n_hid; ++j) {
            double acc = 0.0;
            for (std::size_t b = 0; b < bsz; ++b) acc += batch(b, i) * s.hidden_probs(b, j);
            s.data_exp(i, j) = acc;
        }

    // Reconstruction phase: down-pass from the sampled states, then an
    // up-pass on the reconstruction probabilities. The up-pass carries no
    // bias term.
    for (std::size_t b = 0; b < bsz; ++b)
        for (std::size_t i = 0; i < n_vis; ++i) {
            double acc = 0.0;
            for (std::size_t j = 0; j < n_hid; ++j)
                acc += hidden_states(b, j) * net.weights(i, j) * mask_rec(i, j);
            s.visible_probs(b, i) = activation_probability(acc + net.bias_visible[i]);
        }
    Matrix rec_hidden(bsz, n_hid);
    for (std::size_t b = 0; b < bsz; ++b)
        for (std::size_t j = 0; j < n_hid; ++j) {
            double acc = 0.0;
            for (std::size_t i = 0; i < n_vis; ++i)
                acc += s.visible_probs(b, i) * net.weights(i, j) * mask_rec(i, j);
            rec_hidden(b, j) = activation_probability(acc);
        }
    for (std::size_t i = 0; i < n_vis; ++i)
        for (std::size_t j = 0; j < n_hid; ++j) {
            double acc = 0.0;
            for (std::size_t b = 0; b < bsz; ++b)
                acc += s.visible_probs(b, i) * rec_hidden(b, j);
            s.rec_exp(i, j) = acc;
        }

    for (std::size_t b = 0; b < bsz; ++b) {
        for (std::size_t i = 0; i < n_vis; ++i) {
            const double d = batch(b, i) - s.visible_probs(b, i);
            s.squared_error += d * d;
            s.visible_bias_sum[i] += d;
        }
        for (std::size_t j = 0; j < n_hid; ++j)
            s.hidden_bias_sum[j] += s.hidden_probs(b, j) - rec_hidden(b, j);
    }
    return s;
}

Matrix weight_delta_from(const Matrix& data_exp, const Matrix& rec_exp, double learn_rate,
                         std::size_t batch_rows) {
    Matrix delta(data_exp.rows(), data_exp.cols());
    for (std::size_t i = 0; i < delta.rows(); ++i)
        for (std::size_t j = 0; j < delta.cols(); ++j)
            delta(i, j) =
                learn_rate * (data_exp(i, j) - rec_exp(i, j)) / static_cast<double>(batch_rows);
    return delta;
}

}  // namespace detail

CdResult cd_step(const Matrix& batch, const SsmNetwork& net, const MaskTensor& mask,
                 double learn_rate, RngStream& rng) {
    require(batch.rows() >= 1, "cd_step: empty batch");
    require(batch.cols() == net.weights.rows(),
            "cd_step: batch width " + std::to_string(batch.cols()) + " does not match " +
                std::to_string(net.weights.rows()) + " visible units");
    net.validate();
    check_mask(mask, net.weights, "cd_step");
    check_unit_range(batch, "cd_step: batch");

    detail::CdStats s = detail::cd_phases(batch, net, mask, mask, rng);
    CdResult out;
    out.weight_delta = detail::weight_delta_from(s.data_exp, s.rec_exp, learn_rate, batch.rows());
    out.data_exp = std::move(s.data_exp);
    out.rec_exp = std::move(s.rec_exp);
    return out;
}

Vector visible_probs_from_hidden(const SsmNetwork& net, const Vector& hidden,
                                 const MaskTensor& mask) {
    require(hidden.size() == net.weights.cols(), "visible_probs_from_hidden: hidden length " +
                                                     std::to_string(hidden.size()) +
                                                     " does not match network");
    check_mask(mask, net.weights, "visible_probs_from_hidden");
    Vector probs(net.weights.rows());
    for (std::size_t i = 0; i < net.weights.rows(); ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < net.weights.cols(); ++j)
            acc += hidden[j] * net.weights(i, j) * mask(i, j);
        probs[i] = activation_probability(acc + net.bias_visible[i]);
    }
    return probs;
}

Vector reconstruct(const SsmNetwork& net, const Vector& visible, const MaskTensor& mask,
                   RngStream& rng) {
    const Vector z = stochastic_preactivation(visible, net.weights, mask, net.bias_hidden);
    const Vector hidden = sample_states(activation_probability(z), rng);
    return visible_probs_from_hidden(net, hidden, mask);
}

LayerProbs forward_masked(const SsmNetwork& net, const Vector& input,
                          const MaskTensor& mask_in, const MaskTensor& mask_out) {
    LayerProbs out;
    out.hidden = activation_probability(
        stochastic_preactivation(input, net.weights, mask_in, net.bias_hidden));
    const Vector no_bias(net.readout.cols(), 0.0);
    out.output = activation_probability(
        stochastic_preactivation(out.hidden, net.readout, mask_out, no_bias));
    return out;
}

LayerProbs forward_expected(const SsmNetwork& net, const Vector& input) {
    LayerProbs out;
    out.hidden = activation_probability(
        expected_preactivation(input, net.weights, net.bias_hidden, net.p));
    const Vector no_bias(net.readout.cols(), 0.0);
    out.output = activation_probability(
        expected_preactivation(out.hidden, net.readout, no_bias, net.p));
    return out;
}

BernoulliMaskSource::BernoulliMaskSource(double p) : p_(p) {
    require(p >= 0.0 && p <= 1.0, "BernoulliMaskSource: p outside [0,1]");
}

MaskTensor BernoulliMaskSource::next(std::size_t rows, std::size_t cols, RngStream& rng) {
    return sample_mask(rows, cols, p_, rng);
}

namespace {

// Per-example refresh: every example gets its own mask, shared by its two
// phases. Expectations are still accumulated over the whole batch and the
// update applied once.
detail::CdStats cd_per_example(const Matrix& batch, const SsmNetwork& net, MaskSource& masks,
                               RngStream& rng) {
    detail::CdStats total;
    const std::size_t n_vis = net.weights.rows();
    const std::size_t n_hid = net.weights.cols();
    total.data_exp = Matrix(n_vis, n_hid);
    total.rec_exp = Matrix(n_vis, n_hid);
    total.hidden_probs = Matrix(batch.rows(), n_hid);
    total.visible_probs = Matrix(batch.rows(), n_vis);
    total.hidden_bias_sum.assign(n_hid, 0.0);
    total.visible_bias_sum.assign(n_vis, 0.0);

    for (std::size_t b = 0; b < batch.rows(); ++b) {
        const MaskTensor mask = masks.next(n_vis, n_hid, rng);
        const detail::CdStats one =
            detail::cd_phases(slice_rows(batch, b, 1), net, mask, mask, rng);
        for (std::size_t i = 0; i < n_vis; ++i)
            for (std::size_t j = 0; j < n_hid; ++j) {
                total.data_exp(i, j) += one.data_exp(i, j);
                total.rec_exp(i, j) += one.rec_exp(i, j);
            }
        for (std::size_t j = 0; j < n_hid; ++j) {
            total.hidden_probs(b, j) = one.hidden_probs(0, j);
            total.hidden_bias_sum[j] += one.hidden_bias_sum[j];
        }
        for (std::size_t i = 0; i < n_vis; ++i) {
            total.visible_probs(b, i) = one.visible_probs(0, i);
            total.visible_bias_sum[i] += one.visible_bias_sum[i];
        }
        total.squared_error += one.squared_error;
    }
    return total;
}

// Delta rule on the data-phase hidden activation probabilities. Scores pass
// through the same activation block the hardware readout uses.
void apply_readout_delta(SsmNetwork& net, const Matrix& hidden_probs, const int* labels,
                         std::size_t count, double learn_rate) {
    const std::size_t n_hid = net.readout.rows();
    const std::size_t n_out = net.readout.cols();
    Matrix grad(n_hid, n_out);
    for (std::size_t b = 0; b < count; ++b) {
        for (std::size_t k = 0; k < n_out; ++k) {
            double acc = 0.0;
            for (std::size_t j = 0; j < n_hid; ++j)
                acc += hidden_probs(b, j) * net.readout(j, k);
            const double score = activation_probability(acc);
            const double target = labels[b] == static_cast<int>(k) ? 1.0 : 0.0;
            const double err = target - score;
            for (std::size_t j = 0; j < n_hid; ++j) grad(j, k) += hidden_probs(b, j) * err;
        }
    }
    for (std::size_t j = 0; j < n_hid; ++j)
        for (std::size_t k = 0; k < n_out; ++k)
            net.readout(j, k) += learn_rate * grad(j, k) / static_cast<double>(count);
}

}  // namespace

TrainResult train(const Matrix& dataset, const std::vector<int>* labels, const SsmConfig& cfg) {
    BernoulliMaskSource masks(cfg.p);
    return train(dataset, labels, cfg, masks);
}

TrainResult train(const Matrix& dataset, const std::vector<int>* labels, const SsmConfig& cfg,
                  MaskSource& masks) {
    cfg.validate();
    require(dataset.rows() >= 1, "train: dataset is empty");
    require(dataset.cols() == cfg.num_visible,
            "train: dataset width " + std::to_string(dataset.cols()) + " does not match " +
                std::to_string(cfg.num_visible) + " visible units");
    check_unit_range(dataset, "train: dataset");
    if (labels) {
        require(labels->size() == dataset.rows(), "train: label count " +
                                                      std::to_string(labels->size()) +
                                                      " does not match dataset rows");
        for (std::size_t i = 0; i < labels->size(); ++i)
            require((*labels)[i] >= 0 && (*labels)[i] < static_cast<int>(cfg.num_outputs),
                    "train: label at row " + std::to_string(i) + " outside [0, num_outputs)");
    }

    RngStream rng(cfg.seed);
    TrainResult out;
    out.network = init_network(cfg, rng);
    out.network.p = masks.reliability();

    const std::size_t n = dataset.rows();
    const std::size_t n_vis = cfg.num_visible;
    const std::size_t n_hid = cfg.num_hidden;
    const std::size_t bsz = std::min(cfg.batch_size, n);
    SsmNetwork& net = out.network;

    for (std::size_t epoch = 0; epoch < cfg.num_epochs; ++epoch) {
        MaskTensor epoch_mask;
        if (cfg.mask_refresh == MaskRefresh::per_epoch)
            epoch_mask = masks.next(n_vis, n_hid, rng);

        double sq_err = 0.0;
        double abs_delta_sum = 0.0;
        std::size_t delta_entries = 0;

        // Inputs, labels and masks were validated up front, so a validation
        // failure inside the epoch can only mean the weights blew up.
        try {
            for (std::size_t start = 0; start < n; start += bsz) {
                const std::size_t count = std::min(bsz, n - start);
                const Matrix batch = slice_rows(dataset, start, count);

                detail::CdStats stats;
                switch (cfg.mask_refresh) {
                    case MaskRefresh::per_epoch:
                        stats = detail::cd_phases(batch, net, epoch_mask, epoch_mask, rng);
                        break;
                    case MaskRefresh::per_phase: {
                        const MaskTensor m_data = masks.next(n_vis, n_hid, rng);
                        const MaskTensor m_rec = masks.next(n_vis, n_hid, rng);
                        stats = detail::cd_phases(batch, net, m_data, m_rec, rng);
                        break;
                    }
                    case MaskRefresh::per_example:
                        stats = cd_per_example(batch, net, masks, rng);
                        break;
                }

                const Matrix delta = detail::weight_delta_from(stats.data_exp, stats.rec_exp,
                                                               cfg.learn_rate, count);
                for (std::size_t i = 0; i < n_vis; ++i)
                    for (std::size_t j = 0; j < n_hid; ++j) {
                        net.weights(i, j) += delta(i, j);
                        abs_delta_sum += std::abs(delta(i, j));
                    }
                delta_entries += delta.size();

                if (cfg.update_biases) {
                    for (std::size_t j = 0; j < n_hid; ++j)
                        net.bias_hidden[j] += cfg.learn_rate * stats.hidden_bias_sum[j] /
                                              static_cast<double>(count);
                    for (std::size_t i = 0; i < n_vis; ++i)
                        net.bias_visible[i] += cfg.learn_rate * stats.visible_bias_sum[i] /
                                               static_cast<double>(count);
                }
                if (labels)
                    apply_readout_delta(net, stats.hidden_probs, labels->data() + start, count,
                                        cfg.learn_rate);
                sq_err += stats.squared_error;
            }
        } catch (const ValidationError&) {
            throw DivergedError("training diverged at epoch " + std::to_string(epoch), epoch);
        }

        for (double w : net.weights.values())
            if (!std::isfinite(w))
                throw DivergedError("training diverged at epoch " + std::to_string(epoch), epoch);

        EpochMetrics m;
        m.epoch = epoch;
        m.reconstruction_error = sq_err / static_cast<double>(n * n_vis);
        m.mean_abs_weight_delta =
            delta_entries > 0 ? abs_delta_sum / static_cast<double>(delta_entries) : 0.0;
        out.metrics.push_back(m);
    }
    return out;
}

}  // namespace ssm
