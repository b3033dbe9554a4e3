#include "ltccp/nn/stacked_model.hpp"

#include <cmath>
#include <random>

#include "ltccp/errors.hpp"
#include "ltccp/nn/activations.hpp"
#include "ltccp/nn/bins.hpp"

namespace ltccp::nn {

StackedModelParams StackedModelParams::zeros(std::size_t input_dim, std::size_t hidden1, std::size_t hidden2,
                                             Vector bin_edges) {
    StackedModelParams m;
    m.layers[0] = LstmCellParams::zeros(input_dim, hidden1);
    m.layers[1] = LstmCellParams::zeros(hidden1, hidden2);
    m.bin_edges = std::move(bin_edges);
    m.readout_w = Matrix(m.num_bins(), hidden2);
    m.readout_b = Vector(m.num_bins(), 0.0);
    return m;
}

void StackedModelParams::validate() const {
    for (const auto& layer : layers) layer.validate();
    if (layers[1].input_dim != layers[0].hidden_dim) {
        throw StructuralError("stacked model: layer 2 input_dim " + std::to_string(layers[1].input_dim) +
                              " != layer 1 hidden_dim " + std::to_string(layers[0].hidden_dim));
    }
    validate_bin_edges(bin_edges);
    if (readout_w.rows() != num_bins() || readout_w.cols() != layers[1].hidden_dim) {
        throw StructuralError("stacked model: readout_w shape does not match num_bins x hidden_dim");
    }
    if (readout_b.size() != num_bins()) throw StructuralError("stacked model: readout_b length != num_bins");
}

GradientSet GradientSet::zeros_like(const StackedModelParams& model) {
    GradientSet g;
    for (std::size_t l = 0; l < kNumLayers; ++l) {
        g.layers[l] = LstmCellParams::zeros(model.layers[l].input_dim, model.layers[l].hidden_dim);
    }
    g.readout_w = Matrix(model.readout_w.rows(), model.readout_w.cols());
    g.readout_b = Vector(model.readout_b.size(), 0.0);
    return g;
}

void GradientSet::accumulate(const GradientSet& other) {
    std::vector<std::span<const double>> src;
    visit_tensors(other, [&](const std::string&, auto span) { src.push_back(span); });
    std::size_t k = 0;
    visit_tensors(*this, [&](const std::string&, std::span<double> dst) {
        const auto s = src[k++];
        for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += s[i];
    });
}

void GradientSet::scale(double factor) {
    visit_tensors(*this, [&](const std::string&, std::span<double> dst) {
        for (double& v : dst) v *= factor;
    });
}

std::size_t parameter_count(const StackedModelParams& model) {
    std::size_t n = 0;
    visit_tensors(model, [&](const std::string&, auto span) { n += span.size(); });
    return n;
}

StackedModelParams init_model(std::size_t input_dim, std::size_t hidden1, std::size_t hidden2, Vector bin_edges,
                              std::uint64_t seed) {
    auto m = StackedModelParams::zeros(input_dim, hidden1, hidden2, std::move(bin_edges));
    m.validate();
    std::mt19937_64 rng(seed);
    const auto fill = [&](Matrix& w, std::size_t fan_in) {
        const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
        std::uniform_real_distribution<double> dist(-bound, bound);
        for (double& v : w.values()) v = dist(rng);
    };
    for (auto& layer : m.layers) {
        fill(layer.w_forget, layer.concat_dim());
        fill(layer.w_update, layer.concat_dim());
        fill(layer.w_candidate, layer.concat_dim());
        fill(layer.w_output, layer.concat_dim());
        std::fill(layer.b_forget.begin(), layer.b_forget.end(), 1.0);
    }
    fill(m.readout_w, hidden2);
    return m;
}

ForwardCache stacked_forward(const StackedModelParams& model, std::span<const Vector> seq) {
    if (seq.empty()) throw UsageError("stacked_forward: empty sequence");
    ForwardCache cache;
    std::array<LstmState, kNumLayers> state;
    for (std::size_t l = 0; l < kNumLayers; ++l) {
        state[l] = LstmState::zeros(model.layers[l].hidden_dim);
        cache.steps[l].reserve(seq.size());
    }
    cache.logits.reserve(seq.size());
    cache.probs.reserve(seq.size());

    for (const auto& x : seq) {
        std::span<const double> input = x;
        for (std::size_t l = 0; l < kNumLayers; ++l) {
            auto step = lstm_cell_forward(model.layers[l], input, state[l]);
            state[l] = std::move(step.next);
            cache.steps[l].push_back(std::move(step.cache));
            input = cache.steps[l].back().h;
        }
        Vector logits(model.num_bins());
        matvec(model.readout_w, input, logits);
        for (std::size_t i = 0; i < logits.size(); ++i) logits[i] += model.readout_b[i];
        Vector probs(logits.size());
        softmax(logits, probs);
        cache.logits.push_back(std::move(logits));
        cache.probs.push_back(std::move(probs));
    }
    return cache;
}

RolloutState initial_rollout_state(const StackedModelParams& model) {
    RolloutState s;
    for (std::size_t l = 0; l < kNumLayers; ++l) s.layers[l] = LstmState::zeros(model.layers[l].hidden_dim);
    return s;
}

Vector stacked_step(const StackedModelParams& model, std::span<const double> x, RolloutState& state) {
    Vector input(x.begin(), x.end());
    for (std::size_t l = 0; l < kNumLayers; ++l) {
        auto step = lstm_cell_forward(model.layers[l], input, state.layers[l]);
        state.layers[l] = std::move(step.next);
        input = state.layers[l].h;
    }
    Vector logits(model.num_bins());
    matvec(model.readout_w, input, logits);
    for (std::size_t i = 0; i < logits.size(); ++i) logits[i] += model.readout_b[i];
    softmax(logits, logits);
    return logits;
}

namespace {

std::size_t supervised_count(const StepTargets& targets, std::size_t steps) {
    if (targets.bins.size() != steps || targets.supervised.size() != steps) {
        throw StructuralError("loss: targets/mask length does not match the number of steps");
    }
    std::size_t n = 0;
    for (bool s : targets.supervised) n += s ? 1 : 0;
    if (n == 0) throw UsageError("loss: mask selects no steps");
    return n;
}

void check_target(std::size_t bin, std::size_t num_bins) {
    if (bin >= num_bins) throw UsageError("loss: target bin out of range");
}

}  // namespace

double sequence_loss(std::span<const Vector> probs, const StepTargets& targets) {
    const std::size_t n = supervised_count(targets, probs.size());
    double total = 0.0;
    for (std::size_t t = 0; t < probs.size(); ++t) {
        if (!targets.supervised[t]) continue;
        check_target(targets.bins[t], probs[t].size());
        total -= std::log(probs[t][targets.bins[t]]);
    }
    return total / static_cast<double>(n);
}

double sequence_loss(const ForwardCache& cache, const StepTargets& targets) {
    const std::size_t n = supervised_count(targets, cache.logits.size());
    double total = 0.0;
    for (std::size_t t = 0; t < cache.logits.size(); ++t) {
        if (!targets.supervised[t]) continue;
        check_target(targets.bins[t], cache.logits[t].size());
        total += log_sum_exp(cache.logits[t]) - cache.logits[t][targets.bins[t]];
    }
    return total / static_cast<double>(n);
}

GradientSet backward(const StackedModelParams& model, const ForwardCache& cache, const StepTargets& targets) {
    const std::size_t steps = cache.probs.size();
    if (steps == 0 || cache.steps[0].size() != steps || cache.steps[1].size() != steps) {
        throw StructuralError("backward: cache is empty or inconsistent");
    }
    for (std::size_t l = 0; l < kNumLayers; ++l) {
        if (cache.steps[l][0].h.size() != model.layers[l].hidden_dim ||
            cache.steps[l][0].concat.size() != model.layers[l].concat_dim()) {
            throw StructuralError("backward: cache was produced by a model of different shape");
        }
    }
    if (cache.probs[0].size() != model.num_bins()) throw StructuralError("backward: cache readout size mismatch");
    const double inv_n = 1.0 / static_cast<double>(supervised_count(targets, steps));

    GradientSet grad = GradientSet::zeros_like(model);

    // Gradient arriving at each step's output h, per layer, from above.
    std::vector<Vector> dh_above(steps, Vector(model.layers[1].hidden_dim, 0.0));
    for (std::size_t t = 0; t < steps; ++t) {
        if (!targets.supervised[t]) continue;
        check_target(targets.bins[t], model.num_bins());
        Vector dlogits = cache.probs[t];
        dlogits[targets.bins[t]] -= 1.0;
        for (double& v : dlogits) v *= inv_n;
        const auto& h_top = cache.steps[1][t].h;
        outer_add(grad.readout_w, dlogits, h_top);
        for (std::size_t i = 0; i < dlogits.size(); ++i) grad.readout_b[i] += dlogits[i];
        matvec_transposed_add(model.readout_w, dlogits, dh_above[t]);
    }

    for (std::size_t l = kNumLayers; l-- > 0;) {
        const auto& params = model.layers[l];
        const std::size_t hidden = params.hidden_dim;
        Vector dh_next(hidden, 0.0), dc_next(hidden, 0.0);
        Vector dh(hidden), dh_prev(hidden), dc_prev(hidden);
        std::vector<Vector> dx(steps, Vector(params.input_dim, 0.0));
        for (std::size_t t = steps; t-- > 0;) {
            for (std::size_t i = 0; i < hidden; ++i) dh[i] = dh_above[t][i] + dh_next[i];
            lstm_cell_backward(params, cache.steps[l][t], dh, dc_next, grad.layers[l], dh_prev, dc_prev, dx[t]);
            dh_next.swap(dh_prev);
            dc_next.swap(dc_prev);
        }
        dh_above = std::move(dx);
    }
    return grad;
}

}  // namespace ltccp::nn
