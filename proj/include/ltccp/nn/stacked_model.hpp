#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

#include "ltccp/nn/lstm_cell.hpp"
#include "ltccp/nn/matrix.hpp"

namespace ltccp::nn {

inline constexpr std::size_t kNumLayers = 2;

/// Two stacked LSTM layers followed by an affine readout and a softmax over
/// count bins. Layer 2 consumes the hidden sequence of layer 1.
struct StackedModelParams {
    std::array<LstmCellParams, kNumLayers> layers;
    Matrix readout_w;  // num_bins x hidden_dim(layer 2)
    Vector readout_b;
    Vector bin_edges;

    std::size_t input_dim() const { return layers[0].input_dim; }
    std::size_t num_bins() const { return bin_edges.size() + 1; }

    static StackedModelParams zeros(std::size_t input_dim, std::size_t hidden1, std::size_t hidden2,
                                    Vector bin_edges);

    void validate() const;

    bool operator==(const StackedModelParams&) const = default;
};

/// Loss gradients, shape-congruent with the trainable tensors of StackedModelParams.
struct GradientSet {
    std::array<LstmCellParams, kNumLayers> layers;
    Matrix readout_w;
    Vector readout_b;

    static GradientSet zeros_like(const StackedModelParams& model);

    /// this += other
    void accumulate(const GradientSet& other);
    void scale(double factor);
};

/// Visits every trainable tensor as (name, span) in a fixed order shared by
/// StackedModelParams and GradientSet.
template <typename P, typename F>
    requires std::is_same_v<std::remove_const_t<P>, StackedModelParams> ||
             std::is_same_v<std::remove_const_t<P>, GradientSet>
void visit_tensors(P& p, F&& f) {
    for (std::size_t l = 0; l < kNumLayers; ++l) {
        visit_tensors(p.layers[l], [&](std::string_view name, auto span) {
            f("layer" + std::to_string(l + 1) + "." + std::string(name), span);
        });
    }
    f(std::string{"readout_w"}, p.readout_w.values());
    f(std::string{"readout_b"}, std::span{p.readout_b});
}

std::size_t parameter_count(const StackedModelParams& model);

/// Weights uniform in +-1/sqrt(fan_in); biases zero except the forget-gate
/// bias, which starts at +1.
StackedModelParams init_model(std::size_t input_dim, std::size_t hidden1, std::size_t hidden2, Vector bin_edges,
                              std::uint64_t seed);

/// Per-step supervision: target bin and whether the step contributes to the loss.
struct StepTargets {
    std::vector<std::size_t> bins;
    std::vector<bool> supervised;
};

struct ForwardCache {
    std::array<std::vector<LstmStepCache>, kNumLayers> steps;
    std::vector<Vector> logits;  // readout pre-softmax per step
    std::vector<Vector> probs;   // readout distribution per step
};

/// Runs both layers over `seq` from zero initial states. Pure function.
ForwardCache stacked_forward(const StackedModelParams& model, std::span<const Vector> seq);

/// Continues a rollout by one step from explicit per-layer states; used for
/// autoregressive prediction.
struct RolloutState {
    std::array<LstmState, kNumLayers> layers;
};
RolloutState initial_rollout_state(const StackedModelParams& model);
Vector stacked_step(const StackedModelParams& model, std::span<const double> x, RolloutState& state);

/// Mean negative log-likelihood of the target bins over supervised steps.
double sequence_loss(std::span<const Vector> probs, const StepTargets& targets);

/// Same quantity evaluated from the cached logits with log-sum-exp.
double sequence_loss(const ForwardCache& cache, const StepTargets& targets);

/// Exact gradient of sequence_loss through both layers and all steps.
GradientSet backward(const StackedModelParams& model, const ForwardCache& cache, const StepTargets& targets);

}  // namespace ltccp::nn
