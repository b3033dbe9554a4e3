#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ltccp/nn/stacked_model.hpp"

namespace ltccp::nn {

struct AdamHyper {
    double learning_rate = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    double clip_norm = 5.0;  // global L2 norm; <= 0 disables clipping
};

struct AdamState {
    std::vector<double> first_moment;
    std::vector<double> second_moment;
    std::uint64_t step = 0;

    bool operator==(const AdamState&) const = default;
};

/// Adam update over an arbitrary list of parameter tensors. The tensors are
/// treated as one flat vector for clipping and moment bookkeeping.
/// Throws TrainingError (carrying the step index) on a non-finite gradient.
void adam_update(std::span<const std::span<double>> params, std::span<const std::span<const double>> grads,
                 AdamState& state, const AdamHyper& hyper);

void adam_step(StackedModelParams& model, const GradientSet& grads, AdamState& state, const AdamHyper& hyper);

/// Global L2 norm across all tensors.
double gradient_norm(const GradientSet& grads);

}  // namespace ltccp::nn
