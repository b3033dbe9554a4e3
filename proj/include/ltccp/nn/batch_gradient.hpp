#pragma once

#include <span>
#include <vector>

#include "ltccp/nn/stacked_model.hpp"
#include "ltccp/parallel.hpp"

namespace ltccp::nn {

/// One training sequence with its per-step supervision.
struct SequenceExample {
    std::vector<Vector> inputs;
    StepTargets targets;
};

struct BatchGradient {
    GradientSet grad;  // summed over the batch
    double loss_sum = 0.0;
};

/// Sum of per-sequence losses and gradients. Per-sequence work runs in
/// parallel under Execution::parallel; the reduction is always performed
/// serially in batch order, so both modes return identical bits.
BatchGradient batch_gradient(const StackedModelParams& model, std::span<const SequenceExample> batch,
                             Execution exec = Execution::parallel);

/// Sum of per-sequence losses without gradients.
double batch_loss(const StackedModelParams& model, std::span<const SequenceExample> batch,
                  Execution exec = Execution::parallel);

}  // namespace ltccp::nn
