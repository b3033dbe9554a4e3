#include "ltccp/nn/batch_gradient.hpp"

#include <optional>

#include "ltccp/errors.hpp"

namespace ltccp::nn {

namespace {

struct Partial {
    GradientSet grad;
    double loss = 0.0;
};

Partial sequence_gradient(const StackedModelParams& model, const SequenceExample& ex) {
    const auto cache = stacked_forward(model, ex.inputs);
    return {backward(model, cache, ex.targets), sequence_loss(cache, ex.targets)};
}

}  // namespace

BatchGradient batch_gradient(const StackedModelParams& model, std::span<const SequenceExample> batch,
                             Execution exec) {
    if (batch.empty()) throw UsageError("batch_gradient: empty batch");
    std::vector<std::optional<Partial>> partials(batch.size());
    for_each_index(batch.size(), exec, [&](std::size_t i) { partials[i] = sequence_gradient(model, batch[i]); });

    BatchGradient out{GradientSet::zeros_like(model), 0.0};
    for (const auto& p : partials) {
        out.grad.accumulate(p->grad);
        out.loss_sum += p->loss;
    }
    return out;
}

double batch_loss(const StackedModelParams& model, std::span<const SequenceExample> batch, Execution exec) {
    std::vector<double> losses(batch.size(), 0.0);
    for_each_index(batch.size(), exec, [&](std::size_t i) {
        losses[i] = sequence_loss(stacked_forward(model, batch[i].inputs), batch[i].targets);
    });
    double total = 0.0;
    for (double l : losses) total += l;
    return total;
}

}  // namespace ltccp::nn
