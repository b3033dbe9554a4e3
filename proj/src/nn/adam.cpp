#include "ltccp/nn/adam.hpp"

#include <cmath>
#include <string>

#include "ltccp/errors.hpp"

namespace ltccp::nn {

void adam_update(std::span<const std::span<double>> params, std::span<const std::span<const double>> grads,
                 AdamState& state, const AdamHyper& hyper) {
    if (params.size() != grads.size()) throw StructuralError("adam: parameter/gradient tensor count mismatch");
    std::size_t total = 0;
    for (std::size_t k = 0; k < params.size(); ++k) {
        if (params[k].size() != grads[k].size()) throw StructuralError("adam: tensor shape mismatch");
        total += params[k].size();
    }
    if (state.first_moment.empty()) {
        state.first_moment.assign(total, 0.0);
        state.second_moment.assign(total, 0.0);
    }
    if (state.first_moment.size() != total || state.second_moment.size() != total) {
        throw StructuralError("adam: optimizer state does not match the parameter count");
    }

    const std::uint64_t step = state.step + 1;
    double norm_sq = 0.0;
    for (const auto g : grads) {
        for (double v : g) {
            if (!std::isfinite(v)) throw TrainingError("adam: non-finite gradient at step " + std::to_string(step));
            norm_sq += v * v;
        }
    }
    double scale = 1.0;
    const double norm = std::sqrt(norm_sq);
    if (hyper.clip_norm > 0.0 && norm > hyper.clip_norm) scale = hyper.clip_norm / norm;

    const double bias1 = 1.0 - std::pow(hyper.beta1, static_cast<double>(step));
    const double bias2 = 1.0 - std::pow(hyper.beta2, static_cast<double>(step));
    std::size_t idx = 0;
    for (std::size_t k = 0; k < params.size(); ++k) {
        for (std::size_t i = 0; i < params[k].size(); ++i, ++idx) {
            const double g = grads[k][i] * scale;
            double& m = state.first_moment[idx];
            double& v = state.second_moment[idx];
            m = hyper.beta1 * m + (1.0 - hyper.beta1) * g;
            v = hyper.beta2 * v + (1.0 - hyper.beta2) * g * g;
            const double m_hat = m / bias1;
            const double v_hat = v / bias2;
            params[k][i] -= hyper.learning_rate * m_hat / (std::sqrt(v_hat) + hyper.epsilon);
        }
    }
    state.step = step;
}

void adam_step(StackedModelParams& model, const GradientSet& grads, AdamState& state, const AdamHyper& hyper) {
    std::vector<std::span<double>> params;
    std::vector<std::span<const double>> g;
    visit_tensors(model, [&](const std::string&, std::span<double> s) { params.push_back(s); });
    visit_tensors(grads, [&](const std::string&, std::span<const double> s) { g.push_back(s); });
    adam_update(params, g, state, hyper);
}

double gradient_norm(const GradientSet& grads) {
    double sq = 0.0;
    visit_tensors(grads, [&](const std::string&, std::span<const double> s) {
        for (double v : s) sq += v * v;
    });
    return std::sqrt(sq);
}

}  // namespace ltccp::nn
