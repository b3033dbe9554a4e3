#include "ltccp/nn/grad_check.hpp"

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

namespace ltccp::nn {

namespace {

using Real = long double;

Real logistic(Real x) {
    if (x >= 0) return 1.0L / (1.0L + std::exp(-x));
    const Real e = std::exp(x);
    return e / (1.0L + e);
}

Real pre_activation(const Matrix& w, const Vector& b, std::size_t row, const std::vector<Real>& z) {
    Real s = b[row];
    const auto r = w.row(row);
    for (std::size_t j = 0; j < z.size(); ++j) s += static_cast<Real>(r[j]) * z[j];
    return s;
}

}  // namespace

long double extended_sequence_loss(const StackedModelParams& model, const SequenceExample& example) {
    std::array<std::vector<Real>, kNumLayers> h, c;
    for (std::size_t l = 0; l < kNumLayers; ++l) {
        h[l].assign(model.layers[l].hidden_dim, 0.0L);
        c[l].assign(model.layers[l].hidden_dim, 0.0L);
    }
    Real total = 0.0L;
    std::size_t supervised = 0;
    for (std::size_t t = 0; t < example.inputs.size(); ++t) {
        std::vector<Real> input(example.inputs[t].begin(), example.inputs[t].end());
        for (std::size_t l = 0; l < kNumLayers; ++l) {
            const auto& p = model.layers[l];
            std::vector<Real> z(h[l]);
            z.insert(z.end(), input.begin(), input.end());
            for (std::size_t i = 0; i < p.hidden_dim; ++i) {
                const Real f = logistic(pre_activation(p.w_forget, p.b_forget, i, z));
                const Real u = logistic(pre_activation(p.w_update, p.b_update, i, z));
                const Real g = std::tanh(pre_activation(p.w_candidate, p.b_candidate, i, z));
                const Real o = logistic(pre_activation(p.w_output, p.b_output, i, z));
                c[l][i] = f * c[l][i] + u * g;
                h[l][i] = o * std::tanh(c[l][i]);
            }
            input = h[l];
        }
        if (!example.targets.supervised[t]) continue;
        std::vector<Real> logits(model.num_bins());
        Real top = -INFINITY;
        for (std::size_t k = 0; k < logits.size(); ++k) {
            logits[k] = pre_activation(model.readout_w, model.readout_b, k, input);
            top = std::max(top, logits[k]);
        }
        Real z = 0.0L;
        for (Real l : logits) z += std::exp(l - top);
        total += top + std::log(z) - logits[example.targets.bins[t]];
        ++supervised;
    }
    return total / static_cast<Real>(supervised);
}

GradCheckResult grad_check(const StackedModelParams& model, const SequenceExample& example,
                           const GradientSet& analytic, double fd_step, ProbePrecision precision) {
    StackedModelParams probe = model;
    const auto loss_at = [&]() -> Real {
        if (precision == ProbePrecision::extended) return extended_sequence_loss(probe, example);
        return sequence_loss(stacked_forward(probe, example.inputs), example.targets);
    };

    std::vector<std::span<const double>> grads;
    visit_tensors(analytic, [&](const std::string&, std::span<const double> s) { grads.push_back(s); });

    GradCheckResult result;
    std::size_t k = 0;
    visit_tensors(probe, [&](const std::string& name, std::span<double> values) {
        const auto g = grads[k++];
        for (std::size_t i = 0; i < values.size(); ++i) {
            const double saved = values[i];
            values[i] = saved + fd_step;
            const Real plus = loss_at();
            values[i] = saved - fd_step;
            const Real minus = loss_at();
            values[i] = saved;

            const double numeric = static_cast<double>((plus - minus) / (2.0L * static_cast<Real>(fd_step)));
            const double denom = std::max({std::abs(g[i]), std::abs(numeric), 1e-8});
            const double rel = std::abs(g[i] - numeric) / denom;
            ++result.parameters_checked;
            if (rel > result.max_relative_error) {
                result.max_relative_error = rel;
                result.worst_tensor = name;
                result.worst_index = i;
                result.analytic = g[i];
                result.numeric = numeric;
            }
        }
    });
    return result;
}

GradCheckResult grad_check(const StackedModelParams& model, const SequenceExample& example, double fd_step,
                           ProbePrecision precision) {
    const auto cache = stacked_forward(model, example.inputs);
    return grad_check(model, example, backward(model, cache, example.targets), fd_step, precision);
}

}  // namespace ltccp::nn
