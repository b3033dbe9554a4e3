#include "ltccp/nn/activations.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

namespace ltccp::nn {

double sigmoid(double x) {
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

void sigmoid_inplace(std::span<double> xs) {
    for (double& x : xs) x = sigmoid(x);
}

void tanh_inplace(std::span<double> xs) {
    for (double& x : xs) x = std::tanh(x);
}

void softmax(std::span<const double> logits, std::span<double> out) {
    assert(!logits.empty() && logits.size() == out.size());
    const double top = *std::max_element(logits.begin(), logits.end());
    double total = 0.0;
    for (std::size_t i = 0; i < logits.size(); ++i) {
        out[i] = std::exp(logits[i] - top);
        total += out[i];
    }
    for (double& p : out) p /= total;
}

double log_sum_exp(std::span<const double> logits) {
    assert(!logits.empty());
    const double top = *std::max_element(logits.begin(), logits.end());
    double total = 0.0;
    for (double l : logits) total += std::exp(l - top);
    return top + std::log(total);
}

}  // namespace ltccp::nn
