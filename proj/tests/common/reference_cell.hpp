#pragma once

#include <cmath>
#include <vector>

#include "ltccp/nn/lstm_cell.hpp"

namespace ltccp::testing {

// Straight-line evaluation of one LSTM step, written against the raw
// row-major storage and without any of the library's helpers.
struct ReferenceStep {
    std::vector<double> h, c;
};

inline ReferenceStep reference_cell(const nn::LstmCellParams& p, const std::vector<double>& x,
                                    const std::vector<double>& h_prev, const std::vector<double>& c_prev) {
    const std::size_t H = p.hidden_dim, I = p.input_dim, cols = H + I;
    auto pre = [&](const nn::Matrix& w, const nn::Vector& b, std::size_t i) {
        const auto raw = w.values();
        double s = b[i];
        for (std::size_t j = 0; j < H; ++j) s += raw[i * cols + j] * h_prev[j];
        for (std::size_t j = 0; j < I; ++j) s += raw[i * cols + H + j] * x[j];
        return s;
    };
    auto logistic = [](double v) { return 1.0 / (1.0 + std::exp(-v)); };
    ReferenceStep out{std::vector<double>(H), std::vector<double>(H)};
    for (std::size_t i = 0; i < H; ++i) {
        const double f = logistic(pre(p.w_forget, p.b_forget, i));
        const double u = logistic(pre(p.w_update, p.b_update, i));
        const double g = std::tanh(pre(p.w_candidate, p.b_candidate, i));
        const double r = logistic(pre(p.w_output, p.b_output, i));
        out.c[i] = f * c_prev[i] + u * g;
        out.h[i] = r * std::tanh(out.c[i]);
    }
    return out;
}

}  // namespace ltccp::testing
