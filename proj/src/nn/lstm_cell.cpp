#include "ltccp/nn/lstm_cell.hpp"

#include <cmath>
#include <string>

#include "ltccp/errors.hpp"
#include "ltccp/nn/activations.hpp"

namespace ltccp::nn {

LstmCellParams LstmCellParams::zeros(std::size_t input_dim, std::size_t hidden_dim) {
    const std::size_t cols = hidden_dim + input_dim;
    LstmCellParams p;
    p.input_dim = input_dim;
    p.hidden_dim = hidden_dim;
    p.w_forget = Matrix(hidden_dim, cols);
    p.w_update = Matrix(hidden_dim, cols);
    p.w_candidate = Matrix(hidden_dim, cols);
    p.w_output = Matrix(hidden_dim, cols);
    p.b_forget = Vector(hidden_dim, 0.0);
    p.b_update = Vector(hidden_dim, 0.0);
    p.b_candidate = Vector(hidden_dim, 0.0);
    p.b_output = Vector(hidden_dim, 0.0);
    return p;
}

void LstmCellParams::validate() const {
    if (hidden_dim == 0 || input_dim == 0) throw StructuralError("lstm cell: zero input or hidden dimension");
    const auto check_matrix = [&](const char* name, const Matrix& m) {
        if (m.rows() != hidden_dim || m.cols() != concat_dim()) {
            throw StructuralError(std::string("lstm cell: ") + name + " has shape " + std::to_string(m.rows()) +
                                  "x" + std::to_string(m.cols()) + ", expected " + std::to_string(hidden_dim) +
                                  "x" + std::to_string(concat_dim()));
        }
    };
    const auto check_bias = [&](const char* name, const Vector& b) {
        if (b.size() != hidden_dim) {
            throw StructuralError(std::string("lstm cell: ") + name + " has length " + std::to_string(b.size()) +
                                  ", expected " + std::to_string(hidden_dim));
        }
    };
    check_matrix("w_forget", w_forget);
    check_matrix("w_update", w_update);
    check_matrix("w_candidate", w_candidate);
    check_matrix("w_output", w_output);
    check_bias("b_forget", b_forget);
    check_bias("b_update", b_update);
    check_bias("b_candidate", b_candidate);
    check_bias("b_output", b_output);
}

namespace {

void affine(const Matrix& w, const Vector& b, std::span<const double> z, Vector& out) {
    out.resize(w.rows());
    matvec(w, z, out);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += b[i];
}

}  // namespace

LstmStep lstm_cell_forward(const LstmCellParams& params, std::span<const double> x, const LstmState& prev) {
    const std::size_t hidden = params.hidden_dim;
    if (x.size() != params.input_dim) {
        throw StructuralError("lstm cell: input x has length " + std::to_string(x.size()) + ", expected " +
                              std::to_string(params.input_dim));
    }
    if (prev.h.size() != hidden) throw StructuralError("lstm cell: previous state h has wrong length");
    if (prev.c.size() != hidden) throw StructuralError("lstm cell: previous state c has wrong length");

    LstmStep step;
    auto& k = step.cache;
    k.concat.reserve(params.concat_dim());
    k.concat.assign(prev.h.begin(), prev.h.end());
    k.concat.insert(k.concat.end(), x.begin(), x.end());
    k.c_prev = prev.c;

    affine(params.w_forget, params.b_forget, k.concat, k.forget);
    affine(params.w_update, params.b_update, k.concat, k.update);
    affine(params.w_candidate, params.b_candidate, k.concat, k.candidate);
    affine(params.w_output, params.b_output, k.concat, k.output);
    sigmoid_inplace(k.forget);
    sigmoid_inplace(k.update);
    tanh_inplace(k.candidate);
    sigmoid_inplace(k.output);

    k.c.resize(hidden);
    k.tanh_c.resize(hidden);
    k.h.resize(hidden);
    for (std::size_t i = 0; i < hidden; ++i) {
        k.c[i] = k.forget[i] * k.c_prev[i] + k.update[i] * k.candidate[i];
        k.tanh_c[i] = std::tanh(k.c[i]);
        k.h[i] = k.output[i] * k.tanh_c[i];
    }
    step.next = {k.h, k.c};
    return step;
}

void lstm_cell_backward(const LstmCellParams& params, const LstmStepCache& k, std::span<const double> dh,
                        std::span<const double> dc, LstmCellParams& grad, std::span<double> dh_prev,
                        std::span<double> dc_prev, std::span<double> dx) {
    const std::size_t hidden = params.hidden_dim;
    if (dh.size() != hidden || dc.size() != hidden || dh_prev.size() != hidden || dc_prev.size() != hidden ||
        dx.size() != params.input_dim || k.concat.size() != params.concat_dim()) {
        throw StructuralError("lstm cell backward: cache or gradient buffers do not match the cell dimensions");
    }

    Vector d_forget(hidden), d_update(hidden), d_candidate(hidden), d_output(hidden);
    for (std::size_t i = 0; i < hidden; ++i) {
        const double dc_total = dc[i] + dh[i] * k.output[i] * (1.0 - k.tanh_c[i] * k.tanh_c[i]);
        const double go = dh[i] * k.tanh_c[i];
        d_output[i] = go * k.output[i] * (1.0 - k.output[i]);
        d_forget[i] = dc_total * k.c_prev[i] * k.forget[i] * (1.0 - k.forget[i]);
        d_update[i] = dc_total * k.candidate[i] * k.update[i] * (1.0 - k.update[i]);
        d_candidate[i] = dc_total * k.update[i] * (1.0 - k.candidate[i] * k.candidate[i]);
        dc_prev[i] = dc_total * k.forget[i];
    }

    outer_add(grad.w_forget, d_forget, k.concat);
    outer_add(grad.w_update, d_update, k.concat);
    outer_add(grad.w_candidate, d_candidate, k.concat);
    outer_add(grad.w_output, d_output, k.concat);
    for (std::size_t i = 0; i < hidden; ++i) {
        grad.b_forget[i] += d_forget[i];
        grad.b_update[i] += d_update[i];
        grad.b_candidate[i] += d_candidate[i];
        grad.b_output[i] += d_output[i];
    }

    Vector d_concat(params.concat_dim(), 0.0);
    matvec_transposed_add(params.w_forget, d_forget, d_concat);
    matvec_transposed_add(params.w_update, d_update, d_concat);
    matvec_transposed_add(params.w_candidate, d_candidate, d_concat);
    matvec_transposed_add(params.w_output, d_output, d_concat);
    for (std::size_t i = 0; i < hidden; ++i) dh_prev[i] = d_concat[i];
    for (std::size_t j = 0; j < params.input_dim; ++j) dx[j] = d_concat[hidden + j];
}

}  // namespace ltccp::nn
