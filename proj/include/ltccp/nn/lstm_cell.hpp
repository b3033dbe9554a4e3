#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <type_traits>

#include "ltccp/nn/matrix.hpp"

namespace ltccp::nn {

/// Parameters of one LSTM layer. Each weight matrix has shape
/// hidden_dim x (hidden_dim + input_dim) and acts on the concatenation
/// [h_prev, x]; the first hidden_dim columns multiply h_prev.
struct LstmCellParams {
    std::size_t input_dim = 0;
    std::size_t hidden_dim = 0;

    Matrix w_forget;
    Matrix w_update;
    Matrix w_candidate;
    Matrix w_output;
    Vector b_forget;
    Vector b_update;
    Vector b_candidate;
    Vector b_output;

    static LstmCellParams zeros(std::size_t input_dim, std::size_t hidden_dim);

    std::size_t concat_dim() const { return hidden_dim + input_dim; }

    /// Throws StructuralError naming the first tensor whose shape disagrees
    /// with (input_dim, hidden_dim).
    void validate() const;

    bool operator==(const LstmCellParams&) const = default;
};

/// Calls f(name, span) for every parameter tensor in a fixed order.
template <typename Params, typename F>
    requires std::is_same_v<std::remove_const_t<Params>, LstmCellParams>
void visit_tensors(Params& p, F&& f) {
    f(std::string_view{"w_forget"}, p.w_forget.values());
    f(std::string_view{"w_update"}, p.w_update.values());
    f(std::string_view{"w_candidate"}, p.w_candidate.values());
    f(std::string_view{"w_output"}, p.w_output.values());
    f(std::string_view{"b_forget"}, std::span{p.b_forget});
    f(std::string_view{"b_update"}, std::span{p.b_update});
    f(std::string_view{"b_candidate"}, std::span{p.b_candidate});
    f(std::string_view{"b_output"}, std::span{p.b_output});
}

/// Working memory h and long-term memory c.
struct LstmState {
    Vector h;
    Vector c;

    static LstmState zeros(std::size_t hidden_dim) { return {Vector(hidden_dim, 0.0), Vector(hidden_dim, 0.0)}; }
};

/// Everything the backward pass needs from one forward step.
struct LstmStepCache {
    Vector concat;     // [h_prev, x]
    Vector c_prev;
    Vector forget;     // forget gate activation
    Vector update;     // update gate activation
    Vector candidate;  // tanh(W_c [h_prev, x] + b_c)
    Vector output;     // output gate activation
    Vector c;
    Vector tanh_c;
    Vector h;
};

struct LstmStep {
    LstmState next;
    LstmStepCache cache;
};

/// One recurrent step:
///   f = sigma(W_f z + b_f), u = sigma(W_u z + b_u), g = tanh(W_c z + b_c),
///   o = sigma(W_r z + b_r), c = f * c_prev + u * g, h = o * tanh(c),
/// with z = [h_prev, x].
LstmStep lstm_cell_forward(const LstmCellParams& params, std::span<const double> x, const LstmState& prev);

/// Backpropagates one step. `dh` and `dc` are the total loss gradients
/// flowing into h and c of this step. Parameter gradients are accumulated
/// into `grad`; `dh_prev`, `dc_prev` and `dx` are overwritten.
void lstm_cell_backward(const LstmCellParams& params, const LstmStepCache& cache, std::span<const double> dh,
                        std::span<const double> dc, LstmCellParams& grad, std::span<double> dh_prev,
                        std::span<double> dc_prev, std::span<double> dx);

}  // namespace ltccp::nn
