#pragma once

#include <cstddef>
#include <string>

#include "ltccp/nn/batch_gradient.hpp"
#include "ltccp/nn/stacked_model.hpp"

namespace ltccp::nn {

/// Arithmetic used to evaluate the loss inside the finite-difference probe.
/// Parameters and the step are always doubles. In plain double arithmetic the
/// probe carries roughly ulp(loss) / (2 * step) of rounding noise (about 2e-11
/// at step 1e-5), which swamps components below ~1e-7; `extended` evaluates
/// the forward pass in long double to push that floor down by ~2000x.
enum class ProbePrecision { double_precision, extended };

struct GradCheckResult {
    double max_relative_error = 0.0;
    std::string worst_tensor;
    std::size_t worst_index = 0;
    double analytic = 0.0;
    double numeric = 0.0;
    std::size_t parameters_checked = 0;
};

/// Compares `analytic` against central differences of the sequence loss for
/// every parameter. Relative error is |a - n| / max(|a|, |n|, 1e-8).
GradCheckResult grad_check(const StackedModelParams& model, const SequenceExample& example,
                           const GradientSet& analytic, double fd_step,
                           ProbePrecision precision = ProbePrecision::extended);

/// Same, with the analytic gradient taken from backward().
GradCheckResult grad_check(const StackedModelParams& model, const SequenceExample& example, double fd_step,
                           ProbePrecision precision = ProbePrecision::extended);

/// Sequence loss evaluated with every intermediate in long double.
long double extended_sequence_loss(const StackedModelParams& model, const SequenceExample& example);

}  // namespace ltccp::nn
