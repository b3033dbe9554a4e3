#pragma once

#include <span>

namespace ltccp::nn {

/// Logistic function evaluated without overflow for any finite input.
/// Saturates to exactly 0 or 1 only once the result is within an ulp.
double sigmoid(double x);

void sigmoid_inplace(std::span<double> xs);
void tanh_inplace(std::span<double> xs);

/// Max-shifted softmax; `out` may alias `logits`.
void softmax(std::span<const double> logits, std::span<double> out);

/// log(sum(exp(logits))) computed with the max shift.
double log_sum_exp(std::span<const double> logits);

}  // namespace ltccp::nn
