#pragma once

#include <span>
#include <string>
#include <vector>

#include "ltccp/nn/matrix.hpp"

namespace ltccp {

/// Cumulative-count forecast for one paper at horizon offsets t = 1..H.
struct Prediction {
    std::string paper_id;
    std::vector<double> predicted;
    std::vector<nn::Vector> distribution;  // per-t bin probabilities; empty for the baselines

    bool operator==(const Prediction&) const = default;
};

/// n[t] <- max(n[t], n[t-1], last_observed), and negatives lifted to zero.
void clamp_monotone(std::span<double> predicted, double last_observed);

/// Finite, non-decreasing, and no value below last_observed.
bool satisfies_contract(std::span<const double> predicted, double last_observed);

}  // namespace ltccp
