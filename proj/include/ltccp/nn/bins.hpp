#pragma once

#include <cstddef>
#include <span>

#include "ltccp/nn/matrix.hpp"

namespace ltccp::nn {

/// Boundaries of the cumulative-count bins the readout classifies into.
/// `edges` of length B-1 define B bins: [0, e0), [e0, e1), ..., [e_{B-2}, inf).
struct BinConfig {
    std::size_t num_bins = 64;
    double low = 1.0;
    double high = 1e5;
};

/// num_bins - 1 edges spaced logarithmically from low to high inclusive.
Vector log_bin_edges(const BinConfig& config);

/// Throws StructuralError unless edges are non-empty, finite and strictly increasing.
void validate_bin_edges(std::span<const double> edges);

/// Index of the bin containing value.
std::size_t bin_index(std::span<const double> edges, double value);

/// Representative count per bin: geometric mean of the bin's edges (0 for the
/// first bin, which starts at 0), and 1.5 x the lower edge for the open last bin.
Vector bin_representatives(std::span<const double> edges);

/// Probability-weighted mean of the bin representatives.
double expected_count(std::span<const double> probs, std::span<const double> representatives);

}  // namespace ltccp::nn
