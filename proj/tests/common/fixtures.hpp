#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "ltccp/nn/batch_gradient.hpp"
#include "ltccp/nn/bins.hpp"
#include "ltccp/nn/stacked_model.hpp"

namespace ltccp::testing {

/// Random parameters drawn wider than the default init so every gate is
/// exercised away from its linear regime.
inline nn::LstmCellParams random_cell(std::size_t input_dim, std::size_t hidden_dim, std::mt19937_64& rng,
                                      double scale = 0.8) {
    std::uniform_real_distribution<double> dist(-scale, scale);
    auto p = nn::LstmCellParams::zeros(input_dim, hidden_dim);
    nn::visit_tensors(p, [&](auto, std::span<double> s) {
        for (double& v : s) v = dist(rng);
    });
    return p;
}

inline nn::StackedModelParams random_model(std::size_t input_dim, std::size_t hidden, std::size_t num_bins,
                                           std::uint64_t seed, double scale = 0.8) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-scale, scale);
    auto m = nn::StackedModelParams::zeros(input_dim, hidden, hidden,
                                           nn::log_bin_edges({.num_bins = num_bins, .low = 1.0, .high = 1000.0}));
    nn::visit_tensors(m, [&](const std::string&, std::span<double> s) {
        for (double& v : s) v = dist(rng);
    });
    return m;
}

inline std::vector<nn::Vector> random_sequence(std::size_t steps, std::size_t dim, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> dist(-1.5, 1.5);
    std::vector<nn::Vector> seq(steps, nn::Vector(dim));
    for (auto& x : seq)
        for (double& v : x) v = dist(rng);
    return seq;
}

/// Random targets; the last `supervised` steps carry loss.
inline nn::SequenceExample random_example(std::size_t steps, std::size_t dim, std::size_t num_bins,
                                          std::size_t supervised, std::mt19937_64& rng) {
    nn::SequenceExample ex;
    ex.inputs = random_sequence(steps, dim, rng);
    std::uniform_int_distribution<std::size_t> bin(0, num_bins - 1);
    for (std::size_t t = 0; t < steps; ++t) {
        ex.targets.bins.push_back(bin(rng));
        ex.targets.supervised.push_back(t + supervised >= steps);
    }
    return ex;
}

}  // namespace ltccp::testing
