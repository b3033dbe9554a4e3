#include "ltccp/nn/bins.hpp"

#include <algorithm>
#include <cmath>

#include "ltccp/errors.hpp"

namespace ltccp::nn {

Vector log_bin_edges(const BinConfig& config) {
    if (config.num_bins < 2) throw ConfigError("bins: need at least 2 bins");
    if (!(config.low > 0.0) || !(config.high > config.low)) throw ConfigError("bins: need 0 < low < high");
    const std::size_t n = config.num_bins - 1;
    Vector edges(n);
    if (n == 1) {
        edges[0] = config.low;
        return edges;
    }
    const double log_lo = std::log(config.low);
    const double log_hi = std::log(config.high);
    for (std::size_t i = 0; i < n; ++i) {
        edges[i] = std::exp(log_lo + (log_hi - log_lo) * static_cast<double>(i) / static_cast<double>(n - 1));
    }
    edges.front() = config.low;
    edges.back() = config.high;
    return edges;
}

void validate_bin_edges(std::span<const double> edges) {
    if (edges.empty()) throw StructuralError("bin edges: empty");
    for (std::size_t i = 0; i < edges.size(); ++i) {
        if (!std::isfinite(edges[i])) throw StructuralError("bin edges: non-finite edge");
        if (i > 0 && !(edges[i] > edges[i - 1])) throw StructuralError("bin edges: not strictly increasing");
    }
}

std::size_t bin_index(std::span<const double> edges, double value) {
    return static_cast<std::size_t>(std::upper_bound(edges.begin(), edges.end(), value) - edges.begin());
}

Vector bin_representatives(std::span<const double> edges) {
    Vector reps(edges.size() + 1);
    reps[0] = 0.0;
    for (std::size_t i = 1; i < edges.size(); ++i) reps[i] = std::sqrt(edges[i - 1] * edges[i]);
    reps.back() = 1.5 * edges.back();
    return reps;
}

double expected_count(std::span<const double> probs, std::span<const double> representatives) {
    double total = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) total += probs[i] * representatives[i];
    return total;
}

}  // namespace ltccp::nn
