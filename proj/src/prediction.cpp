#include "ltccp/prediction.hpp"

#include <algorithm>
#include <cmath>

namespace ltccp {

void clamp_monotone(std::span<double> predicted, double last_observed) {
    double floor = std::max(last_observed, 0.0);
    for (double& v : predicted) {
        v = std::max(v, floor);
        floor = v;
    }
}

bool satisfies_contract(std::span<const double> predicted, double last_observed) {
    double prev = last_observed;
    for (const double v : predicted) {
        if (!std::isfinite(v) || v < prev || v < 0) return false;
        prev = v;
    }
    return true;
}

}  // namespace ltccp
