#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include "ltccp/eval/metrics.hpp"
#include "ltccp/prediction.hpp"

namespace ltccp::models {

/// One {"paper_id", "t", "predicted", "observed"} line per paper and horizon
/// offset. "observed" is written only when the truth has the paper.
void write_predictions(const std::filesystem::path& path, std::span<const Prediction> predictions,
                       const eval::GroundTruth* truth = nullptr);

/// Inverse of write_predictions (observed values are ignored). Lines of a
/// paper must be contiguous with t = 1, 2, ...; throws SchemaError otherwise.
std::vector<Prediction> read_predictions(const std::filesystem::path& path);

}  // namespace ltccp::models
