#pragma once

#include <filesystem>

#include <json.hpp>

#include "ltccp/nn/stacked_model.hpp"

namespace ltccp::nn {

inline constexpr const char* kCheckpointFormat = "ltccp-lstm-checkpoint";
inline constexpr int kCheckpointVersion = 1;

/// Self-describing JSON document: format tag, version, dimensions, bin edges
/// and every tensor in row-major order. Doubles are written in shortest
/// round-trip form, so save -> load is bit-exact.
nlohmann::json checkpoint_to_json(const StackedModelParams& model, const nlohmann::json& metadata = {});

/// Throws SchemaError on a missing field or wrong format/version tag and
/// StructuralError when the tensors do not compose.
StackedModelParams checkpoint_from_json(const nlohmann::json& doc);

void save_checkpoint(const std::filesystem::path& path, const StackedModelParams& model,
                     const nlohmann::json& metadata = {});

struct LoadedCheckpoint {
    StackedModelParams model;
    nlohmann::json metadata;
};
LoadedCheckpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace ltccp::nn
