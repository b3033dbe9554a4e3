#include "ltccp/nn/checkpoint.hpp"

#include <fstream>
#include <string>

#include "ltccp/errors.hpp"

namespace ltccp::nn {

using nlohmann::json;

namespace {

json layer_to_json(const LstmCellParams& p) {
    json j;
    j["input_dim"] = p.input_dim;
    j["hidden_dim"] = p.hidden_dim;
    visit_tensors(p, [&](std::string_view name, std::span<const double> values) {
        j[std::string(name)] = std::vector<double>(values.begin(), values.end());
    });
    return j;
}

void read_tensor(const json& j, const std::string& name, std::span<double> dst) {
    if (!j.contains(name) || !j[name].is_array()) throw SchemaError("checkpoint: missing tensor " + name);
    const auto& arr = j[name];
    if (arr.size() != dst.size()) {
        throw StructuralError("checkpoint: tensor " + name + " has " + std::to_string(arr.size()) +
                              " entries, expected " + std::to_string(dst.size()));
    }
    for (std::size_t i = 0; i < dst.size(); ++i) {
        if (!arr[i].is_number()) throw SchemaError("checkpoint: non-numeric entry in " + name);
        dst[i] = arr[i].get<double>();
    }
}

std::size_t read_dim(const json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_number_unsigned()) throw SchemaError(std::string("checkpoint: missing ") + key);
    return j[key].get<std::size_t>();
}

}  // namespace

json checkpoint_to_json(const StackedModelParams& model, const json& metadata) {
    model.validate();
    json doc;
    doc["format"] = kCheckpointFormat;
    doc["version"] = kCheckpointVersion;
    doc["input_dim"] = model.input_dim();
    doc["num_bins"] = model.num_bins();
    doc["bin_edges"] = model.bin_edges;
    doc["layers"] = json::array();
    for (const auto& layer : model.layers) doc["layers"].push_back(layer_to_json(layer));
    doc["readout_w"] = std::vector<double>(model.readout_w.values().begin(), model.readout_w.values().end());
    doc["readout_b"] = model.readout_b;
    if (!metadata.is_null()) doc["metadata"] = metadata;
    return doc;
}

StackedModelParams checkpoint_from_json(const json& doc) {
    if (!doc.is_object() || doc.value("format", "") != kCheckpointFormat) {
        throw SchemaError("checkpoint: not an ltccp checkpoint");
    }
    if (doc.value("version", -1) != kCheckpointVersion) throw SchemaError("checkpoint: unsupported version");
    if (!doc.contains("layers") || !doc["layers"].is_array() || doc["layers"].size() != kNumLayers) {
        throw SchemaError("checkpoint: expected exactly two layers");
    }
    if (!doc.contains("bin_edges") || !doc["bin_edges"].is_array()) throw SchemaError("checkpoint: missing bin_edges");

    Vector edges;
    for (const auto& e : doc["bin_edges"]) {
        if (!e.is_number()) throw SchemaError("checkpoint: non-numeric bin edge");
        edges.push_back(e.get<double>());
    }
    const auto& l1 = doc["layers"][0];
    const auto& l2 = doc["layers"][1];
    auto model = StackedModelParams::zeros(read_dim(l1, "input_dim"), read_dim(l1, "hidden_dim"),
                                           read_dim(l2, "hidden_dim"), std::move(edges));
    if (read_dim(l2, "input_dim") != model.layers[0].hidden_dim) {
        throw StructuralError("checkpoint: layer 2 input_dim does not match layer 1 hidden_dim");
    }
    for (std::size_t l = 0; l < kNumLayers; ++l) {
        visit_tensors(model.layers[l], [&](std::string_view name, std::span<double> dst) {
            read_tensor(doc["layers"][l], std::string(name), dst);
        });
    }
    read_tensor(doc, "readout_w", model.readout_w.values());
    read_tensor(doc, "readout_b", model.readout_b);
    model.validate();
    return model;
}

void save_checkpoint(const std::filesystem::path& path, const StackedModelParams& model, const json& metadata) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("checkpoint: cannot open " + path.string() + " for writing");
    out << checkpoint_to_json(model, metadata).dump(1) << '\n';
}

LoadedCheckpoint load_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw MissingInputError("checkpoint: cannot open " + path.string());
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw SchemaError("checkpoint: " + std::string(e.what()));
    }
    auto model = checkpoint_from_json(doc);
    return {std::move(model), doc.value("metadata", json{})};
}

}  // namespace ltccp::nn
