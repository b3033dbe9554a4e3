#include "ltccp/models/prediction_io.hpp"

#include "ltccp/data/io.hpp"
#include "ltccp/errors.hpp"

namespace ltccp::models {

void write_predictions(const std::filesystem::path& path, std::span<const Prediction> predictions,
                       const eval::GroundTruth* truth) {
    data::OutputFile out(path);
    for (const auto& p : predictions) {
        const std::vector<double>* obs = nullptr;
        if (truth) {
            const auto it = truth->find(p.paper_id);
            if (it != truth->end()) obs = &it->second;
        }
        for (std::size_t k = 0; k < p.predicted.size(); ++k) {
            nlohmann::json j{{"paper_id", p.paper_id}, {"t", k + 1}, {"predicted", p.predicted[k]}};
            if (obs && k < obs->size()) j["observed"] = (*obs)[k];
            out.write(j.dump());
            out.write("\n");
        }
    }
    out.close();
}

std::vector<Prediction> read_predictions(const std::filesystem::path& path) {
    data::LineReader reader(path);
    std::vector<Prediction> out;
    std::string line;
    while (reader.next(line)) {
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        const auto where = path.string() + ":" + std::to_string(reader.line_number());
        try {
            const auto j = nlohmann::json::parse(line);
            const auto id = j.at("paper_id").get<std::string>();
            const auto t = j.at("t").get<std::size_t>();
            const auto v = j.at("predicted").get<double>();
            if (t == 1) {
                out.push_back({id, {}, {}});
            } else if (out.empty() || out.back().paper_id != id || out.back().predicted.size() + 1 != t) {
                throw SchemaError(where + ": horizon offsets of " + id + " are not contiguous from 1");
            }
            out.back().predicted.push_back(v);
        } catch (const nlohmann::json::exception& e) {
            throw SchemaError(where + ": " + e.what());
        }
    }
    return out;
}

}  // namespace ltccp::models
