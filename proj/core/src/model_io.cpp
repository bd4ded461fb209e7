#include "ssrc/model_io.hpp"

#include <fstream>
#include <json.hpp>

#include "ssrc/errors.hpp"

namespace ssrc {

using nlohmann::json;

void save_esn_json(const EsnModel& model, const std::filesystem::path& path) {
    json j;
    j["params"] = {{"reservoir_size", model.params.reservoir_size},
                   {"spectral_radius", model.params.spectral_radius},
                   {"leak", model.params.leak},
                   {"input_scale", model.params.input_scale},
                   {"connectivity", model.params.connectivity},
                   {"ridge", model.params.ridge},
                   {"washout", model.params.washout},
                   {"seed", model.params.seed}};

    json triplets = json::array();
    for (int k = 0; k < model.reservoir.weights.outerSize(); ++k)
        for (Eigen::SparseMatrix<double>::InnerIterator it(model.reservoir.weights, k); it; ++it)
            triplets.push_back({it.row(), it.col(), it.value()});
    j["weights"] = {{"rows", model.reservoir.weights.rows()},
                    {"cols", model.reservoir.weights.cols()},
                    {"triplets", std::move(triplets)}};

    j["input_weights"] = std::vector<double>(
        model.reservoir.input_weights.data(),
        model.reservoir.input_weights.data() + model.reservoir.input_weights.size());
    j["readout"] = std::vector<double>(model.readout.weights.data(),
                                       model.readout.weights.data() + model.readout.weights.size());

    std::ofstream out(path);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    out << j.dump(2) << '\n';
    if (!out) throw IoError("write failed for '" + path.string() + "'");
}

EsnModel load_esn_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ParseError("bad model JSON in '" + path.string() + "': " + e.what());
    }

    try {
        EsnModel model;
        const auto& p = j.at("params");
        model.params.reservoir_size = p.at("reservoir_size").get<int>();
        model.params.spectral_radius = p.at("spectral_radius").get<double>();
        model.params.leak = p.at("leak").get<double>();
        model.params.input_scale = p.at("input_scale").get<double>();
        model.params.connectivity = p.at("connectivity").get<double>();
        model.params.ridge = p.at("ridge").get<double>();
        model.params.washout = p.at("washout").get<int>();
        model.params.seed = p.at("seed").get<std::uint64_t>();

        const auto& w = j.at("weights");
        std::vector<Eigen::Triplet<double>> triplets;
        for (const auto& t : w.at("triplets"))
            triplets.emplace_back(t.at(0).get<int>(), t.at(1).get<int>(), t.at(2).get<double>());
        model.reservoir.weights.resize(w.at("rows").get<int>(), w.at("cols").get<int>());
        model.reservoir.weights.setFromTriplets(triplets.begin(), triplets.end());

        const auto win = j.at("input_weights").get<std::vector<double>>();
        model.reservoir.input_weights =
            Eigen::Map<const Eigen::VectorXd>(win.data(), static_cast<Eigen::Index>(win.size()));
        const auto wout = j.at("readout").get<std::vector<double>>();
        model.readout.weights =
            Eigen::Map<const Eigen::VectorXd>(wout.data(), static_cast<Eigen::Index>(wout.size()));
        return model;
    } catch (const json::exception& e) {
        throw ParseError("model JSON missing fields in '" + path.string() + "': " + e.what());
    }
}

}  // namespace ssrc
