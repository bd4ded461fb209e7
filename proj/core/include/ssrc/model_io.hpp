#pragma once

#include <filesystem>

#include "ssrc/reservoir.hpp"

namespace ssrc {

/// Trained separator: everything needed to reproduce a reconstruction.
struct EsnModel {
    EsnParams params;
    Reservoir reservoir;
    Readout readout;
};

/// JSON round trip for a trained model (text, no binary blobs). Weights are
/// stored as sparse triplets; doubles survive the round trip exactly.
void save_esn_json(const EsnModel& model, const std::filesystem::path& path);
EsnModel load_esn_json(const std::filesystem::path& path);

}  // namespace ssrc
