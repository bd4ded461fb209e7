#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "ssrc/series.hpp"

namespace ssrc {

/// Render a double with 17 significant digits (round-trips exactly through parsing).
std::string format_double(double v);

/// Series files carry the header `i,x[,q,xi]`, one row per sample.
/// Lines starting with '#' are provenance comments and are skipped on read.
LabeledSeries read_csv(const std::filesystem::path& path);

void write_csv(const LabeledSeries& series, const std::filesystem::path& path,
               const std::vector<std::string>& comments = {});

}  // namespace ssrc
