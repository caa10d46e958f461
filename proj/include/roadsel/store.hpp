#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "roadsel/features.hpp"
#include "roadsel/road.hpp"

namespace roadsel {

namespace fs = std::filesystem;

// Test files: one JSON object per file,
//   {"test_id", "control_points": [[x,y,z], ...], "lane_width",
//    "rf", "oob", "label": null|"safe"|"unsafe", "sim_time"}
// The last four are optional. Unknown fields are rejected.

/// Throws Error(invalid_data) on malformed content; `source` names the
/// origin in messages.
RoadTest parse_test(std::string_view text, const std::string& source = "<memory>");
std::string serialize_test(const RoadTest& test);

RoadTest read_test_file(const fs::path& path);
void write_test_file(const fs::path& path, const RoadTest& test);

/// Regular *.json files directly inside `dir`, sorted by file name.
/// Throws Error(io) if `dir` is not a readable directory.
std::vector<fs::path> list_test_files(const fs::path& dir);

std::string read_text(const fs::path& path);
/// Writes to a sibling temporary file, then renames over `path`.
void write_text_atomic(const fs::path& path, std::string_view content);

/// Header of the feature CSV, without trailing newline.
const std::string& feature_csv_header();

/// Six significant digits, "%g" style; negative zero prints as "0".
std::string format_number(double value);

std::string format_feature_csv(std::span<const FeatureVector> rows);
/// Throws Error(invalid_data) on a header mismatch or malformed row.
std::vector<FeatureVector> parse_feature_csv(std::string_view text, const std::string& source = "<memory>");

}  // namespace roadsel
