#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "roadsel/ml/models.hpp"

namespace roadsel {

/// JSON model artifact. Doubles are written with round-trip precision so
/// a loaded model scores bit-identically.
std::string serialize_model(const ml::TrainedModel& model);
/// Throws Error(invalid_data) on malformed or inconsistent artifacts.
ml::TrainedModel parse_model(std::string_view text, const std::string& source = "<memory>");

ml::TrainedModel load_model(const std::filesystem::path& path);
void save_model(const std::filesystem::path& path, const ml::TrainedModel& model);

}  // namespace roadsel
