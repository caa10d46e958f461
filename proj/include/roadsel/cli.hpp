#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "roadsel/error.hpp"

namespace roadsel::cli {

namespace fs = std::filesystem;

enum ExitCode : int { kOk = 0, kUsage = 1, kData = 2, kInternal = 3 };

int exit_code_for(ErrorKind kind);

struct GenerateOptions {
  long long count = 0;
  std::uint64_t seed = 0;
  fs::path out_dir = "tests";
};

struct LabelOptions {
  fs::path tests_dir;
  double rf = 0.0;
  double oob = 0.0;
};

struct ExtractOptions {
  fs::path tests_dir;
  fs::path csv = "road_features.csv";
};

/// Writes evaluation_report.json and best_model.json next to the CSV.
struct EvaluateOptions {
  fs::path csv;
  long long k = 10;
  std::uint64_t seed = 0;
};

/// Writes predictions.csv into the tests directory.
struct PredictOptions {
  fs::path tests_dir;
  fs::path model;
};

/// Writes cost_effectiveness.json next to the CSV.
struct CostEffectivenessOptions {
  fs::path csv;
  long long top = 10;
  long long reps = 20;
  std::uint64_t seed = 0;
};

// Each command reports progress on `out`, problems on `err`, and returns
// an ExitCode. None of them throws.
int cmd_generate_tests(const GenerateOptions& opt, std::ostream& out, std::ostream& err);
int cmd_label_tests(const LabelOptions& opt, std::ostream& out, std::ostream& err);
int cmd_extract_features(const ExtractOptions& opt, std::ostream& out, std::ostream& err);
int cmd_evaluate_models(const EvaluateOptions& opt, std::ostream& out, std::ostream& err);
int cmd_predict_tests(const PredictOptions& opt, std::ostream& out, std::ostream& err);
int cmd_evaluate_cost_effectiveness(const CostEffectivenessOptions& opt, std::ostream& out, std::ostream& err);

/// Parses `args` (without the program name) and dispatches.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace roadsel::cli
