#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "domeloc/geometry.hpp"
#include "domeloc/surrogate.hpp"

namespace domeloc {

/// Everything a reproducible run needs. All randomness flows from the three
/// named seeds; no command reads ambient entropy.
struct RunConfig {
  DomeSpec dome;
  int case_id = 8;
  std::optional<std::filesystem::path> config_path;  // overrides case_id when set
  PlacementParams placement;
  SurrogateParams surrogate;
  int grid_per_axis = 16;
  std::vector<double> depths_mm = default_depth_schedule();
  int test_count = 100;
  std::uint64_t seed_test = 42;
  std::uint64_t seed_shuffle = 7;
  std::uint64_t seed_noise = 99;
  bool mirror = false;
  bool scale_features = false;
  bool tare = false;  // enable when ingesting real indenter logs
  double min_train_depth_mm = 0.5;
  int cv_folds = 5;
  int threads = 0;  // 0 = hardware concurrency
  std::filesystem::path out_dir = ".";

  static std::vector<double> default_depth_schedule();  // 0 to 3 mm by 0.5
};

/// Parses "start:stop:step" (mm) into an endpoint-inclusive schedule.
std::vector<double> parse_depth_schedule(const std::string& text);

/// The sensor layout a run refers to: the config file when given, otherwise
/// the stock case built with the run's placement parameters.
SensorConfig resolve_config(const RunConfig& run);

std::filesystem::path cmd_gen_config(const RunConfig& run);

struct SimulateOutputs {
  std::filesystem::path train_csv;
  std::filesystem::path test_csv;
};
SimulateOutputs cmd_simulate(const RunConfig& run);

struct TrainOutputs {
  std::filesystem::path model_json;
  std::filesystem::path search_report_json;
};
TrainOutputs cmd_train(const std::filesystem::path& train_csv, const RunConfig& run);

struct EvaluateOutputs {
  std::filesystem::path report_json;
  std::filesystem::path arrows_csv;
};
EvaluateOutputs cmd_evaluate(const std::filesystem::path& model_json,
                             const std::filesystem::path& test_csv, const RunConfig& run);

std::filesystem::path cmd_compare(const std::vector<std::filesystem::path>& report_paths,
                                  const RunConfig& run, bool with_reference);

std::filesystem::path cmd_sweep(double depth_mm, int step_count, const RunConfig& run);

}  // namespace domeloc
