#include <CLI11.hpp>
#include <fmt/core.h>

#include <cstdio>
#include <cstdlib>
#include <exception>
#include <string>
#include <vector>

#include "domeloc/io.hpp"
#include "domeloc/pipeline.hpp"

namespace {

using domeloc::RunConfig;

// Exit codes: 0 success, 2 usage error, 1 runtime error.
constexpr int kUsageError = 2;
constexpr int kRuntimeError = 1;

void add_dome_flags(CLI::App* cmd, RunConfig& run) {
  cmd->add_option("--radius-mm", run.dome.sphere_radius_mm, "Sphere radius (mm)");
  cmd->add_option("--aperture-deg", run.dome.cap_half_aperture_deg, "Cap half aperture (deg)");
  cmd->add_option("--chart-halfwidth", run.dome.chart_halfwidth, "Chart halfwidth");
}

void add_placement_flags(CLI::App* cmd, RunConfig& run) {
  cmd->add_option("--plane-height-mm", run.placement.sensor_plane_height_mm,
                  "Sensor plane height above the base (mm)");
  cmd->add_option("--standoff-mm", run.placement.surface_standoff_mm,
                  "Sensor-to-surface standoff along the normal (mm)");
  cmd->add_option("--central-recess-mm", run.placement.central_recess_mm,
                  "Central sensor recess in tilted layouts without platform (mm)");
}

void add_surrogate_flags(CLI::App* cmd, RunConfig& run, bool* no_noise) {
  cmd->add_option("--gain", run.surrogate.gain, "Surrogate gain (counts)");
  cmd->add_option("--noise-sigma", run.surrogate.noise_sigma, "Reading noise sigma (counts)");
  cmd->add_flag("--no-noise", *no_noise, "Disable reading noise");
}

int case_id_or_usage(int case_id) {
  if (case_id < 1 || case_id > 10) {
    fmt::print(stderr, "error: --case must be in 1..10, got {}\n", case_id);
    std::exit(kUsageError);
  }
  return case_id;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tactile dome localization pipeline: layout geometry, synthetic indentation "
               "datasets, Laplacian-kernel ridge regression and layout comparison"};
  app.require_subcommand(1);

  RunConfig run;
  bool no_noise = false;
  bool mirror = false;
  bool scale_features = false;
  bool tare = false;
  bool with_reference = false;
  std::string depths_text = "0:3:0.5";
  std::string config_path;
  std::string model_path;
  std::string train_path;
  std::string test_path;
  std::vector<std::string> report_paths;
  double sweep_depth_mm = 3.0;
  int sweep_steps = 121;

  auto* gen = app.add_subcommand("gen-config", "Write a stock sensor layout as JSON");
  gen->add_option("--case", run.case_id, "Stock case id (1..10)")->required();
  gen->add_option("--out", run.out_dir, "Output directory");
  add_dome_flags(gen, run);
  add_placement_flags(gen, run);

  auto* sim = app.add_subcommand("simulate", "Generate train.csv and test.csv");
  sim->add_option("--case", run.case_id, "Stock case id (1..10)");
  sim->add_option("--config", config_path, "Layout JSON path (overrides --case)");
  sim->add_option("--grid", run.grid_per_axis, "Training grid points per axis");
  sim->add_option("--depths", depths_text, "Depth schedule start:stop:step (mm)");
  sim->add_option("--test-count", run.test_count, "Number of random test locations");
  sim->add_option("--seed-test", run.seed_test, "Seed for test locations");
  sim->add_option("--seed-noise", run.seed_noise, "Seed for reading noise");
  sim->add_flag("--mirror", mirror, "Simulate one side of the symmetry line and mirror it");
  sim->add_option("--out", run.out_dir, "Output directory");
  add_dome_flags(sim, run);
  add_placement_flags(sim, run);
  add_surrogate_flags(sim, run, &no_noise);

  auto* train = app.add_subcommand("train", "Grid-search hyperparameters and fit the model");
  train->add_option("--train", train_path, "Training dataset CSV")->required();
  train->add_option("--case", run.case_id, "Case id recorded in the model metadata");
  train->add_option("--k", run.cv_folds, "Cross-validation folds");
  train->add_option("--seed-shuffle", run.seed_shuffle, "Seed for fold shuffling");
  train->add_flag("--scale-features", scale_features, "Standardize readings before the kernel");
  train->add_option("--min-train-depth-mm", run.min_train_depth_mm,
                    "Exclude contact rows shallower than this depth");
  train->add_flag("--tare", tare, "Subtract each location's non-touch readings on ingestion");
  train->add_option("--threads", run.threads, "Worker threads for the grid search (0 = auto)");
  train->add_option("--out", run.out_dir, "Output directory");
  add_dome_flags(train, run);

  auto* eval = app.add_subcommand("evaluate", "Evaluate a model against a test dataset");
  eval->add_option("--model", model_path, "Model JSON")->required();
  eval->add_option("--test", test_path, "Test dataset CSV")->required();
  eval->add_option("--config", config_path, "Layout JSON for the nearest-sensor baseline");
  eval->add_flag("--tare", tare, "Subtract each location's non-touch readings on ingestion");
  eval->add_option("--out", run.out_dir, "Output directory");
  add_dome_flags(eval, run);
  add_placement_flags(eval, run);

  auto* compare = app.add_subcommand("compare", "Combine evaluation reports into one table");
  compare->add_option("--report", report_paths, "Report JSON paths (two or more)")
      ->required()
      ->expected(-2);
  compare->add_flag("--with-reference", with_reference,
                    "Add the published reference median column");
  compare->add_option("--out", run.out_dir, "Output directory");

  auto* sweep = app.add_subcommand("sweep", "Readings along the layout's symmetry line");
  sweep->add_option("--case", run.case_id, "Stock case id (1..10)");
  sweep->add_option("--config", config_path, "Layout JSON path (overrides --case)");
  sweep->add_option("--depth-mm", sweep_depth_mm, "Indentation depth (mm)");
  sweep->add_option("--steps", sweep_steps, "Number of sweep points");
  sweep->add_option("--out", run.out_dir, "Output directory");
  add_dome_flags(sweep, run);
  add_placement_flags(sweep, run);
  add_surrogate_flags(sweep, run, &no_noise);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageError;
  }

  run.mirror = mirror;
  run.scale_features = scale_features;
  run.tare = tare;
  if (no_noise) run.surrogate.noise_sigma = 0.0;
  if (!config_path.empty()) run.config_path = config_path;

  try {
    if (sim->parsed()) run.depths_mm = domeloc::parse_depth_schedule(depths_text);
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kUsageError;
  }

  try {
    if (gen->parsed()) {
      case_id_or_usage(run.case_id);
      const auto path = domeloc::cmd_gen_config(run);
      fmt::print("wrote {}\n", path.string());
    } else if (sim->parsed()) {
      if (!run.config_path) case_id_or_usage(run.case_id);
      const auto out = domeloc::cmd_simulate(run);
      fmt::print("wrote {}\nwrote {}\n", out.train_csv.string(), out.test_csv.string());
    } else if (train->parsed()) {
      const auto out = domeloc::cmd_train(train_path, run);
      fmt::print("wrote {}\nwrote {}\n", out.model_json.string(),
                 out.search_report_json.string());
    } else if (eval->parsed()) {
      const auto out = domeloc::cmd_evaluate(model_path, test_path, run);
      fmt::print("wrote {}\nwrote {}\n", out.report_json.string(), out.arrows_csv.string());
    } else if (compare->parsed()) {
      std::vector<std::filesystem::path> paths(report_paths.begin(), report_paths.end());
      const auto path = domeloc::cmd_compare(paths, run, with_reference);
      fmt::print("wrote {}\n", path.string());
    } else if (sweep->parsed()) {
      if (!run.config_path) case_id_or_usage(run.case_id);
      const auto path = domeloc::cmd_sweep(sweep_depth_mm, sweep_steps, run);
      fmt::print("wrote {}\n", path.string());
    }
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kRuntimeError;
  }
  return 0;
}
