#include "domeloc/pipeline.hpp"

#include <fmt/format.h>

#include <cmath>
#include <stdexcept>

#include "domeloc/evaluation.hpp"
#include "domeloc/io.hpp"
#include "domeloc/kernel_ridge.hpp"
#include "domeloc/model_selection.hpp"
#include "domeloc/random.hpp"

namespace domeloc {

std::vector<double> RunConfig::default_depth_schedule() { return parse_depth_schedule("0:3:0.5"); }

std::vector<double> parse_depth_schedule(const std::string& text) {
  double start = 0.0, stop = 0.0, step = 0.0;
  const auto first = text.find(':');
  const auto second = text.find(':', first == std::string::npos ? first : first + 1);
  if (first == std::string::npos || second == std::string::npos) {
    throw std::invalid_argument(
        fmt::format("depth schedule '{}' must have the form start:stop:step", text));
  }
  try {
    start = std::stod(text.substr(0, first));
    stop = std::stod(text.substr(first + 1, second - first - 1));
    step = std::stod(text.substr(second + 1));
  } catch (const std::exception&) {
    throw std::invalid_argument(fmt::format("depth schedule '{}' has non-numeric parts", text));
  }
  if (!(step > 0.0)) {
    throw std::invalid_argument(fmt::format("depth step must be > 0, got {}", step));
  }
  if (stop < start || start < 0.0) {
    throw std::invalid_argument(
        fmt::format("depth schedule '{}' must satisfy 0 <= start <= stop", text));
  }
  const int count = static_cast<int>(std::floor((stop - start) / step + 1e-9)) + 1;
  std::vector<double> depths(count);
  for (int i = 0; i < count; ++i) depths[i] = start + i * step;
  return depths;
}

SensorConfig resolve_config(const RunConfig& run) {
  if (run.config_path) return read_config_json(*run.config_path);
  return build_case(run.case_id, run.dome, run.placement);
}

std::filesystem::path cmd_gen_config(const RunConfig& run) {
  const SensorConfig config = build_case(run.case_id, run.dome, run.placement);
  const auto path = run.out_dir / fmt::format("config_case{}.json", run.case_id);
  write_config_json(config, path);
  return path;
}

SimulateOutputs cmd_simulate(const RunConfig& run) {
  const SensorConfig config = resolve_config(run);
  const ChartGrid grid = make_training_grid(run.dome, run.grid_per_axis);

  const Dataset train = generate_dataset(config, run.dome, grid, run.depths_mm, run.surrogate,
                                         run.seed_noise, run.mirror);
  // The test set draws from a derived noise stream so its rows never share
  // noise with training rows.
  const auto locations = make_test_locations(run.dome, run.test_count, run.seed_test);
  const Dataset test = generate_dataset_at(config, run.dome, locations, run.depths_mm,
                                           run.surrogate, hash_key(run.seed_noise, 0x7e57));

  SimulateOutputs out;
  out.train_csv = run.out_dir / "train.csv";
  out.test_csv = run.out_dir / "test.csv";
  write_dataset_csv(train, out.train_csv);
  write_dataset_csv(test, out.test_csv);
  return out;
}

TrainOutputs cmd_train(const std::filesystem::path& train_csv, const RunConfig& run) {
  Dataset dataset = ingest_csv(train_csv, run.tare);
  const TrainingTable table = make_training_table(dataset, run.min_train_depth_mm);

  CvSettings cv;
  cv.folds = run.cv_folds;
  cv.shuffle_seed = run.seed_shuffle;
  cv.scale_features = run.scale_features;
  const GridSearchReport report = grid_search(table, run.dome, cv, run.threads);

  ModelMeta meta;
  meta.case_ref = run.config_path ? std::string("custom") : fmt::format("case{}", run.case_id);
  meta.seed_test = run.seed_test;
  meta.seed_shuffle = run.seed_shuffle;
  meta.seed_noise = run.seed_noise;
  meta.depth_filter_mm = run.min_train_depth_mm;
  meta.scaler.enabled = run.scale_features;
  const FittedModel model = fit(table.inputs, table.targets, report.best, run.dome, meta);

  TrainOutputs out;
  out.model_json = run.out_dir / "model.json";
  out.search_report_json = run.out_dir / "search_report.json";
  write_model_json(model, out.model_json);
  write_grid_report_json(report, out.search_report_json);
  return out;
}

EvaluateOutputs cmd_evaluate(const std::filesystem::path& model_json,
                             const std::filesystem::path& test_csv, const RunConfig& run) {
  const FittedModel model = read_model_json(model_json);
  if (model.dome != run.dome) {
    throw std::runtime_error(fmt::format(
        "dome mismatch between model and run: model has radius_mm={}, aperture_deg={}, "
        "chart_halfwidth={}; run has radius_mm={}, aperture_deg={}, chart_halfwidth={}",
        model.dome.sphere_radius_mm, model.dome.cap_half_aperture_deg,
        model.dome.chart_halfwidth, run.dome.sphere_radius_mm, run.dome.cap_half_aperture_deg,
        run.dome.chart_halfwidth));
  }
  const Dataset dataset = ingest_csv(test_csv, run.tare);

  EvalArtifacts artifacts;
  artifacts.case_ref = model.meta.case_ref;
  artifacts.provenance = provenance_name(dataset.provenance);
  artifacts.report = evaluate(model, dataset, model.dome);

  // Baseline needs sensor geometry: an explicit config file wins, otherwise a
  // stock case named by the model is rebuilt with the run's placement.
  std::optional<SensorConfig> config;
  if (run.config_path) {
    config = read_config_json(*run.config_path);
  } else if (model.meta.case_ref.rfind("case", 0) == 0) {
    const int case_id = std::stoi(model.meta.case_ref.substr(4));
    config = build_case(case_id, model.dome, run.placement);
  }
  if (config) artifacts.baseline = nearest_sensor_baseline(*config, dataset, model.dome);

  EvaluateOutputs out;
  out.report_json = run.out_dir / "report.json";
  out.arrows_csv = run.out_dir / "arrows.csv";
  write_eval_report_json(artifacts, out.report_json);
  write_arrow_csv(artifacts.report.per_location, out.arrows_csv);
  return out;
}

std::filesystem::path cmd_compare(const std::vector<std::filesystem::path>& report_paths,
                                  const RunConfig& run, bool with_reference) {
  std::vector<CaseSummary> rows;
  for (const auto& path : report_paths) {
    const ReportSummary summary = read_report_summary(path);
    CaseSummary row;
    row.case_ref = summary.case_ref;
    row.provenance = summary.provenance;
    row.stats = summary.summary;
    if (summary.case_ref.rfind("case", 0) == 0) {
      row.reference_median_mm = reference_median_mm(std::stoi(summary.case_ref.substr(4)));
    }
    rows.push_back(std::move(row));
  }
  const auto sorted = compare_cases(std::move(rows));
  const auto csv_path = run.out_dir / "comparison.csv";
  write_comparison_csv(sorted, csv_path, with_reference);
  write_comparison_json(sorted, run.out_dir / "comparison.json", with_reference);
  return csv_path;
}

std::filesystem::path cmd_sweep(double depth_mm, int step_count, const RunConfig& run) {
  const SensorConfig config = resolve_config(run);
  const SweepTable table = sweep_symmetry_line(config, run.dome, run.surrogate, depth_mm, step_count);
  const auto path = run.out_dir / "sweep.csv";
  write_sweep_csv(table, path);
  return path;
}

}  // namespace domeloc
