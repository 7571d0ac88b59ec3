#include "domeloc/io.hpp"

#include <fmt/format.h>

#include <charconv>
#include <fstream>
#include <map>
#include <nlohmann/json.hpp>
#include <stdexcept>

namespace domeloc {

using ordered_json = nlohmann::ordered_json;

std::string format_double(double value) { return fmt::format("{}", value); }

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  const std::filesystem::path dir = path.parent_path();
  if (!dir.empty()) std::filesystem::create_directories(dir);
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error(fmt::format("cannot open '{}' for writing", tmp.string()));
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error(fmt::format("write to '{}' failed", tmp.string()));
  }
  std::filesystem::rename(tmp, path);
}

namespace {

const char* kDatasetHeader = "A,B,depth_mm,contact,r1,r2,r3,r4,r5";

double parse_number(std::string_view field, int line_no, const char* column) {
  double value = 0.0;
  const char* begin = field.data();
  const char* end = begin + field.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end) {
    throw std::runtime_error(fmt::format("line {}: column '{}' is not a number: '{}'", line_no,
                                         column, std::string(field)));
  }
  return value;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

ordered_json vec3_json(const Eigen::Vector3d& v) {
  return ordered_json::array({v.x(), v.y(), v.z()});
}

Eigen::Vector3d vec3_from_json(const ordered_json& j) {
  if (!j.is_array() || j.size() != 3) throw std::runtime_error("expected a 3-vector");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

ordered_json stats_json(const SummaryStats& s) {
  return ordered_json{{"median_mm", s.median_mm},
                      {"mean_mm", s.mean_mm},
                      {"std_mm", s.std_mm},
                      {"count", s.count}};
}

SummaryStats stats_from_json(const ordered_json& j) {
  SummaryStats s;
  s.median_mm = j.at("median_mm").get<double>();
  s.mean_mm = j.at("mean_mm").get<double>();
  s.std_mm = j.at("std_mm").get<double>();
  s.count = j.at("count").get<int>();
  return s;
}

ordered_json load_json(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(fmt::format("cannot open '{}'", path.string()));
  ordered_json j;
  try {
    j = ordered_json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::runtime_error(fmt::format("'{}': {}", path.string(), e.what()));
  }
  return j;
}

}  // namespace

void write_dataset_csv(const Dataset& dataset, const std::filesystem::path& path) {
  std::string out = kDatasetHeader;
  out += '\n';
  for (const Sample& s : dataset.samples) {
    out += fmt::format("{},{},{},{},{},{},{},{},{}\n", s.a, s.b, s.depth_mm, s.contact ? 1 : 0,
                       s.readings[0], s.readings[1], s.readings[2], s.readings[3], s.readings[4]);
  }
  write_file_atomic(path, out);
}

Dataset ingest_csv(const std::filesystem::path& path, bool tare) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(fmt::format("cannot open '{}'", path.string()));

  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty file, expected a header line");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kDatasetHeader) {
    throw std::runtime_error(
        fmt::format("line 1: header mismatch, expected '{}' got '{}'", kDatasetHeader, line));
  }

  static const char* kColumns[9] = {"A", "B", "depth_mm", "contact", "r1", "r2", "r3", "r4", "r5"};
  Dataset dataset;
  dataset.provenance = Provenance::kIngested;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_fields(line);
    if (fields.size() != 9) {
      throw std::runtime_error(
          fmt::format("line {}: expected 9 columns, got {}", line_no, fields.size()));
    }
    Sample s;
    s.a = parse_number(fields[0], line_no, kColumns[0]);
    s.b = parse_number(fields[1], line_no, kColumns[1]);
    s.depth_mm = parse_number(fields[2], line_no, kColumns[2]);
    const double contact = parse_number(fields[3], line_no, kColumns[3]);
    if (contact != 0.0 && contact != 1.0) {
      throw std::runtime_error(fmt::format("line {}: contact must be 0 or 1", line_no));
    }
    s.contact = contact == 1.0;
    if (s.depth_mm < 0.0) {
      throw std::runtime_error(fmt::format("line {}: negative depth", line_no));
    }
    if (!s.contact && s.depth_mm != 0.0) {
      throw std::runtime_error(
          fmt::format("line {}: non-touch row must have zero depth", line_no));
    }
    for (int c = 0; c < kSensorCount; ++c) {
      s.readings[c] = parse_number(fields[4 + c], line_no, kColumns[4 + c]);
    }
    dataset.samples.push_back(s);
  }
  if (dataset.samples.empty()) throw std::runtime_error("empty dataset: header only");

  if (tare) {
    // One non-touch row per location defines that location's tare offset.
    std::map<std::pair<double, double>, std::array<double, kSensorCount>> offsets;
    for (const Sample& s : dataset.samples) {
      if (s.contact) continue;
      const auto [it, inserted] = offsets.emplace(std::make_pair(s.a, s.b), s.readings);
      if (!inserted) {
        throw std::runtime_error(
            fmt::format("inconsistent location grouping: duplicate non-touch row at ({}, {})",
                        s.a, s.b));
      }
    }
    for (Sample& s : dataset.samples) {
      const auto it = offsets.find({s.a, s.b});
      if (it == offsets.end()) continue;
      for (int c = 0; c < kSensorCount; ++c) s.readings[c] -= it->second[c];
    }
  }
  return dataset;
}

void write_config_json(const SensorConfig& config, const std::filesystem::path& path) {
  ordered_json sensors = ordered_json::array();
  for (const SensorPose& pose : config.sensors) {
    sensors.push_back(
        ordered_json{{"position_mm", vec3_json(pose.position_mm)}, {"normal", vec3_json(pose.normal)}});
  }
  ordered_json j{
      {"case", config.case_id == 0 ? ordered_json("custom") : ordered_json(config.case_id)},
      {"layout", layout_name(config.layout)},
      {"mounting_angle_deg", config.mounting_angle_deg},
      {"surface_standoff_mm", config.surface_standoff_mm},
      {"sensors", sensors},
      {"symmetry", config.symmetry ? ordered_json(symmetry_name(*config.symmetry))
                                   : ordered_json(nullptr)},
      {"mirror_permutation", config.mirror_permutation},
  };
  write_file_atomic(path, j.dump(2) + "\n");
}

SensorConfig read_config_json(const std::filesystem::path& path) {
  const ordered_json j = load_json(path);
  SensorConfig config;
  const auto& case_field = j.at("case");
  config.case_id = case_field.is_number_integer() ? case_field.get<int>() : 0;
  config.layout = layout_from_name(j.at("layout").get<std::string>());
  config.mounting_angle_deg = j.at("mounting_angle_deg").get<double>();
  config.surface_standoff_mm = j.at("surface_standoff_mm").get<double>();
  const auto& sensors = j.at("sensors");
  if (!sensors.is_array() || sensors.size() != kSensorCount) {
    throw std::runtime_error(
        fmt::format("'{}': expected {} sensors", path.string(), kSensorCount));
  }
  for (int i = 0; i < kSensorCount; ++i) {
    config.sensors[i].position_mm = vec3_from_json(sensors[i].at("position_mm"));
    config.sensors[i].normal = vec3_from_json(sensors[i].at("normal"));
  }
  if (j.contains("symmetry") && !j.at("symmetry").is_null()) {
    config.symmetry = symmetry_from_name(j.at("symmetry").get<std::string>());
  }
  const auto& perm = j.at("mirror_permutation");
  if (!perm.is_array() || perm.size() != kSensorCount) {
    throw std::runtime_error("mirror_permutation must list 5 indices");
  }
  for (int i = 0; i < kSensorCount; ++i) config.mirror_permutation[i] = perm[i].get<int>();
  return config;
}

namespace {

ordered_json matrix_json(const Eigen::MatrixXd& m) {
  ordered_json rows = ordered_json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    ordered_json row = ordered_json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const ordered_json& j, Eigen::Index cols) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(j.size()), cols);
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    const auto& row = j[r];
    if (static_cast<Eigen::Index>(row.size()) != cols) {
      throw std::runtime_error(fmt::format("matrix row {} has {} entries, expected {}", r,
                                           row.size(), cols));
    }
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = row[c].get<double>();
  }
  return m;
}

}  // namespace

void write_model_json(const FittedModel& model, const std::filesystem::path& path) {
  ordered_json scaling{{"enabled", model.meta.scaler.enabled}};
  if (model.meta.scaler.enabled) {
    scaling["mean"] = std::vector<double>(model.meta.scaler.mean.begin(), model.meta.scaler.mean.end());
    scaling["std"] =
        std::vector<double>(model.meta.scaler.stddev.begin(), model.meta.scaler.stddev.end());
  }
  ordered_json j{
      {"alpha", model.hyper.alpha},
      {"gamma", model.hyper.gamma},
      {"train_inputs", matrix_json(model.train_inputs)},
      {"dual_coefficients", matrix_json(model.dual_coefficients)},
      {"dome",
       {{"radius_mm", model.dome.sphere_radius_mm},
        {"aperture_deg", model.dome.cap_half_aperture_deg},
        {"chart_halfwidth", model.dome.chart_halfwidth}}},
      {"meta",
       {{"case", model.meta.case_ref},
        {"seeds",
         {{"test", model.meta.seed_test},
          {"shuffle", model.meta.seed_shuffle},
          {"noise", model.meta.seed_noise}}},
        {"depth_filter_mm", model.meta.depth_filter_mm},
        {"scaling", scaling}}},
  };
  write_file_atomic(path, j.dump(2) + "\n");
}

FittedModel read_model_json(const std::filesystem::path& path) {
  const ordered_json j = load_json(path);
  FittedModel model;
  model.hyper.alpha = j.at("alpha").get<double>();
  model.hyper.gamma = j.at("gamma").get<double>();
  model.train_inputs = matrix_from_json(j.at("train_inputs"), kSensorCount);
  model.dual_coefficients = matrix_from_json(j.at("dual_coefficients"), 2);
  if (model.train_inputs.rows() != model.dual_coefficients.rows()) {
    throw std::runtime_error("train_inputs and dual_coefficients row counts differ");
  }
  const auto& dome = j.at("dome");
  model.dome.sphere_radius_mm = dome.at("radius_mm").get<double>();
  model.dome.cap_half_aperture_deg = dome.at("aperture_deg").get<double>();
  model.dome.chart_halfwidth = dome.at("chart_halfwidth").get<double>();
  model.dome.validate();
  const auto& meta = j.at("meta");
  model.meta.case_ref = meta.at("case").get<std::string>();
  model.meta.seed_test = meta.at("seeds").at("test").get<std::uint64_t>();
  model.meta.seed_shuffle = meta.at("seeds").at("shuffle").get<std::uint64_t>();
  model.meta.seed_noise = meta.at("seeds").at("noise").get<std::uint64_t>();
  model.meta.depth_filter_mm = meta.at("depth_filter_mm").get<double>();
  const auto& scaling = meta.at("scaling");
  model.meta.scaler.enabled = scaling.at("enabled").get<bool>();
  if (model.meta.scaler.enabled) {
    const auto mean = scaling.at("mean").get<std::vector<double>>();
    const auto stddev = scaling.at("std").get<std::vector<double>>();
    model.meta.scaler.mean =
        Eigen::Map<const Eigen::RowVectorXd>(mean.data(), static_cast<Eigen::Index>(mean.size()));
    model.meta.scaler.stddev = Eigen::Map<const Eigen::RowVectorXd>(
        stddev.data(), static_cast<Eigen::Index>(stddev.size()));
  }
  return model;
}

void write_grid_report_json(const GridSearchReport& report, const std::filesystem::path& path) {
  ordered_json grid = ordered_json::array();
  for (const GridSearchEntry& e : report.grid) {
    grid.push_back(ordered_json{
        {"alpha", e.alpha}, {"gamma", e.gamma}, {"cv_median_error_mm", e.cv_median_error_mm}});
  }
  ordered_json j{
      {"fold_seed", report.fold_seed},
      {"best",
       {{"alpha", report.best.alpha},
        {"gamma", report.best.gamma},
        {"cv_median_error_mm", report.best_cv_median_error_mm}}},
      {"grid", grid},
  };
  write_file_atomic(path, j.dump(2) + "\n");
}

void write_eval_report_json(const EvalArtifacts& artifacts, const std::filesystem::path& path) {
  ordered_json per_location = ordered_json::array();
  for (const ErrorRecord& rec : artifacts.report.per_location) {
    per_location.push_back(ordered_json{
        {"true_ab", {rec.true_a, rec.true_b}},
        {"predicted_ab", {rec.predicted_a, rec.predicted_b}},
        {"true_xyz", vec3_json(rec.true_xyz)},
        {"predicted_xyz", vec3_json(rec.predicted_xyz)},
        {"error_mm", rec.error_mm},
        {"depth_mm", rec.depth_mm},
        {"clamped", rec.clamped},
    });
  }
  ordered_json per_depth = ordered_json::object();
  for (const auto& [depth, stats] : artifacts.report.per_depth) {
    per_depth[format_double(depth)] = stats_json(stats);
  }
  ordered_json j{
      {"case", artifacts.case_ref},
      {"provenance", artifacts.provenance},
      {"per_location", per_location},
      {"summary", stats_json(artifacts.report.summary)},
      {"per_depth", per_depth},
      {"baseline",
       artifacts.baseline
           ? ordered_json{{"summary", stats_json(artifacts.baseline->summary)},
                          {"excluded_zero_rows", artifacts.baseline->excluded_zero_rows}}
           : ordered_json(nullptr)},
      {"clamped_count", artifacts.report.clamped_count},
  };
  write_file_atomic(path, j.dump(2) + "\n");
}

ReportSummary read_report_summary(const std::filesystem::path& path) {
  const ordered_json j = load_json(path);
  ReportSummary summary;
  summary.case_ref = j.at("case").get<std::string>();
  summary.provenance = j.at("provenance").get<std::string>();
  summary.summary = stats_from_json(j.at("summary"));
  return summary;
}

void write_arrow_csv(const std::vector<ErrorRecord>& records, const std::filesystem::path& path) {
  if (records.empty()) throw std::invalid_argument("no records to export");
  std::string out = "true_A,true_B,pred_A,pred_B,error_mm\n";
  for (const ErrorRecord& rec : records) {
    out += fmt::format("{},{},{},{},{}\n", rec.true_a, rec.true_b, rec.predicted_a,
                       rec.predicted_b, rec.error_mm);
  }
  write_file_atomic(path, out);
}

void write_sweep_csv(const SweepTable& table, const std::filesystem::path& path) {
  std::string out = "s,r1,r2,r3,r4,r5\n";
  for (std::size_t i = 0; i < table.s.size(); ++i) {
    const auto& r = table.readings[i];
    out += fmt::format("{},{},{},{},{},{}\n", table.s[i], r[0], r[1], r[2], r[3], r[4]);
  }
  write_file_atomic(path, out);
}

namespace {

ordered_json comparison_row_json(const CaseSummary& row, bool with_reference) {
  ordered_json j{{"case", row.case_ref},
                 {"provenance", row.provenance},
                 {"median_mm", row.stats.median_mm},
                 {"mean_mm", row.stats.mean_mm},
                 {"std_mm", row.stats.std_mm},
                 {"count", row.stats.count}};
  if (with_reference) {
    j["ref_median_mm"] =
        row.reference_median_mm ? ordered_json(*row.reference_median_mm) : ordered_json(nullptr);
  }
  return j;
}

}  // namespace

void write_comparison_csv(const std::vector<CaseSummary>& rows, const std::filesystem::path& path,
                          bool with_reference) {
  std::string out = "case,provenance,median_mm,mean_mm,std_mm,count";
  if (with_reference) out += ",ref_median_mm";
  out += '\n';
  for (const CaseSummary& row : rows) {
    out += fmt::format("{},{},{},{},{},{}", row.case_ref, row.provenance, row.stats.median_mm,
                       row.stats.mean_mm, row.stats.std_mm, row.stats.count);
    if (with_reference) {
      out += ',';
      if (row.reference_median_mm) out += format_double(*row.reference_median_mm);
    }
    out += '\n';
  }
  write_file_atomic(path, out);
}

void write_comparison_json(const std::vector<CaseSummary>& rows, const std::filesystem::path& path,
                           bool with_reference) {
  ordered_json j = ordered_json::array();
  for (const CaseSummary& row : rows) j.push_back(comparison_row_json(row, with_reference));
  write_file_atomic(path, j.dump(2) + "\n");
}

}  // namespace domeloc
