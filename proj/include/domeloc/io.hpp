#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "domeloc/evaluation.hpp"
#include "domeloc/geometry.hpp"
#include "domeloc/kernel_ridge.hpp"
#include "domeloc/model_selection.hpp"
#include "domeloc/surrogate.hpp"

namespace domeloc {

/// Shortest round-trip decimal representation.
std::string format_double(double value);

/// Writes via a temporary file in the same directory and renames into place,
/// so failures never leave partial output behind.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

// Dataset CSV, header: A,B,depth_mm,contact,r1,r2,r3,r4,r5 (LF newlines).
void write_dataset_csv(const Dataset& dataset, const std::filesystem::path& path);

/// Parses a dataset CSV. With tare enabled, each location that carries a
/// non-touch row has that row's readings subtracted from all of its rows.
/// Parse errors carry the 1-based line number.
Dataset ingest_csv(const std::filesystem::path& path, bool tare = true);

void write_config_json(const SensorConfig& config, const std::filesystem::path& path);
SensorConfig read_config_json(const std::filesystem::path& path);

void write_model_json(const FittedModel& model, const std::filesystem::path& path);
FittedModel read_model_json(const std::filesystem::path& path);

void write_grid_report_json(const GridSearchReport& report, const std::filesystem::path& path);

struct EvalArtifacts {
  std::string case_ref;
  std::string provenance;
  EvalReport report;
  std::optional<BaselineReport> baseline;
};

void write_eval_report_json(const EvalArtifacts& artifacts, const std::filesystem::path& path);

/// The bits of a report that comparisons need.
struct ReportSummary {
  std::string case_ref;
  std::string provenance;
  SummaryStats summary;
};

ReportSummary read_report_summary(const std::filesystem::path& path);

// Arrow-plot CSV, header: true_A,true_B,pred_A,pred_B,error_mm.
void write_arrow_csv(const std::vector<ErrorRecord>& records, const std::filesystem::path& path);

// Sweep CSV, header: s,r1,r2,r3,r4,r5.
void write_sweep_csv(const SweepTable& table, const std::filesystem::path& path);

void write_comparison_csv(const std::vector<CaseSummary>& rows, const std::filesystem::path& path,
                          bool with_reference);
void write_comparison_json(const std::vector<CaseSummary>& rows, const std::filesystem::path& path,
                           bool with_reference);

}  // namespace domeloc
