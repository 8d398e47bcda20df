/**
 * @file report.hpp
 * @brief Experiment reports: step tables, rate fits, verdicts and their file forms.
 *
 * A report is written as three files next to each other: <stem>.json (the
 * full report), <stem>.csv (the step table) and <stem>.gp (a gnuplot script
 * plotting the CSV). All three are deterministic functions of the report.
 */
#pragma once

#include <json.hpp>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace mosco::exp {

struct StepRecord {
  int n = 0;
  double hausdorff = 0;  // d_H between the complements of D_n and D
  double symdiff = 0;    // |D_n Δ D|
  double error = 0;
  double norm = 0;
  double constant = 0;
  nlohmann::json extra = nlohmann::json::object();  // per-experiment columns (h, excluded area, regime, ...)
  friend bool operator==(const StepRecord&, const StepRecord&) = default;
};

/// e ≈ C x^alpha in log-log least squares; residual is the RMS log deviation.
struct RateFit {
  double alpha = 0, C = 0, residual = 0;
  friend bool operator==(const RateFit&, const RateFit&) = default;
};

struct NamedVerdict {
  std::string name;       // e.g. "MONOTONE"
  std::string criterion;  // acceptance criterion id, e.g. "3"
  bool passed = false;
  std::string rule;       // human-readable statement of what was checked
  friend bool operator==(const NamedVerdict&, const NamedVerdict&) = default;
};

struct ExperimentReport {
  std::string experiment;  // kind tag, selects the verdict rules
  std::vector<StepRecord> steps;
  std::optional<RateFit> fitted_rate;
  std::vector<NamedVerdict> verdicts;
  nlohmann::json provenance = nlohmann::json::object();  // config hash, seeds, mesh parameters
  /// Labels for the error / norm / constant columns, written into the CSV header.
  std::string error_label = "error", norm_label = "norm", constant_label = "constant";

  bool all_passed() const;
  friend bool operator==(const ExperimentReport&, const ExperimentReport&) = default;
};

/// At least 3 pairs, all coordinates positive (NonPositiveData otherwise).
RateFit fit_rate(const std::vector<std::pair<double, double>>& pairs);

nlohmann::json report_to_json(const ExperimentReport& r);
ExperimentReport report_from_json(const nlohmann::json& j);

/// Header comment lines, then "n,hausdorff,symdiff,error,norm,constant" and one row per step.
std::string report_csv(const ExperimentReport& r);
std::string plot_script(const ExperimentReport& r, const std::string& csv_name);

/// Writes <dir>/<stem>.{json,csv,gp} atomically.
void write_report(const ExperimentReport& r, const std::string& dir, const std::string& stem);
/// CSV and plot script only.
void emit_plot_data(const ExperimentReport& r, const std::string& dir, const std::string& stem);

/// Verdicts recomputed from the experiment tag and the step table.
std::vector<NamedVerdict> recompute_verdicts(const ExperimentReport& r);

/// Hash of a configuration's canonical JSON text, hex encoded.
std::string config_hash(const nlohmann::json& config);

}  // namespace mosco::exp
