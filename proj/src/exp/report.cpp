/**
 * @file report.cpp
 * @brief Report serialization, CSV/plot emission and log-log rate fits.
 */
#include "mosco/exp/report.hpp"

#include <cmath>
#include <cstdio>

#include "mosco/core/error.hpp"
#include "mosco/core/io.hpp"

namespace mosco::exp {

using nlohmann::json;

bool ExperimentReport::all_passed() const {
  for (const auto& v : verdicts)
    if (!v.passed) return false;
  return true;
}

RateFit fit_rate(const std::vector<std::pair<double, double>>& pairs) {
  if (pairs.size() < 3) fail(ErrorCode::NonPositiveData, "fit_rate needs at least 3 pairs");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(pairs.size());
  for (auto [x, e] : pairs) {
    if (!(x > 0) || !(e > 0) || !std::isfinite(x) || !std::isfinite(e))
      fail(ErrorCode::NonPositiveData, "fit_rate needs positive finite data");
    const double lx = std::log(x), ly = std::log(e);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  bool distinct = false;
  for (auto [x, e] : pairs) distinct = distinct || x != pairs.front().first;
  const double den = n * sxx - sx * sx;
  if (!distinct || !(std::abs(den) > 0)) fail(ErrorCode::NonPositiveData, "fit_rate needs at least two distinct x values");
  RateFit f;
  f.alpha = (n * sxy - sx * sy) / den;
  const double logc = (sy - f.alpha * sx) / n;
  f.C = std::exp(logc);
  double ss = 0;
  for (auto [x, e] : pairs) {
    const double d = std::log(e) - (logc + f.alpha * std::log(x));
    ss += d * d;
  }
  f.residual = std::sqrt(ss / n);
  return f;
}

json report_to_json(const ExperimentReport& r) {
  json j;
  j["experiment"] = r.experiment;
  j["labels"] = {{"error", r.error_label}, {"norm", r.norm_label}, {"constant", r.constant_label}};
  json steps = json::array();
  for (const auto& s : r.steps)
    steps.push_back({{"n", s.n},
                     {"hausdorff", s.hausdorff},
                     {"symdiff", s.symdiff},
                     {"error", s.error},
                     {"norm", s.norm},
                     {"constant", s.constant},
                     {"extra", s.extra}});
  j["steps"] = steps;
  if (r.fitted_rate)
    j["fitted_rate"] = {{"alpha", r.fitted_rate->alpha}, {"C", r.fitted_rate->C}, {"residual", r.fitted_rate->residual}};
  else
    j["fitted_rate"] = nullptr;
  json v = json::array();
  for (const auto& x : r.verdicts)
    v.push_back({{"name", x.name}, {"criterion", x.criterion}, {"passed", x.passed}, {"rule", x.rule}});
  j["verdicts"] = v;
  j["provenance"] = r.provenance;
  return j;
}

ExperimentReport report_from_json(const json& j) {
  try {
    ExperimentReport r;
    r.experiment = j.at("experiment").get<std::string>();
    if (j.contains("labels")) {
      r.error_label = j["labels"].value("error", "error");
      r.norm_label = j["labels"].value("norm", "norm");
      r.constant_label = j["labels"].value("constant", "constant");
    }
    for (const auto& s : j.at("steps")) {
      StepRecord x;
      x.n = s.at("n").get<int>();
      x.hausdorff = s.at("hausdorff").get<double>();
      x.symdiff = s.at("symdiff").get<double>();
      x.error = s.at("error").get<double>();
      x.norm = s.at("norm").get<double>();
      x.constant = s.at("constant").get<double>();
      if (s.contains("extra")) x.extra = s["extra"];
      r.steps.push_back(std::move(x));
    }
    if (j.contains("fitted_rate") && !j["fitted_rate"].is_null()) {
      const auto& f = j["fitted_rate"];
      r.fitted_rate = RateFit{f.at("alpha").get<double>(), f.at("C").get<double>(), f.at("residual").get<double>()};
    }
    if (j.contains("verdicts"))
      for (const auto& v : j["verdicts"])
        r.verdicts.push_back({v.at("name").get<std::string>(), v.at("criterion").get<std::string>(), v.at("passed").get<bool>(),
                              v.value("rule", "")});
    if (j.contains("provenance")) r.provenance = j["provenance"];
    return r;
  } catch (const json::exception& e) {
    fail(ErrorCode::MalformedSpec, std::string("bad report: ") + e.what());
  }
}

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string report_csv(const ExperimentReport& r) {
  std::string s;
  s += "# experiment: " + r.experiment + "\n";
  s += "# n: step index; hausdorff: d_H between domain complements; symdiff: |D_n sym-diff D|\n";
  s += "# error: " + r.error_label + "; norm: " + r.norm_label + "; constant: " + r.constant_label + "\n";
  s += "n,hausdorff,symdiff,error,norm,constant\n";
  for (const auto& x : r.steps)
    s += std::to_string(x.n) + "," + num(x.hausdorff) + "," + num(x.symdiff) + "," + num(x.error) + "," + num(x.norm) + "," +
         num(x.constant) + "\n";
  return s;
}

std::string plot_script(const ExperimentReport& r, const std::string& csv_name) {
  std::string s;
  s += "# gnuplot script for " + r.experiment + "\n";
  s += "set datafile separator ','\n";
  s += "set key autotitle columnhead\n";
  s += "set logscale y\n";
  s += "set xlabel 'n'\n";
  s += "set terminal pngcairo size 900,600\n";
  s += "set output '" + csv_name.substr(0, csv_name.rfind('.')) + ".png'\n";
  s += "plot '" + csv_name + "' using 1:4 with linespoints title '" + r.error_label + "', \\\n";
  s += "     '' using 1:5 with linespoints title '" + r.norm_label + "', \\\n";
  s += "     '' using 1:6 with linespoints title '" + r.constant_label + "'\n";
  if (r.fitted_rate) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "# fitted: error = %.6g * x^%.6g (rms log residual %.3g)\n", r.fitted_rate->C,
                  r.fitted_rate->alpha, r.fitted_rate->residual);
    s += buf;
  }
  return s;
}

void emit_plot_data(const ExperimentReport& r, const std::string& dir, const std::string& stem) {
  const std::string base = dir.empty() ? stem : dir + "/" + stem;
  write_file_atomic(base + ".csv", report_csv(r));
  write_file_atomic(base + ".gp", plot_script(r, stem + ".csv"));
}

void write_report(const ExperimentReport& r, const std::string& dir, const std::string& stem) {
  const std::string base = dir.empty() ? stem : dir + "/" + stem;
  write_file_atomic(base + ".json", report_to_json(r).dump(2) + "\n");
  emit_plot_data(r, dir, stem);
}

std::string config_hash(const json& config) { return hex64(fnv1a64(config.dump())); }

}  // namespace mosco::exp
