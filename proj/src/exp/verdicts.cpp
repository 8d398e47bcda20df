/**
 * @file verdicts.cpp
 * @brief Verdict rules. Each is a function of the experiment tag and the step table only.
 */
#include <algorithm>
#include <cmath>

#include "mosco/exp/report.hpp"

namespace mosco::exp {

namespace {

using Steps = std::vector<StepRecord>;

template <class F>
std::vector<double> column(const Steps& s, F f) {
  std::vector<double> out;
  for (const auto& x : s) out.push_back(f(x));
  return out;
}

bool strictly_decreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (!(v[i] < v[i - 1])) return false;
  return !v.empty();
}

bool strictly_increasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (!(v[i] > v[i - 1])) return false;
  return !v.empty();
}

double spread(const std::vector<double>& v) {
  if (v.empty()) return 0;
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return *lo > 0 ? *hi / *lo : INFINITY;
}

std::string extra_str(const StepRecord& s, const char* key) {
  return s.extra.contains(key) && s.extra[key].is_string() ? s.extra[key].get<std::string>() : std::string();
}

NamedVerdict outside_class(const Steps& s) {
  bool all = !s.empty();
  for (const auto& x : s) all = all && extra_str(x, "class_status") == "FAIL";
  return {"OUTSIDE_CLASS", "4", all, "every sieve scene FAILs the FR check at the experiment's class parameters"};
}

}  // namespace

std::vector<NamedVerdict> recompute_verdicts(const ExperimentReport& r) {
  const Steps& s = r.steps;
  std::vector<NamedVerdict> v;
  const auto err = column(s, [](const StepRecord& x) { return x.error; });
  if (r.experiment == "mosco") {
    v.push_back({"ERROR_DECREASING", "3", strictly_decreasing(err), "e_n strictly decreasing"});
    v.push_back({"ERROR_REDUCTION", "3", !err.empty() && err.back() <= err.front() / 4, "e_last <= e_first / 4"});
    v.push_back({"HAUSDORFF_DECREASING", "3", strictly_decreasing(column(s, [](const StepRecord& x) { return x.hausdorff; })),
                 "complementary Hausdorff distance strictly decreasing"});
    double sd = 0;
    for (const auto& x : s) sd = std::max(sd, x.symdiff);
    v.push_back({"SYMDIFF_SMALL", "3", !s.empty() && sd <= 1e-3, "symmetric-difference area <= 1e-3 at every step"});
  } else if (r.experiment == "sieve-wide") {
    const auto g = column(s, [](const StepRecord& x) { return x.norm; });
    v.push_back({"EMPTY_LIMIT", "4", g.size() >= 2 && g.back() <= g.front() / 2, "g_empty(last) <= g_empty(first) / 2"});
    v.push_back(outside_class(s));
  } else if (r.experiment == "sieve-tiny") {
    v.push_back({"FULL_LIMIT", "4", err.size() >= 2 && err.back() <= err.front() / 2, "g_full(last) <= g_full(first) / 2"});
    v.push_back(outside_class(s));
  } else if (r.experiment == "sieve-critical") {
    bool ok = !s.empty();
    for (const auto& x : s) ok = ok && std::min(x.error, x.norm) >= 0.05 * x.constant;
    v.push_back({"PERSISTENT_GAP", "4", ok, "g_full(n), g_empty(n) >= 0.05 ||u_full|| for every n"});
    v.push_back(outside_class(s));
  } else if (r.experiment == "sobolev") {
    std::vector<double> lin, cusp;
    for (const auto& x : s) {
      const std::string fam = extra_str(x, "family");
      if (fam == "linear") lin.push_back(x.constant);
      if (fam == "cusp") cusp.push_back(x.constant);
    }
    if (!lin.empty()) v.push_back({"UNIFORM", "6", spread(lin) <= 2, "max/min constant over the linear-gluing family <= 2"});
    if (!cusp.empty())
      v.push_back({"BLOWUP", "6", strictly_increasing(cusp) && cusp.back() >= 4 * cusp.front(),
                   "cusp-family constants strictly increasing with last/first >= 4"});
  } else if (r.experiment == "scatter-stability") {
    v.push_back({"ERROR_DECREASING", "8", strictly_decreasing(err), "E_n strictly decreasing"});
    v.push_back({"ERROR_REDUCTION", "8", !err.empty() && err.back() <= err.front() / 3, "E_last <= E_first / 3"});
  } else if (r.experiment == "uniform-bounds") {
    const auto b = column(s, [](const StepRecord& x) { return x.norm; });
    v.push_back({"BOUNDED", "8", !b.empty() && spread(b) <= 10, "max/min of ||u|| + ||grad u|| over the family <= 10"});
  }
  return v;
}

}  // namespace mosco::exp
