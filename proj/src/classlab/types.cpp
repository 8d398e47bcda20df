#include "mosco/classlab/types.hpp"

#include <algorithm>
#include <cmath>

#include "mosco/core/error.hpp"
#include "mosco/core/io.hpp"
#include "mosco/geom/scene_io.hpp"

namespace mosco::classlab {

using nlohmann::json;

const char* to_string(Status s) {
  switch (s) {
    case Status::PASS: return "PASS";
    case Status::FAIL: return "FAIL";
    case Status::UNKNOWN: return "UNKNOWN";
  }
  return "UNKNOWN";
}

Status status_from_string(const std::string& s) {
  if (s == "PASS") return Status::PASS;
  if (s == "FAIL") return Status::FAIL;
  if (s == "UNKNOWN") return Status::UNKNOWN;
  fail(ErrorCode::MalformedSpec, "unknown verdict status " + s);
}

json verdict_to_json(const Verdict& v) {
  json w = json::array();
  for (const auto& x : v.witnesses)
    w.push_back({{"point", geom::point_to_json(x.point)}, {"condition", x.condition}, {"value", x.value}});
  return {{"status", to_string(v.status)}, {"witnesses", w}};
}

Verdict verdict_from_json(const json& j) try {
  Verdict v;
  v.status = status_from_string(j.at("status").get<std::string>());
  for (const auto& w : j.at("witnesses"))
    v.witnesses.push_back({geom::point_from_json(w.at("point")), w.at("condition").get<std::string>(), w.at("value").get<double>()});
  return v;
} catch (const json::exception& e) {
  fail(ErrorCode::MalformedSpec, e.what());
}

Modulus Modulus::linear(double a, double delta0) {
  if (!(a > 0) || !(delta0 > 0)) fail(ErrorCode::InvalidArgument, "linear modulus needs a > 0 and delta0 > 0");
  Modulus m;
  m.kind_ = Kind::Linear;
  m.a_ = a;
  m.d0_ = delta0;
  return m;
}

Modulus Modulus::quadratic(double a) {
  if (!(a > 0)) fail(ErrorCode::InvalidArgument, "quadratic modulus needs a > 0");
  Modulus m;
  m.kind_ = Kind::Quadratic;
  m.a_ = a;
  return m;
}

Modulus Modulus::table(std::vector<double> xs, std::vector<double> ys) {
  if (xs.empty() || xs.size() != ys.size()) fail(ErrorCode::InvalidArgument, "modulus table needs matching, non-empty columns");
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!(xs[i] > 0) || !(ys[i] > 0)) fail(ErrorCode::InvalidArgument, "modulus table entries must be positive");
    if (i > 0 && (!(xs[i] > xs[i - 1]) || ys[i] < ys[i - 1]))
      fail(ErrorCode::InvalidArgument, "modulus table must be increasing in x and nondecreasing in y");
  }
  Modulus m;
  m.kind_ = Kind::Table;
  m.xs_ = std::move(xs);
  m.ys_ = std::move(ys);
  return m;
}

double Modulus::operator()(double d) const {
  if (d <= 0) return 0.0;
  switch (kind_) {
    case Kind::Linear: return a_ * std::min(d, d0_);
    case Kind::Quadratic: return a_ * d * d;
    case Kind::Table: {
      const auto it = std::lower_bound(xs_.begin(), xs_.end(), d);  // first xs >= d
      if (it == xs_.end()) return ys_.back();
      return ys_[static_cast<std::size_t>(it - xs_.begin())];
    }
  }
  return 0.0;
}

json Modulus::to_json() const {
  switch (kind_) {
    case Kind::Linear: {
      json j = {{"kind", "linear"}, {"a", a_}};
      if (std::isfinite(d0_)) j["delta0"] = d0_;
      return j;
    }
    case Kind::Quadratic: return {{"kind", "quadratic"}, {"a", a_}};
    case Kind::Table: return {{"kind", "table"}, {"x", xs_}, {"y", ys_}};
  }
  return {};
}

Modulus Modulus::from_json(const json& j) try {
  const std::string k = j.at("kind").get<std::string>();
  if (k == "linear")
    return linear(j.at("a").get<double>(), j.contains("delta0") ? j["delta0"].get<double>() : std::numeric_limits<double>::infinity());
  if (k == "quadratic") return quadratic(j.at("a").get<double>());
  if (k == "table") return table(j.at("x").get<std::vector<double>>(), j.at("y").get<std::vector<double>>());
  fail(ErrorCode::MalformedSpec, "unknown modulus kind " + k);
} catch (const json::exception& e) {
  fail(ErrorCode::MalformedSpec, e.what());
}

void ClassParams::validate() const {
  if (!(r > 0)) fail(ErrorCode::InvalidArgument, "r must be positive");
  if (!(L >= 1)) fail(ErrorCode::InvalidArgument, "L must be >= 1");
  if (M0 < 1) fail(ErrorCode::InvalidArgument, "M0 must be >= 1");
  if (!(a > 0) || !(delta0 > 0)) fail(ErrorCode::InvalidArgument, "a and delta0 must be positive");
}

json params_to_json(const ClassParams& p) {
  return {{"r", p.r}, {"L", p.L}, {"M0", p.M0}, {"omega", p.omega.to_json()}, {"a", p.a}, {"delta0", p.delta0},
          {"gamma", p.gamma.to_json()}, {"R", p.R}, {"R0", p.R0}};
}

ClassParams params_from_json(const json& j) try {
  ClassParams p;
  if (j.contains("r")) p.r = j["r"].get<double>();
  if (j.contains("L")) p.L = j["L"].get<double>();
  if (j.contains("M0")) p.M0 = j["M0"].get<int>();
  if (j.contains("omega")) p.omega = Modulus::from_json(j["omega"]);
  if (j.contains("a")) p.a = j["a"].get<double>();
  if (j.contains("delta0")) p.delta0 = j["delta0"].get<double>();
  if (j.contains("gamma")) p.gamma = Modulus::from_json(j["gamma"]);
  if (j.contains("R")) p.R = j["R"].get<double>();
  if (j.contains("R0")) p.R0 = j["R0"].get<double>();
  p.validate();
  return p;
} catch (const json::exception& e) {
  fail(ErrorCode::MalformedSpec, e.what());
}

json decomposition_to_json(const Decomposition& d) {
  json pieces = json::array();
  for (const auto& p : d.pieces) {
    json arcs = json::array();
    for (const auto& a : p.arcs) arcs.push_back({{"polyline", a.polyline}, {"start", a.start}, {"end", a.end}});
    pieces.push_back({{"arcs", arcs}});
  }
  return {{"pieces", pieces}};
}

Decomposition decomposition_from_json(const json& j) try {
  Decomposition d;
  for (const auto& p : j.at("pieces")) {
    Piece piece;
    for (const auto& a : p.at("arcs"))
      piece.arcs.push_back({a.at("polyline").get<int>(), a.at("start").get<double>(), a.at("end").get<double>()});
    d.pieces.push_back(std::move(piece));
  }
  return d;
} catch (const json::exception& e) {
  fail(ErrorCode::MalformedSpec, e.what());
}

Decomposition load_decomposition(const std::string& path) {
  json j;
  try {
    j = json::parse(read_text_file(path));
  } catch (const json::exception& e) {
    fail(ErrorCode::MalformedSpec, path + ": " + e.what());
  }
  return decomposition_from_json(j);
}

void save_decomposition(const std::string& path, const Decomposition& d) {
  write_file_atomic(path, decomposition_to_json(d).dump(2) + "\n");
}

double Arc::length() const {
  double l = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) l += geom::dist(pts[i], pts[i + 1]);
  return l;
}

std::vector<geom::Segment> Arc::segments() const {
  std::vector<geom::Segment> s;
  if (pts.size() == 1) s.push_back({pts[0], pts[0]});
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) s.push_back({pts[i], pts[i + 1]});
  return s;
}

Arc materialize(const CompactScene& s, const ArcRef& ref) {
  if (ref.polyline < 0 || static_cast<std::size_t>(ref.polyline) >= s.cracks.size())
    fail(ErrorCode::MalformedSpec, "arc references a missing polyline");
  const auto& pl = s.cracks[static_cast<std::size_t>(ref.polyline)];
  const double last = static_cast<double>(pl.pts.size() - 1);
  if (pl.is_point()) {
    if (ref.start != 0 || ref.end != 0) fail(ErrorCode::MalformedSpec, "point arcs use start = end = 0");
    return {pl.pts, false};
  }
  if (!(ref.start >= 0 && ref.end <= last && ref.start < ref.end)) fail(ErrorCode::MalformedSpec, "arc parameters out of range");
  auto at = [&](double t) {
    const std::size_t i = std::min(static_cast<std::size_t>(std::floor(t)), pl.pts.size() - 2);
    return geom::lerp(pl.pts[i], pl.pts[i + 1], t - static_cast<double>(i));
  };
  Arc a;
  a.pts.push_back(at(ref.start));
  for (std::size_t i = static_cast<std::size_t>(std::floor(ref.start)) + 1; static_cast<double>(i) < ref.end; ++i)
    if (static_cast<double>(i) > ref.start) a.pts.push_back(pl.pts[i]);
  a.pts.push_back(at(ref.end));
  // Drop near-duplicate points produced by parameters sitting on vertices.
  std::vector<Point> clean;
  for (const Point& p : a.pts)
    if (clean.empty() || geom::dist(clean.back(), p) > 1e-14) clean.push_back(p);
  a.pts = std::move(clean);
  a.closed = pl.closed() && ref.start == 0 && ref.end == last;
  return a;
}

Decomposition trivial_decomposition(const CompactScene& s, bool single_piece) {
  Decomposition d;
  for (std::size_t i = 0; i < s.cracks.size(); ++i) {
    const double last = s.cracks[i].is_point() ? 0.0 : static_cast<double>(s.cracks[i].pts.size() - 1);
    ArcRef a{static_cast<int>(i), 0.0, last};
    if (single_piece) {
      if (d.pieces.empty()) d.pieces.emplace_back();
      d.pieces[0].arcs.push_back(a);
    } else {
      d.pieces.push_back({{a}});
    }
  }
  return d;
}

}  // namespace mosco::classlab
