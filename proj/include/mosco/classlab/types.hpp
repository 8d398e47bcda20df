/**
 * @file types.hpp
 * @brief Verdicts, moduli of continuity, class parameters and decomposition witnesses.
 */
#pragma once

#include <json.hpp>
#include <limits>
#include <string>
#include <vector>

#include "mosco/geom/scene.hpp"

namespace mosco::classlab {

using geom::CompactScene;
using geom::Point;

enum class Status { PASS, FAIL, UNKNOWN };
const char* to_string(Status s);
Status status_from_string(const std::string& s);

struct Witness {
  Point point;
  std::string condition;  // e.g. "MR.chord_arc"
  double value = 0.0;
  friend bool operator==(const Witness&, const Witness&) = default;
};

struct Verdict {
  Status status = Status::UNKNOWN;
  std::vector<Witness> witnesses;
  bool pass() const { return status == Status::PASS; }
  bool failed() const { return status == Status::FAIL; }
  friend bool operator==(const Verdict&, const Verdict&) = default;
};

nlohmann::json verdict_to_json(const Verdict& v);
Verdict verdict_from_json(const nlohmann::json& j);

/// Nondecreasing modulus of continuity: a*min(d, d0), a*d^2, or a left-continuous step table.
class Modulus {
 public:
  enum class Kind { Linear, Quadratic, Table };
  Modulus() = default;
  static Modulus linear(double a, double delta0 = std::numeric_limits<double>::infinity());
  static Modulus quadratic(double a);
  /// w(d) = ys[k] for d in (xs[k-1], xs[k]], ys[0] on (0, xs[0]], last value beyond.
  static Modulus table(std::vector<double> xs, std::vector<double> ys);

  double operator()(double d) const;
  Kind kind() const { return kind_; }
  bool is_linear() const { return kind_ == Kind::Linear; }
  double a() const { return a_; }
  double delta0() const { return d0_; }

  nlohmann::json to_json() const;
  static Modulus from_json(const nlohmann::json& j);
  friend bool operator==(const Modulus&, const Modulus&) = default;

 private:
  Kind kind_ = Kind::Linear;
  double a_ = 1.0;
  double d0_ = std::numeric_limits<double>::infinity();
  std::vector<double> xs_, ys_;
};

struct ClassParams {
  double r = 0.1;
  double L = 2.0;
  int M0 = 1;
  Modulus omega = Modulus::linear(1.0);
  double a = 1.0;
  double delta0 = 0.5;
  Modulus gamma = Modulus::linear(0.25);
  double R = 1.0;
  double R0 = 0.0;
  void validate() const;
  friend bool operator==(const ClassParams&, const ClassParams&) = default;
};

nlohmann::json params_to_json(const ClassParams& p);
ClassParams params_from_json(const nlohmann::json& j);

struct ConeSpec {
  double length = 0.1;  // ℓ
  double rho = 0.1;     // diameter cap of decomposition pieces
};

/// Sub-polyline of scene crack `polyline` between real vertex parameters
/// start < end (integer part = segment index, fraction = position on it).
struct ArcRef {
  int polyline = 0;
  double start = 0.0;
  double end = 0.0;
  friend bool operator==(const ArcRef&, const ArcRef&) = default;
};

struct Piece {
  std::vector<ArcRef> arcs;
  friend bool operator==(const Piece&, const Piece&) = default;
};

struct Decomposition {
  std::vector<Piece> pieces;
  friend bool operator==(const Decomposition&, const Decomposition&) = default;
};

nlohmann::json decomposition_to_json(const Decomposition& d);
Decomposition decomposition_from_json(const nlohmann::json& j);
Decomposition load_decomposition(const std::string& path);
void save_decomposition(const std::string& path, const Decomposition& d);

/// Materialized arc geometry.
struct Arc {
  std::vector<Point> pts;
  bool closed = false;
  double length() const;
  std::vector<geom::Segment> segments() const;
};

Arc materialize(const CompactScene& s, const ArcRef& ref);
/// One arc per crack polyline, covering it fully, each in its own piece.
Decomposition trivial_decomposition(const CompactScene& s, bool single_piece);

}  // namespace mosco::classlab
