/**
 * @file fields.hpp
 * @brief P1 fields on cracked meshes and the data they are computed from.
 */
#pragma once

#include <array>
#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mosco/mesh/crackmesh.hpp"

namespace mosco::pde {

using geom::Point;
using mesh::CrackMesh;
using cplx = std::complex<double>;

enum class FieldKind { REAL, COMPLEX };

/// Per-DOF values on a mesh. The mesh must outlive the field.
struct FeField {
  const CrackMesh* mesh = nullptr;
  FieldKind kind = FieldKind::REAL;
  std::vector<double> values;  // REAL
  std::vector<cplx> cvalues;   // COMPLEX

  static FeField real(const CrackMesh& m, std::vector<double> v);
  static FeField complex(const CrackMesh& m, std::vector<cplx> v);
  static FeField constant(const CrackMesh& m, double c);
  /// Nodal interpolation (every DOF of a vertex gets the same value).
  static FeField interpolate(const CrackMesh& m, const std::function<double(Point)>& g);

  std::size_t size() const { return kind == FieldKind::REAL ? values.size() : cvalues.size(); }
  bool is_complex() const { return kind == FieldKind::COMPLEX; }
  /// Value at corner k of triangle t.
  double at(int t, int k) const;
  cplx cat(int t, int k) const;
  /// Throws InvalidArgument unless the value count matches and all entries are finite.
  void validate() const;
};

/// Right-hand side data, sampled at quadrature points. Empty callables mean zero.
struct SourceData {
  std::function<double(Point)> f;
  std::function<Point(Point)> F;
};

struct Mat2 {
  double a11 = 1, a12 = 0, a22 = 1;  // symmetric
  Point apply(Point v) const { return {a11 * v.x + a12 * v.y, a12 * v.x + a22 * v.y}; }
  std::pair<double, double> eigenvalues() const;
  Mat2 sqrt() const;
};

/// sigma and q of the scattering problem. Outside the disk B(R0) they must be I and 1.
struct CoefficientField {
  std::function<Mat2(Point)> sigma;  // empty = identity
  std::function<double(Point)> q;    // empty = 1
  double lambda0 = 1, lambda1 = 1, c0 = 1, c1 = 1;
  double R0 = 0;

  Mat2 sigma_at(Point x) const { return sigma ? sigma(x) : Mat2{}; }
  double q_at(Point x) const { return q ? q(x) : 1.0; }
  /// Checks the ellipticity and range bounds at every quadrature point of m.
  /// Returns a description of the first violation, if any.
  std::optional<std::string> violation(const CrackMesh& m) const;
};

/// Exponents of the embedding chain for N = 2.
struct SobolevExponents {
  double p = 1.5;
  double pstar = 6;  // pN/(N-p), or Nq/(N+q)-based target for p = N
  double s = 3;      // (N-1)p/(N-p)
  double q = 0;      // target exponent, only used when p = N
  double p1 = 0;     // Nq/(N+q) when p = N

  static SobolevExponents for_p(double p, double q_target = 4.0);
};

/// Per-DOF values keyed by vertex coordinates, 17 significant digits.
std::string field_dump(const FeField& u);
void save_field(const std::string& path, const FeField& u);

}  // namespace mosco::pde
