#include <cmath>
#include <sstream>

#include "mosco/core/error.hpp"
#include "mosco/core/io.hpp"
#include "mosco/pde/linalg.hpp"

namespace mosco::pde {

FeField FeField::real(const CrackMesh& m, std::vector<double> v) {
  FeField u;
  u.mesh = &m;
  u.values = std::move(v);
  u.validate();
  return u;
}

FeField FeField::complex(const CrackMesh& m, std::vector<cplx> v) {
  FeField u;
  u.mesh = &m;
  u.kind = FieldKind::COMPLEX;
  u.cvalues = std::move(v);
  u.validate();
  return u;
}

FeField FeField::constant(const CrackMesh& m, double c) {
  return real(m, std::vector<double>(static_cast<std::size_t>(m.ndofs()), c));
}

FeField FeField::interpolate(const CrackMesh& m, const std::function<double(Point)>& g) {
  std::vector<double> v(static_cast<std::size_t>(m.ndofs()));
  for (int d = 0; d < m.ndofs(); ++d) v[static_cast<std::size_t>(d)] = g(m.dof_point(d));
  return real(m, std::move(v));
}

double FeField::at(int t, int k) const {
  return values[static_cast<std::size_t>(mesh->tri_dofs[static_cast<std::size_t>(t)][static_cast<std::size_t>(k)])];
}

cplx FeField::cat(int t, int k) const {
  const auto d = static_cast<std::size_t>(mesh->tri_dofs[static_cast<std::size_t>(t)][static_cast<std::size_t>(k)]);
  return kind == FieldKind::COMPLEX ? cvalues[d] : cplx(values[d], 0.0);
}

void FeField::validate() const {
  if (!mesh) fail(ErrorCode::InvalidArgument, "field without a mesh");
  if (size() != static_cast<std::size_t>(mesh->ndofs()))
    fail(ErrorCode::InvalidArgument, "field has " + std::to_string(size()) + " values for " +
                                         std::to_string(mesh->ndofs()) + " DOFs");
  for (double v : values)
    if (!std::isfinite(v)) fail(ErrorCode::InvalidArgument, "non-finite field value");
  for (cplx v : cvalues)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) fail(ErrorCode::InvalidArgument, "non-finite field value");
}

std::pair<double, double> Mat2::eigenvalues() const {
  const double m = 0.5 * (a11 + a22), d = std::hypot(0.5 * (a11 - a22), a12);
  return {m - d, m + d};
}

Mat2 Mat2::sqrt() const {
  // For SPD 2x2: sqrt(A) = (A + sqrt(det) I) / sqrt(tr + 2 sqrt(det)).
  const double s = std::sqrt(a11 * a22 - a12 * a12);
  const double t = std::sqrt(a11 + a22 + 2 * s);
  return {(a11 + s) / t, a12 / t, (a22 + s) / t};
}

std::optional<std::string> CoefficientField::violation(const CrackMesh& m) const {
  const auto el = p1_elements(m);
  for (const P1Element& e : el)
    for (int k = 0; k < 3; ++k) {
      const Point x = e.edge_mid(k);
      const auto [lo, hi] = sigma_at(x).eigenvalues();
      const double qq = q_at(x);
      std::ostringstream os;
      os.precision(6);
      if (lo < lambda0 * (1 - 1e-12) || hi > lambda1 * (1 + 1e-12)) {
        os << "sigma eigenvalues [" << lo << ", " << hi << "] outside [" << lambda0 << ", " << lambda1 << "] at (" << x.x
           << ", " << x.y << ")";
        return os.str();
      }
      if (qq < c0 * (1 - 1e-12) || qq > c1 * (1 + 1e-12)) {
        os << "q = " << qq << " outside [" << c0 << ", " << c1 << "]";
        return os.str();
      }
      if (geom::norm(x) > R0) {
        const Mat2 s = sigma_at(x);
        if (std::abs(s.a11 - 1) > 1e-12 || std::abs(s.a12) > 1e-12 || std::abs(s.a22 - 1) > 1e-12 ||
            std::abs(qq - 1) > 1e-12) {
          os << "coefficients differ from (I, 1) outside B(R0) at (" << x.x << ", " << x.y << ")";
          return os.str();
        }
      }
    }
  return std::nullopt;
}

SobolevExponents SobolevExponents::for_p(double p, double q_target) {
  constexpr double N = 2;
  if (!(p > 1) || !(p <= N)) fail(ErrorCode::BadExponent, "p must lie in (1, 2]");
  SobolevExponents e;
  e.p = p;
  if (p < N) {
    e.pstar = p * N / (N - p);
    e.s = (N - 1) * p / (N - p);
  } else {
    if (!(q_target >= 1) || !std::isfinite(q_target)) fail(ErrorCode::BadExponent, "p = N needs a finite target q >= 1");
    e.q = q_target;
    e.p1 = N * q_target / (N + q_target);
    e.pstar = q_target;
    e.s = (N - 1) * q_target / N;
  }
  return e;
}

std::string field_dump(const FeField& u) {
  u.validate();
  std::ostringstream os;
  os.precision(17);
  os << "# moscolab field v1 " << (u.is_complex() ? "complex" : "real") << " " << u.size() << "\n";
  for (int d = 0; d < u.mesh->ndofs(); ++d) {
    const Point p = u.mesh->dof_point(d);
    os << d << ' ' << p.x << ' ' << p.y << ' ';
    if (u.is_complex())
      os << u.cvalues[static_cast<std::size_t>(d)].real() << ' ' << u.cvalues[static_cast<std::size_t>(d)].imag();
    else
      os << u.values[static_cast<std::size_t>(d)];
    os << '\n';
  }
  return os.str();
}

void save_field(const std::string& path, const FeField& u) { write_file_atomic(path, field_dump(u)); }

}  // namespace mosco::pde
