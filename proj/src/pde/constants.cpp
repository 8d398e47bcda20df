#include "mosco/pde/constants.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <random>

#include "mosco/core/error.hpp"
#include "mosco/pde/linalg.hpp"
#include "mosco/pde/norms.hpp"

namespace mosco::pde {

void validate_spec(const ConstantSpec& spec) {
  const double p = spec.p;
  switch (spec.mode) {
    case ConstantMode::SOBOLEV:
      if (!(p >= 1) || !(p <= 2) || !(spec.exponent >= 1)) fail(ErrorCode::BadExponent, "SOBOLEV needs 1 <= p <= 2, q >= 1");
      if (p < 2 && spec.exponent > 2 * p / (2 - p) * (1 + 1e-12))
        fail(ErrorCode::BadExponent, "SOBOLEV target exponent exceeds p*");
      if (!std::isfinite(spec.exponent)) fail(ErrorCode::BadExponent, "SOBOLEV target exponent must be finite");
      break;
    case ConstantMode::TRACE:
      if (!(p >= 1) || !(p <= 2) || !(spec.exponent >= 1)) fail(ErrorCode::BadExponent, "TRACE needs 1 <= p <= 2, s >= 1");
      if (p < 2 && spec.exponent > p / (2 - p) * (1 + 1e-12)) fail(ErrorCode::BadExponent, "TRACE exponent exceeds p/(2-p)");
      if (!std::isfinite(spec.exponent)) fail(ErrorCode::BadExponent, "TRACE exponent must be finite");
      break;
    case ConstantMode::FRIEDRICHS:
      if (!(p >= 1) || !(p < 2)) fail(ErrorCode::BadExponent, "FRIEDRICHS needs 1 <= p < 2");
      break;
  }
}

namespace {

constexpr double kA = 0.445948490915965, kB = 0.091576213509771;
constexpr double kWA = 0.223381589678011, kWB = 0.109951743655322;

struct TraceNode {
  int d0 = -1, d1 = -1;  // one or two DOFs (crack sides)
};

struct BEdge {
  TraceNode n0, n1;
  double len = 0;
};

class Ratio {
 public:
  Ratio(const CrackMesh& m, const ConstantSpec& spec) : spec_(spec), el_(p1_elements(m)), lump_(static_cast<std::size_t>(m.ndofs()), 0.0) {
    for (const P1Element& e : el_)
      for (int d : e.dof) lump_[static_cast<std::size_t>(d)] += e.area / 3;
    for (const auto& b : m.boundary_edges) edges_.push_back({{b.d0, -1}, {b.d1, -1}, geom::dist(m.vertices[static_cast<std::size_t>(b.v0)], m.vertices[static_cast<std::size_t>(b.v1)])});
    for (const auto& c : m.crack_edges) edges_.push_back({{c.a0, c.b0}, {c.a1, c.b1}, geom::dist(m.vertices[static_cast<std::size_t>(c.v0)], m.vertices[static_cast<std::size_t>(c.v1)])});
    if (spec.mode == ConstantMode::FRIEDRICHS) {
      const auto ex = SobolevExponents::for_p(std::max(spec.p, 1.0 + 1e-12));
      pstar_ = spec.p == 1 ? 2.0 : ex.pstar;
      s_ = spec.p == 1 ? 1.0 : ex.s;
    }
  }

  const std::vector<double>& lump() const { return lump_; }

  // log of the ratio; gradient written to grad if non-null.
  double log_ratio(const std::vector<double>& u, std::vector<double>* grad) const {
    const double p = spec_.p;
    std::vector<double> gI1, gI2, gG, gT;
    std::vector<double>* want = grad ? &gI1 : nullptr;
    switch (spec_.mode) {
      case ConstantMode::SOBOLEV: {
        const double Iq = power(u, spec_.exponent, want);
        const double Ip = power(u, p, grad ? &gI2 : nullptr);
        const double Gp = gradpow(u, p, grad ? &gG : nullptr);
        if (!(Iq > 0) || !(Ip + Gp > 0)) return -std::numeric_limits<double>::infinity();
        if (grad)
          for (std::size_t i = 0; i < u.size(); ++i) (*grad)[i] = gI1[i] / (spec_.exponent * Iq) - (gI2[i] + gG[i]) / (p * (Ip + Gp));
        return std::log(Iq) / spec_.exponent - std::log(Ip + Gp) / p;
      }
      case ConstantMode::TRACE: {
        const double s = spec_.exponent;
        const double Ts = tracepow(u, s, grad ? &gT : nullptr);
        const double Ip = power(u, p, grad ? &gI2 : nullptr);
        const double Gp = gradpow(u, p, grad ? &gG : nullptr);
        if (!(Ts > 0) || !(Ip + Gp > 0)) return -std::numeric_limits<double>::infinity();
        if (grad)
          for (std::size_t i = 0; i < u.size(); ++i) (*grad)[i] = gT[i] / (s * Ts) - (gI2[i] + gG[i]) / (p * (Ip + Gp));
        return std::log(Ts) / s - std::log(Ip + Gp) / p;
      }
      case ConstantMode::FRIEDRICHS: {
        const double I = power(u, pstar_, want);
        const double Gp = gradpow(u, p, grad ? &gG : nullptr);
        const double Ts = tracepow(u, s_, grad ? &gT : nullptr);
        const double g = std::pow(Gp, 1 / p), t = std::pow(Ts, 1 / s_);
        const double D = g + t;
        if (!(I > 0) || !(D > 0)) return -std::numeric_limits<double>::infinity();
        if (grad)
          for (std::size_t i = 0; i < u.size(); ++i) {
            const double dg = Gp > 0 ? g / (p * Gp) * gG[i] : 0.0;
            const double dt = Ts > 0 ? t / (s_ * Ts) * gT[i] : 0.0;
            (*grad)[i] = gI1[i] / (pstar_ * I) - (dg + dt) / D;
          }
        return std::log(I) / pstar_ - std::log(D);
      }
    }
    return 0.0;
  }

 private:
  // int |u|^q, gradient from the degree-4 rule.
  double power(const std::vector<double>& u, double q, std::vector<double>* grad) const {
    if (grad) grad->assign(u.size(), 0.0);
    double s = 0;
    for (const P1Element& e : el_) {
      const double v[3] = {u[static_cast<std::size_t>(e.dof[0])], u[static_cast<std::size_t>(e.dof[1])], u[static_cast<std::size_t>(e.dof[2])]};
      s += tri_power_integral(v[0], v[1], v[2], e.area, q);
      if (!grad) continue;
      for (int k = 0; k < 3; ++k)
        for (int w = 0; w < 2; ++w) {
          const double a = w == 0 ? kA : kB, wt = w == 0 ? kWA : kWB;
          double lam[3] = {a, a, a};
          lam[k] = 1 - 2 * a;
          const double x = lam[0] * v[0] + lam[1] * v[1] + lam[2] * v[2];
          const double dx = x == 0 ? 0.0 : q * std::pow(std::abs(x), q - 1) * (x > 0 ? 1 : -1);
          for (int i = 0; i < 3; ++i) (*grad)[static_cast<std::size_t>(e.dof[static_cast<std::size_t>(i)])] += e.area * wt * dx * lam[i];
        }
    }
    return s;
  }

  double gradpow(const std::vector<double>& u, double p, std::vector<double>* grad) const {
    if (grad) grad->assign(u.size(), 0.0);
    double s = 0;
    for (const P1Element& e : el_) {
      Point g{0, 0};
      for (int k = 0; k < 3; ++k) g = g + u[static_cast<std::size_t>(e.dof[static_cast<std::size_t>(k)])] * e.grad[static_cast<std::size_t>(k)];
      const double n = geom::norm(g);
      s += e.area * std::pow(n, p);
      if (!grad || n == 0) continue;
      const double c = p * std::pow(n, p - 2) * e.area;
      for (int k = 0; k < 3; ++k) (*grad)[static_cast<std::size_t>(e.dof[static_cast<std::size_t>(k)])] += c * geom::dot(g, e.grad[static_cast<std::size_t>(k)]);
    }
    return s;
  }

  // int |u|^+ ^s over the boundary; gradient through the side realizing the max.
  double tracepow(const std::vector<double>& u, double s, std::vector<double>* grad) const {
    if (grad) grad->assign(u.size(), 0.0);
    double sum = 0;
    auto pick = [&](const TraceNode& n) {
      if (n.d1 < 0) return n.d0;
      return std::abs(u[static_cast<std::size_t>(n.d0)]) >= std::abs(u[static_cast<std::size_t>(n.d1)]) ? n.d0 : n.d1;
    };
    for (const BEdge& e : edges_) {
      const int d0 = pick(e.n0), d1 = pick(e.n1);
      const double a = std::abs(u[static_cast<std::size_t>(d0)]), b = std::abs(u[static_cast<std::size_t>(d1)]);
      sum += edge_power_integral(a, b, e.len, s);
      if (!grad) continue;
      const double g = 1 / std::sqrt(3.0);
      for (double xi : {-g, g}) {
        const double l1 = 0.5 * (1 + xi), l0 = 1 - l1;
        const double v = l0 * a + l1 * b;
        const double dv = v == 0 ? 0.0 : s * std::pow(v, s - 1) * 0.5 * e.len;
        const double s0 = u[static_cast<std::size_t>(d0)] >= 0 ? 1 : -1, s1 = u[static_cast<std::size_t>(d1)] >= 0 ? 1 : -1;
        (*grad)[static_cast<std::size_t>(d0)] += dv * l0 * s0;
        (*grad)[static_cast<std::size_t>(d1)] += dv * l1 * s1;
      }
    }
    return sum;
  }

  ConstantSpec spec_;
  std::vector<P1Element> el_;
  std::vector<double> lump_;
  std::vector<BEdge> edges_;
  double pstar_ = 0, s_ = 0;
};

// Tent of graph radius rho around a DOF; graph distances follow triangles, so cracks block them.
std::vector<double> graph_tent(const CrackMesh& m, const std::vector<std::vector<int>>& nbr, int center, double rho) {
  std::vector<double> d(static_cast<std::size_t>(m.ndofs()), std::numeric_limits<double>::infinity());
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  d[static_cast<std::size_t>(center)] = 0;
  pq.push({0, center});
  while (!pq.empty()) {
    const auto [dv, v] = pq.top();
    pq.pop();
    if (dv > d[static_cast<std::size_t>(v)] || dv > rho) continue;
    for (int w : nbr[static_cast<std::size_t>(v)]) {
      const double c = dv + geom::dist(m.dof_point(v), m.dof_point(w));
      if (c < d[static_cast<std::size_t>(w)]) {
        d[static_cast<std::size_t>(w)] = c;
        pq.push({c, w});
      }
    }
  }
  std::vector<double> u(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) u[i] = std::max(0.0, 1 - d[i] / rho);
  return u;
}

}  // namespace

double constant_ratio(const FeField& u, const ConstantSpec& spec) {
  validate_spec(spec);
  u.validate();
  if (u.is_complex()) fail(ErrorCode::InvalidArgument, "constant ratios are defined for real fields");
  const Ratio R(*u.mesh, spec);
  const double l = R.log_ratio(u.values, nullptr);
  return std::isfinite(l) ? std::exp(l) : 0.0;
}

ConstantEstimate estimate_best_constant(const CrackMesh& m, const ConstantSpec& spec, const EstimateOptions& opt) {
  validate_spec(spec);
  const Ratio R(m, spec);
  const std::size_t n = static_cast<std::size_t>(m.ndofs());
  ConstantEstimate best;
  best.constant = 0;
  double best_log = -std::numeric_limits<double>::infinity();
  std::vector<double> best_u(n, 1.0);

  std::vector<std::vector<double>> starts;
  starts.emplace_back(n, 1.0);
  for (const FeField& w : opt.warm_starts) {
    if (w.mesh != &m || w.is_complex()) fail(ErrorCode::InvalidArgument, "warm start must be a real field on the same mesh");
    starts.push_back(w.values);
  }
  std::mt19937_64 rng(opt.seed);
  if (opt.restarts > 0) {
    std::vector<std::vector<int>> nbr(n);
    for (const auto& D : m.tri_dofs)
      for (int a : D)
        for (int b : D)
          if (a != b) nbr[static_cast<std::size_t>(a)].push_back(b);
    for (auto& v : nbr) {
      std::sort(v.begin(), v.end());
      v.erase(std::unique(v.begin(), v.end()), v.end());
    }
    const double diam = 2 * std::sqrt(2.0) * (m.disk_radius > 0 ? m.disk_radius : m.snapped.box_radius);
    std::uniform_int_distribution<int> pick(0, static_cast<int>(n) - 1);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double lo = std::log(3 * m.h), hi = std::log(std::max(3 * m.h, diam / 2));
    std::vector<std::pair<double, std::vector<double>>> pool;
    const int draws = std::max(opt.screen, opt.restarts);
    for (int r = 0; r < draws; ++r) {
      const int c = pick(rng);
      const double rho = std::exp(lo + (hi - lo) * unit(rng));
      auto u = graph_tent(m, nbr, c, rho);
      const double l = R.log_ratio(u, nullptr);
      ++best.evaluations;
      pool.emplace_back(l, std::move(u));
    }
    std::stable_sort(pool.begin(), pool.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    for (int r = 0; r < opt.restarts; ++r) starts.push_back(std::move(pool[static_cast<std::size_t>(r)].second));
  }

  std::vector<double> g(n), trial(n);
  for (std::vector<double>& u : starts) {
    double lr = R.log_ratio(u, &g);
    ++best.evaluations;
    double t = 0.1;
    bool stalled = false;
    for (int it = 0; it < opt.iters && std::isfinite(lr); ++it) {
      double umax = 0, dmax = 0;
      for (std::size_t i = 0; i < n; ++i) {
        g[i] /= R.lump()[i];
        umax = std::max(umax, std::abs(u[i]));
        dmax = std::max(dmax, std::abs(g[i]));
      }
      if (dmax == 0) {
        stalled = true;
        break;
      }
      const double scale = umax / dmax;
      bool improved = false;
      t = std::min(1.0, 2 * t);
      for (int ls = 0; ls < 40; ++ls, t *= 0.5) {
        for (std::size_t i = 0; i < n; ++i) trial[i] = u[i] + t * scale * g[i];
        const double l2 = R.log_ratio(trial, nullptr);
        ++best.evaluations;
        if (l2 > lr + 1e-14 * std::abs(lr)) {
          improved = true;
          break;
        }
      }
      if (!improved) {
        stalled = true;
        break;
      }
      // The ratio is homogeneous of degree zero; keep max |u| = 1.
      double mx = 0;
      for (double x : trial) mx = std::max(mx, std::abs(x));
      for (std::size_t i = 0; i < n; ++i) u[i] = trial[i] / mx;
      lr = R.log_ratio(u, &g);
      ++best.evaluations;
    }
    if (!stalled) best.converged = false;
    if (lr > best_log) {
      best_log = lr;
      best_u = u;
    }
  }
  if (!std::isfinite(best_log)) fail(ErrorCode::NonConvergence, "no start produced a finite ratio");
  best.constant = std::exp(best_log);
  best.maximizer = FeField::real(m, std::move(best_u));
  return best;
}

}  // namespace mosco::pde
