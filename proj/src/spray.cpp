#include "finsler/spray.hpp"

#include <cmath>

#include "finsler/error.hpp"
#include "finsler/jet_geometry.hpp"
#include "finsler/metric.hpp"
#include "finsler/tensor.hpp"

namespace finsler {

Vec spray_oracle(const PhiModel& m, const EvalPoint& p) {
  const FinslerExpansion fx = expand_finsler(m, p, 1, 2);
  const std::vector<Jet> G = spray_jets(fx, p);
  Vec out(p.dim());
  for (int i = 0; i < p.dim(); ++i) out[i] = G[i].value();
  return out;
}

Vec spray_closed(const PhiModel& m, const EvalPoint& p) {
  const PointData d = point_data(m, p, 2);
  const PhiJet& j = d.phi;
  const Invariants& inv = d.inv;
  const SymTensor2 ginv = inverse_metric(fundamental_tensor(m, p));
  const double s = inv.s, t = inv.t, r = inv.r;
  const double f = j.value();
  const double fu = j(1, 0, 0, 0), fs = j(0, 1, 0, 0), fv = j(0, 0, 1, 0);
  const double fus = j(1, 1, 0, 0), fss = j(0, 2, 0, 0), fsv = j(0, 1, 1, 0);
  const double fut = j(1, 0, 0, 1), fst = j(0, 1, 0, 1), fvt = j(0, 0, 1, 1);

  const double ky = r / (2 * f) * (2 * s * fu + fs + t * fv);
  const double ks = 2 * s * fus + fss + t * fsv - 2 * fu;
  const double kt = 2 * s * fut + fst + t * fvt - fv;
  const int n = p.dim();
  Vec w(n);
  for (int l = 0; l < n; ++l) w[l] = ks * inv.s_cov[l] + kt * inv.t_cov[l];
  const Vec gw = ginv.contract(w);
  Vec G(n);
  for (int i = 0; i < n; ++i) G[i] = ky * p.y[i] + 0.5 * r * r * f * gw[i];
  return G;
}

PqrDecomposition pqr_decompose(const Vec& G, const EvalPoint& p) {
  const double r = norm(p.y);
  Vec by(p.dim()), bx(p.dim()), ba(p.dim());
  for (int i = 0; i < p.dim(); ++i) {
    by[i] = r * p.y[i];
    bx[i] = r * r * p.x[i];
    ba[i] = r * r * p.a[i];
  }
  constexpr double kMinConditioning = 1e-6;
  std::vector<Vec> basis{by};
  if (norm(bx) == 0.0 || frame_conditioning({by, bx}) < kMinConditioning)
    throw Error(ErrorCode::RankDeficientFrame, "x is parallel to y");
  basis.push_back(bx);
  const bool use_a = norm(ba) > 0.0 && static_cast<int>(basis.size()) < p.dim() &&
                     frame_conditioning({by, bx, ba}) >= kMinConditioning;
  if (use_a) basis.push_back(ba);

  const LeastSquaresFit fit = least_squares(basis, G);
  PqrDecomposition out;
  out.P = fit.coefficients[0];
  out.Q = fit.coefficients[1];
  if (use_a) out.R = fit.coefficients[2];
  out.residual = fit.residual;
  return out;
}

SprayValue spray_value(const PhiModel& m, const EvalPoint& p) {
  SprayValue v;
  v.G = spray_oracle(m, p);
  v.pqr = pqr_decompose(v.G, p);
  return v;
}

EvalPoint canonical_point(const PhiModel& m, const InvariantPoint& q) {
  if (m.uses_anchor()) return realize_invariants(1.0, q.u, q.s, q.v, q.t, q.a2, 4);
  return realize_invariants(1.0, q.u, q.s, 0.0, 0.0, 1.0, 4);
}

PqrValue pqr_field(const PhiModel& m, const InvariantPoint& q) {
  const EvalPoint p = canonical_point(m, q);
  const PqrDecomposition d = pqr_decompose(spray_oracle(m, p), p);
  return {d.P.value_or(0.0), d.Q.value_or(0.0), d.R.value_or(0.0)};
}

namespace {

struct Stencil1 {
  std::vector<int> offsets;
  std::vector<double> weights;
};

const Stencil1& stencil(int order) {
  static const Stencil1 st[] = {
      {{0}, {1.0}},
      {{-1, 1}, {-0.5, 0.5}},
      {{-1, 0, 1}, {1.0, -2.0, 1.0}},
      {{-2, -1, 1, 2}, {-0.5, 1.0, -1.0, 0.5}},
  };
  return st[order];
}

// The t-step is scaled by |a| since t ranges over [−|a|, |a|].
PqrValue fd_once(const PhiModel& m, const InvariantPoint& q, int ks, int kt, double h) {
  const double ht = h * std::min(1.0, std::sqrt(q.a2));
  PqrValue acc;
  const auto& ss = stencil(ks);
  const auto& ts = stencil(kt);
  for (std::size_t a = 0; a < ss.offsets.size(); ++a)
    for (std::size_t b = 0; b < ts.offsets.size(); ++b) {
      InvariantPoint qq = q;
      qq.s += h * ss.offsets[a];
      qq.t += ht * ts.offsets[b];
      const PqrValue v = pqr_field(m, qq);
      const double w = ss.weights[a] * ts.weights[b];
      acc.P += w * v.P;
      acc.Q += w * v.Q;
      acc.R += w * v.R;
    }
  const double scale = std::pow(h, ks) * std::pow(ht, kt);
  return {acc.P / scale, acc.Q / scale, acc.R / scale};
}

}  // namespace

PqrPartials pqr_partials(const PhiModel& m, const InvariantPoint& q) {
  PqrPartials out;
  out.d[0][0] = pqr_field(m, q);
  // Models without anchor dependence are constant in t.
  const int max_t = m.uses_anchor() ? 3 : 0;
  for (int ks = 0; ks <= 3; ++ks)
    for (int kt = 0; ks + kt <= 3 && kt <= max_t; ++kt) {
      if (ks + kt == 0) continue;
      const double h = fd_step(ks + kt);
      const PqrValue coarse = fd_once(m, q, ks, kt, h);
      const PqrValue fine = fd_once(m, q, ks, kt, 0.5 * h);
      out.d[ks][kt] = {(4 * fine.P - coarse.P) / 3, (4 * fine.Q - coarse.Q) / 3,
                       (4 * fine.R - coarse.R) / 3};
    }
  return out;
}

Trajectory geodesic_integrate(const PhiModel& m, const Vec& x0, const Vec& y0, const Vec& a,
                              int steps, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt))
    throw Error(ErrorCode::ConfigError, "dt must be positive");
  if (steps < 0) throw Error(ErrorCode::ConfigError, "steps must be non-negative");
  const int n = static_cast<int>(x0.size());
  if (static_cast<int>(y0.size()) != n || static_cast<int>(a.size()) != n)
    throw Error(ErrorCode::ConfigError, "x0, y0 and a must have equal length");

  auto accel = [&](const Vec& x, const Vec& y) {
    Vec G = spray_oracle(m, EvalPoint{x, y, a});
    for (double& g : G) g *= -2.0;
    return G;
  };
  auto axpy = [](const Vec& base, double h, const Vec& d) {
    Vec out(base);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += h * d[i];
    return out;
  };

  Trajectory tr;
  Vec x = x0, y = y0;
  const double F0 = finsler_value(m, EvalPoint{x, y, a});
  tr.tau.push_back(0.0);
  tr.x.push_back(x);
  tr.y.push_back(y);
  tr.F.push_back(F0);

  for (int step = 1; step <= steps; ++step) {
    try {
      const Vec k1x = y, k1y = accel(x, y);
      const Vec x2 = axpy(x, 0.5 * dt, k1x), y2 = axpy(y, 0.5 * dt, k1y);
      const Vec k2x = y2, k2y = accel(x2, y2);
      const Vec x3 = axpy(x, 0.5 * dt, k2x), y3 = axpy(y, 0.5 * dt, k2y);
      const Vec k3x = y3, k3y = accel(x3, y3);
      const Vec x4 = axpy(x, dt, k3x), y4 = axpy(y, dt, k3y);
      const Vec k4x = y4, k4y = accel(x4, y4);
      Vec xn(n), yn(n);
      for (int i = 0; i < n; ++i) {
        xn[i] = x[i] + dt / 6 * (k1x[i] + 2 * k2x[i] + 2 * k3x[i] + k4x[i]);
        yn[i] = y[i] + dt / 6 * (k1y[i] + 2 * k2y[i] + 2 * k3y[i] + k4y[i]);
      }
      const double F = finsler_value(m, EvalPoint{xn, yn, a});
      x = std::move(xn);
      y = std::move(yn);
      tr.tau.push_back(step * dt);
      tr.x.push_back(x);
      tr.y.push_back(y);
      tr.F.push_back(F);
      tr.max_F_drift = std::max(tr.max_F_drift, std::abs(F - F0) / F0);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::OutOfDomain && e.code() != ErrorCode::SingularMetric) throw;
      tr.domain_exit = true;
      break;
    }
  }
  return tr;
}

}  // namespace finsler
