#include "finsler/metric.hpp"

#include "finsler/error.hpp"
#include "finsler/jet_geometry.hpp"

namespace finsler {

PointData point_data(const PhiModel& m, const EvalPoint& p, int order) {
  PointData d;
  d.inv = compute_invariants(p);
  d.phi = phi_jet(m, d.inv.u, d.inv.s, d.inv.v, d.inv.t, order);
  return d;
}

std::array<double, 7> metric_coefficients(const PhiJet& j, const Invariants& inv) {
  const double s = inv.s, t = inv.t;
  const double f = j.value();
  const double fs = j(0, 1, 0, 0), ft = j(0, 0, 0, 1);
  const double fss = j(0, 2, 0, 0), fst = j(0, 1, 0, 1), ftt = j(0, 0, 0, 2);
  const double ss = fs * fs + f * fss;
  const double tt = ft * ft + f * ftt;
  const double st = fs * ft + f * fst;
  std::array<double, 7> c{};
  c[0] = f * f - s * f * fs - t * f * ft;
  c[1] = tt;
  c[2] = s * s * ss + t * t * tt + 2 * t * s * st - s * f * fs - t * f * ft;
  c[3] = f * ft - s * st - t * tt;
  c[4] = f * fs - s * ss - t * st;
  c[5] = st;
  c[6] = ss;
  return c;
}

SymTensor2 fundamental_tensor(const PhiModel& m, const EvalPoint& p) {
  const PointData d = point_data(m, p, 2);
  const auto c = metric_coefficients(d.phi, d.inv);
  const int n = p.dim();
  const Vec& r = d.inv.r_cov;
  SymTensor2 g(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      const double x_i = p.x[i], x_j = p.x[j], a_i = p.a[i], a_j = p.a[j];
      g.set(i, j,
            (i == j ? c[0] : 0.0) + c[1] * a_i * a_j + c[2] * r[i] * r[j] +
                c[3] * (a_j * r[i] + a_i * r[j]) + c[4] * (x_j * r[i] + x_i * r[j]) +
                c[5] * (a_j * x_i + a_i * x_j) + c[6] * x_i * x_j);
    }
  return g;
}

SymTensor2 fundamental_tensor_oracle(const PhiModel& m, const EvalPoint& p) {
  const FinslerExpansion fx = expand_finsler(m, p, 0, 2);
  const int n = p.dim();
  SymTensor2 g(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) g.set(i, j, 0.5 * fx.F2.partial_vars({fx.yv(i), fx.yv(j)}));
  return g;
}

SymTensor2 angular_metric(const PhiJet& j, const Invariants& inv) {
  const int n = static_cast<int>(inv.r_cov.size());
  const double f = j.value();
  const double sigma1 = f - inv.s * j(0, 1, 0, 0) - inv.t * j(0, 0, 0, 1);
  const double fss = j(0, 2, 0, 0), fst = j(0, 1, 0, 1), ftt = j(0, 0, 0, 2);
  const Vec &r = inv.r_cov, &sc = inv.s_cov, &tc = inv.t_cov;
  SymTensor2 h(n);
  for (int i = 0; i < n; ++i)
    for (int k = i; k < n; ++k)
      h.set(i, k,
            sigma1 * f * ((i == k ? 1.0 : 0.0) - r[i] * r[k]) + f * fss * sc[i] * sc[k] +
                f * ftt * tc[i] * tc[k] + f * fst * (sc[i] * tc[k] + sc[k] * tc[i]));
  return h;
}

SymTensor2 angular_metric(const PhiModel& m, const EvalPoint& p) {
  const PointData d = point_data(m, p, 2);
  return angular_metric(d.phi, d.inv);
}

SymTensor2 angular_metric_oracle(const PhiModel& m, const EvalPoint& p) {
  const FinslerExpansion fx = expand_finsler(m, p, 0, 2);
  const int n = p.dim();
  Vec Fy(n);
  for (int i = 0; i < n; ++i) Fy[i] = fx.F.partial_vars({fx.yv(i)});
  SymTensor2 h(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      h.set(i, j, 0.5 * fx.F2.partial_vars({fx.yv(i), fx.yv(j)}) - Fy[i] * Fy[j]);
  return h;
}

SymTensor2 inverse_metric(const SymTensor2& g) { return invert_spd(g); }

QuadraticForms quadratic_forms(const SymTensor2& ginv, const Invariants& inv) {
  return {ginv.quadratic(inv.s_cov, inv.s_cov), ginv.quadratic(inv.s_cov, inv.t_cov),
          ginv.quadratic(inv.t_cov, inv.t_cov)};
}

double spherical_S2(const PhiModel& m, const EvalPoint& p) {
  const Invariants inv = compute_invariants(p);
  if (m.uses_anchor() && inv.a2 != 0.0)
    throw Error(ErrorCode::NotSphericallySymmetric, "model depends on the anchor covector");
  const PhiJet j = phi_jet(m, inv.u, inv.s, inv.v, inv.t, 2);
  const double f = j.value(), fs = j(0, 1, 0, 0), fss = j(0, 2, 0, 0);
  const double w = inv.u - inv.s * inv.s;
  const double c0 = f * f - inv.s * f * fs;
  const double A = fss / (f - inv.s * fs + w * fss);
  return (w - A * w * w) / c0;
}

}  // namespace finsler
