#include "finsler/landsberg.hpp"

#include <cmath>

#include "finsler/error.hpp"
#include "finsler/spray.hpp"

namespace finsler {
namespace {

constexpr double kMinConditioning = 1e-6;

double cyc(const Vec& a, const Vec& b, const Vec& c, int i, int j, int k) {
  return a[i] * b[j] * c[k] + a[j] * b[k] * c[i] + a[k] * b[i] * c[j];
}

double with_delta(const Vec& w, int i, int j, int k) {
  return w[i] * (j == k) + w[j] * (i == k) + w[k] * (i == j);
}

double all_perms(const Vec& a, const Vec& b, const Vec& c, int i, int j, int k) {
  return cyc(a, b, c, i, j, k) + cyc(a, c, b, i, j, k);
}

std::vector<double> wedge(const Vec& a, const Vec& b) {
  const int n = static_cast<int>(a.size());
  std::vector<double> out(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out[i * n + j] = a[i] * b[j] - a[j] * b[i];
  return out;
}

}  // namespace

SymTensor3 landsberg_oracle(const PhiModel& m, const EvalPoint& p) {
  return landsberg_bundle(m, p, false).L;
}

SymTensor3 landsberg_closed(const PhiModel& m, const EvalPoint& p) {
  const Invariants inv = compute_invariants(p);
  const PhiJet j = phi_jet(m, inv.u, inv.s, inv.v, inv.t, 1);
  const PqrPartials d = pqr_partials(m, {inv.u, inv.s, inv.v, inv.t, inv.a2});
  const double s = inv.s, t = inv.t;
  const double f = j.value(), fs = j(0, 1, 0, 0), ft = j(0, 0, 0, 1);
  const double X = s * f + (inv.u - s * s) * fs + (inv.v - s * t) * ft;
  const double A = t * f + (inv.v - s * t) * fs + (inv.a2 - t * t) * ft;
  auto P = [&](int ks, int kt) { return d.at(ks, kt).P; };
  auto Q = [&](int ks, int kt) { return d.at(ks, kt).Q; };
  auto R = [&](int ks, int kt) { return d.at(ks, kt).R; };

  const double L1 = 3 * fs * P(2, 0) + f * P(3, 0) + X * Q(3, 0) + A * R(3, 0);
  const double L2 = -f * (s * P(2, 0) + t * P(1, 1)) + fs * (P(0, 0) - s * P(1, 0) - t * P(0, 1)) +
                    X * (Q(1, 0) - s * Q(2, 0) - t * Q(1, 1)) +
                    A * (R(1, 0) - s * R(2, 0) - t * R(1, 1));
  const double L3 = f * P(0, 3) + 3 * ft * P(0, 2) + X * Q(0, 3) + A * R(0, 3);
  const double L4 = -f * (t * P(0, 2) + s * P(1, 1)) + ft * (P(0, 0) - s * P(1, 0) - t * P(0, 1)) +
                    X * (Q(0, 1) - t * Q(0, 2) - s * Q(1, 1)) +
                    A * (R(0, 1) - t * R(0, 2) - s * R(1, 1));
  const double L5 = ft * P(2, 0) + 2 * fs * P(1, 1) + f * P(2, 1) + X * Q(2, 1) + A * R(2, 1);
  const double L6 = fs * P(0, 2) + 2 * ft * P(1, 1) + f * P(1, 2) + X * Q(1, 2) + A * R(1, 2);
  const double L7 = -s * s * s * L1 + 3 * s * L2 - t * t * t * L3 + 3 * t * L4 -
                    3 * s * s * t * L5 - 3 * s * t * t * L6;
  const double L8 = -s * L2 - t * L4;
  const double L9 = -s * L1 - t * L5;
  const double L10 = s * s * L1 - L2 + 2 * s * t * L5 + t * t * L6;
  const double L11 = -t * L3 - s * L6;
  const double L12 = t * t * L3 - L4 + s * s * L5 + 2 * s * t * L6;
  const double L13 = -s * L5 - t * L6;

  const Vec &x = p.x, &a = p.a, &Y = inv.r_cov;
  const int n = p.dim();
  SymTensor3 L(n);
  for (int i = 0; i < n; ++i)
    for (int k = i; k < n; ++k)
      for (int l = k; l < n; ++l) {
        const double v = L1 * x[i] * x[k] * x[l] + L2 * with_delta(x, i, k, l) +
                         L3 * a[i] * a[k] * a[l] + L4 * with_delta(a, i, k, l) +
                         L5 * cyc(x, x, a, i, k, l) + L6 * cyc(a, a, x, i, k, l) +
                         L7 * Y[i] * Y[k] * Y[l] + L8 * with_delta(Y, i, k, l) +
                         L9 * cyc(x, x, Y, i, k, l) + L10 * cyc(Y, Y, x, i, k, l) +
                         L11 * cyc(a, a, Y, i, k, l) + L12 * cyc(Y, Y, a, i, k, l) +
                         L13 * all_perms(x, a, Y, i, k, l);
        L.set(i, k, l, -0.5 * f * v);
      }
  return L;
}

MeanLandsberg mean_landsberg(const LandsbergBundle& b, const EvalPoint& p) {
  const int n = b.n;
  const Invariants inv = compute_invariants(p);
  MeanLandsberg out;
  out.J = b.J;
  // J is degree −1 in y; ‖g⁻¹‖·‖g‖·‖G‖/r² sets its natural size and is the
  // floor for relative residuals (Berwald-type metrics have J ≡ 0).
  const double r = inv.r;
  out.scale = frobenius(b.g_inv.data()) * frobenius(b.g.data()) * norm(b.G) / (r * r);

  // Raise both free indices first, then lower with g.
  Vec Jup(n, 0.0);
  for (int m = 0; m < n; ++m)
    for (int i = 0; i < n; ++i) {
      double acc = 0.0;
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) acc += b.g_inv(j, k) * b.L(i, j, k);
      Jup[m] += b.g_inv(m, i) * acc;
    }
  const Vec Jlow = b.g.contract(Jup);
  out.contraction_defect = relative_error(Jlow, b.J, out.scale);

  Vec xleg(n), aleg(n);
  for (int i = 0; i < n; ++i) {
    xleg[i] = inv.s_cov[i];
    aleg[i] = inv.t_cov[i];
  }
  if (norm(xleg) == 0.0)
    throw Error(ErrorCode::RankDeficientFrame, "x is parallel to y");
  std::vector<Vec> legs{xleg};
  const bool use_a = norm(aleg) > 0.0 && n >= 3 && frame_conditioning({xleg, aleg}) >= kMinConditioning;
  if (use_a) legs.push_back(aleg);
  const LeastSquaresFit fit = least_squares(legs, b.J);
  out.H_land = fit.coefficients[0];
  if (use_a) out.K_land = fit.coefficients[1];
  const double denom = std::max(frobenius(b.J), out.scale);
  out.leg_residual = denom == 0.0 ? 0.0 : fit.residual_abs / denom;
  return out;
}

MeanLandsberg mean_landsberg(const PhiModel& m, const EvalPoint& p) {
  return mean_landsberg(landsberg_bundle(m, p, false), p);
}

Matrix stretch_tensor(const LandsbergBundle& b) {
  if (!b.has_derivatives) throw std::invalid_argument("stretch_tensor needs J derivatives");
  const int n = b.n;
  Matrix S(n);
  // (i, j) entry of ∂J_i/∂y^m ∂G^m/∂y^j
  Matrix conn(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double acc = 0.0;
      for (int m = 0; m < n; ++m) acc += b.dJ_dy(i, m) * b.dG_dy(m, j);
      conn(i, j) = acc;
    }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double v =
          2 * (b.dJ_dx(i, j) - b.dJ_dx(j, i)) - 2 * (conn(i, j) - conn(j, i));
      S(i, j) = v;
      S(j, i) = -v;
    }
  return S;
}

Matrix stretch_tensor(const PhiModel& m, const EvalPoint& p) {
  return stretch_tensor(landsberg_bundle(m, p, true));
}

double stretch_scale(const LandsbergBundle& b) {
  return std::max(1e-300, frobenius(b.dJ_dx.e) + frobenius(b.dJ_dy.e) * frobenius(b.dG_dy.e));
}

StretchDecomposition stretch_decompose(const LandsbergBundle& b, const EvalPoint& p) {
  const Invariants inv = compute_invariants(p);
  StretchDecomposition out;
  out.Sigma = stretch_tensor(b);
  out.scale = stretch_scale(b);
  if (frame_conditioning({p.y, p.x}) < kMinConditioning)
    throw Error(ErrorCode::RankDeficientFrame, "x is parallel to y");
  out.full_frame = p.dim() >= 3 && norm(p.a) > 0.0 &&
                   frame_conditioning({p.x, p.y, p.a}) >= kMinConditioning;

  const double r = inv.r, s = inv.s, t = inv.t;
  LeastSquaresFit fit;
  if (out.full_frame) {
    fit = least_squares({wedge(p.x, p.a), wedge(p.a, p.y), wedge(p.x, p.y)}, out.Sigma.e);
    const double T = fit.coefficients[0] / 2;
    out.T = T;
    out.Z = r * fit.coefficients[1] / 2 - s * T;
    out.W = r * fit.coefficients[2] / 2 + t * T;
  } else {
    fit = least_squares({wedge(p.x, p.y)}, out.Sigma.e);
    out.W = r * fit.coefficients[0] / 2;
  }
  // Σ̄ is often roundoff-sized; its natural scale is the floor.
  out.residual = fit.residual_abs / std::max(frobenius(out.Sigma.e), out.scale);
  return out;
}

StretchDecomposition stretch_decompose(const PhiModel& m, const EvalPoint& p) {
  return stretch_decompose(landsberg_bundle(m, p, true), p);
}

StretchVerdict weakly_stretch_test(const PhiModel& m, const std::vector<EvalPoint>& sample,
                                   double tol) {
  StretchVerdict v;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    try {
      const LandsbergBundle b = landsberg_bundle(m, sample[i], true);
      const double ratio = frobenius(stretch_tensor(b).e) / stretch_scale(b);
      ++v.points_tested;
      if (ratio <= v.max_ratio) continue;
      v.max_ratio = ratio;
      if (ratio > tol) {
        v.witness = i;
        try {
          v.witness_values = stretch_decompose(b, sample[i]);
        } catch (const Error&) {
          v.witness_values.reset();
        }
      }
    } catch (const Error&) {
      ++v.points_skipped;
    }
  }
  v.weakly_stretch = v.points_tested > 0 && v.max_ratio <= tol;
  return v;
}

}  // namespace finsler
