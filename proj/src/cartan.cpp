#include "finsler/cartan.hpp"

#include <cmath>

#include "finsler/error.hpp"
#include "finsler/jet_geometry.hpp"

namespace finsler {
namespace {

struct Partials {
  double f, fs, ft, fss, fst, ftt, fsss, fsst, fstt, fttt;

  explicit Partials(const PhiJet& j)
      : f(j.value()),
        fs(j(0, 1, 0, 0)),
        ft(j(0, 0, 0, 1)),
        fss(j(0, 2, 0, 0)),
        fst(j(0, 1, 0, 1)),
        ftt(j(0, 0, 0, 2)),
        fsss(j(0, 3, 0, 0)),
        fsst(j(0, 2, 0, 1)),
        fstt(j(0, 1, 0, 2)),
        fttt(j(0, 0, 0, 3)) {}
};

// a_i b_j c_k + a_j b_k c_i + a_k b_i c_j
double cyclic(const Vec& a, const Vec& b, const Vec& c, int i, int j, int k) {
  return a[i] * b[j] * c[k] + a[j] * b[k] * c[i] + a[k] * b[i] * c[j];
}

// h_ij w_k + h_jk w_i + h_ki w_j
double h_sym(const SymTensor2& h, const Vec& w, int i, int j, int k) {
  return h(i, j) * w[k] + h(j, k) * w[i] + h(k, i) * w[j];
}

bool anchor_free(const PhiModel& m, const EvalPoint& p) {
  return !m.uses_anchor() || norm(p.a) == 0.0;
}

}  // namespace

SigmaSet compute_sigmas(const PhiJet& j, const Invariants& inv) {
  const Partials d(j);
  const double s = inv.s, t = inv.t;
  SigmaSet out;
  auto& v = out.v;
  v[1] = d.f - s * d.fs - t * d.ft;
  if (!(std::abs(v[1]) > 1e-14 * std::max(1.0, std::abs(d.f))))
    throw Error(ErrorCode::DegenerateSigma1, "sigma1 = phi - s phi_s - t phi_t vanishes");
  v[2] = v[1] * d.fs - s * d.f * d.fss - t * d.f * d.fst;
  v[3] = v[1] * d.ft - s * d.f * d.fst - t * d.f * d.ftt;
  v[4] = 3 * d.fs * d.fss + d.f * d.fsss;
  v[5] = 3 * d.ft * d.ftt + d.f * d.fttt;
  v[6] = 2 * d.fs * d.fst + d.ft * d.fss + d.f * d.fsst;
  v[7] = 2 * d.ft * d.fst + d.fs * d.ftt + d.f * d.fstt;
  v[8] = d.f * (v[1] * v[4] - 3 * v[2] * d.fss);
  v[9] = d.f * (v[1] * v[5] - 3 * v[3] * d.ftt);
  v[10] = d.f * (v[1] * v[6] - 2 * v[2] * d.fst - v[3] * d.fss);
  v[11] = d.f * (v[1] * v[7] - 2 * v[3] * d.fst - v[2] * d.ftt);
  v[12] = inv.r * d.f * v[1];
  return out;
}

SymTensor3 cartan_closed(const PhiModel& m, const EvalPoint& p) {
  const PointData d = point_data(m, p, 3);
  const SigmaSet sg = compute_sigmas(d.phi, d.inv);
  const SymTensor2 h = angular_metric(d.phi, d.inv);
  const Vec &sc = d.inv.s_cov, &tc = d.inv.t_cov;
  const int n = p.dim();
  const double w = 1.0 / (2.0 * sg[12]);
  SymTensor3 C(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      for (int k = j; k < n; ++k) {
        const double val = sg[2] * h_sym(h, sc, i, j, k) + sg[3] * h_sym(h, tc, i, j, k) +
                           sg[8] * sc[i] * sc[j] * sc[k] + sg[9] * tc[i] * tc[j] * tc[k] +
                           sg[10] * cyclic(sc, sc, tc, i, j, k) +
                           sg[11] * cyclic(tc, tc, sc, i, j, k);
        C.set(i, j, k, w * val);
      }
  return C;
}

SymTensor3 cartan_oracle(const PhiModel& m, const EvalPoint& p) {
  const FinslerExpansion fx = expand_finsler(m, p, 0, 3);
  const int n = p.dim();
  SymTensor3 C(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        C.set_raw(i, j, k, 0.25 * fx.F2.partial_vars({fx.yv(i), fx.yv(j), fx.yv(k)}));
  return C;
}

MeanCartan mean_cartan(const PhiModel& m, const EvalPoint& p) {
  const PointData d = point_data(m, p, 3);
  const SigmaSet sg = compute_sigmas(d.phi, d.inv);
  MeanCartan out;
  out.g = fundamental_tensor(m, p);
  out.g_inv = inverse_metric(out.g);
  out.q = quadratic_forms(out.g_inv, d.inv);
  out.r = d.inv.r;
  const int n = p.dim();
  const double denom = d.phi.value() * sg[1];
  const auto& q = out.q;
  out.H = ((n + 1) * sg[2] + q.S2 * sg[8] + 2 * q.R2 * sg[10] + q.T2 * sg[11]) / denom;
  out.K = ((n + 1) * sg[3] + q.T2 * sg[9] + q.S2 * sg[10] + 2 * q.R2 * sg[11]) / denom;
  out.I.resize(n);
  for (int k = 0; k < n; ++k)
    out.I[k] = (out.H * d.inv.s_cov[k] + out.K * d.inv.t_cov[k]) / (2.0 * d.inv.r);
  return out;
}

Vec mean_cartan_oracle(const PhiModel& m, const EvalPoint& p) {
  const SymTensor2 ginv = inverse_metric(fundamental_tensor_oracle(m, p));
  const SymTensor3 C = cartan_oracle(m, p);
  const int n = p.dim();
  Vec I(n, 0.0);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) I[k] += ginv(i, j) * C(i, j, k);
  return I;
}

double cartan_norm_squared(const MeanCartan& mc) {
  const auto& q = mc.q;
  return (q.S2 * mc.H * mc.H + 2 * q.R2 * mc.H * mc.K + q.T2 * mc.K * mc.K) /
         (4.0 * mc.r * mc.r);
}

double cartan_norm(const PhiModel& m, const EvalPoint& p) {
  return std::sqrt(std::max(0.0, cartan_norm_squared(mean_cartan(m, p))));
}

double cartan_norm_direct(const PhiModel& m, const EvalPoint& p) {
  const SymTensor2 ginv = inverse_metric(fundamental_tensor_oracle(m, p));
  const Vec I = mean_cartan_oracle(m, p);
  return std::sqrt(std::max(0.0, ginv.quadratic(I, I)));
}

double spherical_norm_formula(const PhiModel& m, const EvalPoint& p) {
  if (!anchor_free(m, p))
    throw Error(ErrorCode::NotSphericallySymmetric, "model depends on the anchor covector");
  const PointData d = point_data(m, p, 3);
  const Partials f(d.phi);
  const double s = d.inv.s, w = d.inv.u - s * s;
  const double sigma1 = f.f - s * f.fs;
  const double rho = f.f * (sigma1 + w * f.fss);
  const int n = p.dim();
  const double num = (n + 1) * (sigma1 * f.fs - s * f.f * f.fss) * (sigma1 + w * f.fss) +
                     w * (sigma1 * f.fsss + 3 * s * f.fss * f.fss) * f.f;
  return std::abs(num / (2.0 * d.inv.r * sigma1 * rho)) * std::sqrt(w / rho);
}

double berwald_norm_explicit(const EvalPoint& p) {
  validate(p);
  if (p.dim() != 2)
    throw Error(ErrorCode::ConfigError, "the explicit Berwald norm holds in dimension 2 only");
  const Invariants inv = compute_invariants(p);
  const double u = inv.u, s = inv.s, w = u - s * s;
  if (!(u < 1.0 - kDomainMargin))
    throw Error(ErrorCode::OutOfDomain, "Berwald metric needs |x| < 1");
  const double A = std::sqrt(1.0 - u + s * s);
  const double F = inv.r * (A + s) * (A + s) / ((1 - u) * (1 - u) * A);
  return (3.0 / F) * std::abs(1.0 - s * (s + A) / ((1.0 - u) * (1.0 + 2.0 * w))) *
         std::sqrt(w / (1.0 + 2.0 * w));
}

std::string to_string(ReductionMethod m) {
  switch (m) {
    case ReductionMethod::General: return "general";
    case ReductionMethod::SphericalCorollary: return "spherical_corollary";
    case ReductionMethod::ConstrainedFit: return "constrained_fit";
  }
  return "unknown";
}

std::array<double, 2> corollary_pq(const PhiModel& m, const EvalPoint& p) {
  if (!anchor_free(m, p))
    throw Error(ErrorCode::NotSphericallySymmetric, "model depends on the anchor covector");
  const PointData d = point_data(m, p, 3);
  const Partials f(d.phi);
  const double s = d.inv.s, w = d.inv.u - s * s;
  const int n = p.dim();
  const double num = (n + 1) * ((f.f - s * f.fs) * f.fs - s * f.f * f.fss) *
                     (f.f - s * f.fs + w * f.fss);
  const double X = w * ((f.f - s * f.fs) * f.fsss + 3 * s * f.fss * f.fss);
  const double den = num + X * f.f;
  return {num / den, X * f.f / den};
}

CReducibilityReport semi_c_reducible(const PhiModel& m, const EvalPoint& p) {
  const PointData d = point_data(m, p, 3);
  const SigmaSet sg = compute_sigmas(d.phi, d.inv);
  const MeanCartan mc = mean_cartan(m, p);
  const int n = p.dim();
  const double F = d.inv.r * d.phi.value();

  CReducibilityReport rep;
  rep.H = mc.H;
  rep.K = mc.K;
  rep.I_norm2 = cartan_norm_squared(mc);
  if (!(rep.I_norm2 * F * F > 1e-10))
    throw Error(ErrorCode::RiemannianPoint, "mean Cartan torsion vanishes");

  const SymTensor3 C = cartan_closed(m, p);
  const SymTensor2 h = angular_metric(d.phi, d.inv);
  const std::size_t size = C.data().size();
  std::vector<double> B1(size), B2(size);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        const std::size_t idx = (static_cast<std::size_t>(i) * n + j) * n + k;
        B1[idx] = h_sym(h, mc.I, i, j, k) / (n + 1);
        B2[idx] = mc.I[i] * mc.I[j] * mc.I[k] / rep.I_norm2;
      }

  const double s = d.inv.s, t = d.inv.t;
  const double su = d.inv.u - s * s, sv = d.inv.v - s * t, sa = d.inv.a2 - t * t;
  const Partials f(d.phi);
  rep.M = sg[2] * (sg[1] * (n - 2) * f.f + sa * f.f * f.ftt + sv * f.f * f.fst) -
          sg[3] * (sv * f.f * f.fss + sa * f.f * f.fst) + sg[10] * sv - sg[11] * sa;
  rep.N = sg[2] * (sv * f.f * f.ftt + su * f.f * f.fst) -
          sg[3] * (sg[1] * (n - 2) * f.f + su * f.f * f.fss + sv * f.f * f.fst) +
          sg[10] * su - sg[11] * sv;

  if (anchor_free(m, p)) {
    const auto pq = corollary_pq(m, p);
    rep.P = pq[0];
    rep.Q = pq[1];
    rep.method = ReductionMethod::SphericalCorollary;
  } else {
    const double HN = mc.H * rep.N, KM = mc.K * rep.M;
    const double D = HN + KM;
    if (std::abs(D) <= 1e-8 * (std::abs(HN) + std::abs(KM)) || D == 0.0) {
      rep.degenerate_denominator = true;
      rep.method = ReductionMethod::ConstrainedFit;
      std::vector<double> diff(size), target(size);
      for (std::size_t i = 0; i < size; ++i) {
        diff[i] = B1[i] - B2[i];
        target[i] = C.data()[i] - B2[i];
      }
      const double dd = frobenius(diff);
      if (dd <= 1e-14 * frobenius(B1)) {
        rep.P = 1.0;
      } else {
        double acc = 0.0;
        for (std::size_t i = 0; i < size; ++i) acc += target[i] * diff[i];
        rep.P = acc / (dd * dd);
      }
      rep.Q = 1.0 - rep.P;
    } else {
      const double r = d.inv.r, N = rep.N, M = rep.M;
      rep.P = r * (n + 1) * (sg[2] * N + sg[3] * M) / (sg[12] * D);
      rep.Q = r * r * r *
              (4 * sg[8] * N * N * N + 4 * sg[9] * M * M * M + 12 * sg[10] * N * N * M +
               12 * sg[11] * N * M * M) *
              rep.I_norm2 / (sg[12] * D * D * D);
    }
  }

  std::vector<double> recon(size);
  for (std::size_t i = 0; i < size; ++i) recon[i] = rep.P * B1[i] + rep.Q * B2[i];
  rep.residual = relative_error(recon, C.data(), 1e-300);
  rep.best_fit_residual = least_squares({B1, B2}, C.data()).residual;
  return rep;
}

}  // namespace finsler
