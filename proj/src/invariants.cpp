#include "finsler/invariants.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "finsler/error.hpp"

namespace finsler {

double dot(const Vec& a, const Vec& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

double norm(const Vec& a) { return std::sqrt(dot(a, a)); }

void validate(const EvalPoint& p) {
  const std::size_t n = p.x.size();
  if (n < 2) throw Error(ErrorCode::ConfigError, "dimension must be at least 2");
  if (p.y.size() != n || p.a.size() != n)
    throw Error(ErrorCode::ConfigError, "x, y and a must have the same dimension");
  auto finite = [](const Vec& v) {
    return std::all_of(v.begin(), v.end(), [](double d) { return std::isfinite(d); });
  };
  if (!finite(p.x) || !finite(p.y) || !finite(p.a))
    throw Error(ErrorCode::ConfigError, "non-finite coordinate");
  if (norm(p.y) == 0.0) throw Error(ErrorCode::ZeroDirection, "y = 0");
}

Invariants compute_invariants(const EvalPoint& p) {
  validate(p);
  const int n = p.dim();
  Invariants inv;
  inv.r = norm(p.y);
  inv.u = dot(p.x, p.x);
  inv.s = dot(p.x, p.y) / inv.r;
  inv.v = dot(p.a, p.x);
  inv.t = dot(p.a, p.y) / inv.r;
  inv.a2 = dot(p.a, p.a);
  inv.r_cov.resize(n);
  inv.s_cov.resize(n);
  inv.t_cov.resize(n);
  for (int i = 0; i < n; ++i) {
    inv.r_cov[i] = p.y[i] / inv.r;
    inv.s_cov[i] = p.x[i] - inv.s * inv.r_cov[i];
    inv.t_cov[i] = p.a[i] - inv.t * inv.r_cov[i];
  }
  return inv;
}

EvalPoint realize_invariants(double r, double u, double s, double v, double t, double a2, int n) {
  constexpr double kMargin = 1e-10;
  if (n < 3) throw Error(ErrorCode::InfeasibleInvariants, "canonical frame needs n >= 3");
  if (!(r > 0)) throw Error(ErrorCode::InfeasibleInvariants, "r must be positive");
  const double w = u - s * s;
  if (!(w > kMargin)) throw Error(ErrorCode::InfeasibleInvariants, "requires u > s^2");
  const double a1 = (v - s * t) / std::sqrt(w);
  const double rest = a2 - t * t - a1 * a1;
  if (!(rest > kMargin))
    throw Error(ErrorCode::InfeasibleInvariants,
                "requires |a|^2 > t^2 + (v - s t)^2 / (u - s^2)");
  EvalPoint p{Vec(n, 0.0), Vec(n, 0.0), Vec(n, 0.0)};
  p.y[0] = r;
  p.x[0] = s;
  p.x[1] = std::sqrt(w);
  p.a[0] = t;
  p.a[1] = a1;
  p.a[2] = std::sqrt(rest);
  return p;
}

double contraction_defect(const EvalPoint& p, const Invariants& inv) {
  const double checks[] = {
      dot(inv.r_cov, inv.r_cov) - 1.0,
      dot(p.x, inv.r_cov) - inv.s,
      dot(p.a, inv.r_cov) - inv.t,
      dot(inv.r_cov, p.y) - inv.r,
      dot(inv.r_cov, inv.s_cov),
      dot(inv.r_cov, inv.t_cov),
      dot(inv.s_cov, inv.s_cov) - (inv.u - inv.s * inv.s),
      dot(inv.t_cov, inv.t_cov) - (inv.a2 - inv.t * inv.t),
      dot(inv.s_cov, inv.t_cov) - (inv.v - inv.s * inv.t),
  };
  double worst = 0.0;
  for (double c : checks) worst = std::max(worst, std::abs(c));
  return worst;
}

}  // namespace finsler
