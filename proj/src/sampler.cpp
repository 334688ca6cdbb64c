#include "finsler/sampler.hpp"

#include <cmath>
#include <numbers>

#include "finsler/error.hpp"
#include "finsler/metric.hpp"
#include "finsler/tensor.hpp"

namespace finsler {

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::normal() {
  if (spare_) {
    const double v = *spare_;
    spare_.reset();
    return v;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double rad = std::sqrt(-2.0 * std::log(u1));
  spare_ = rad * std::sin(2.0 * std::numbers::pi * u2);
  return rad * std::cos(2.0 * std::numbers::pi * u2);
}

namespace {

// Minimum lengths of the x-leg and (relative to |a|) of the part of a
// normal to span{x, y}.  Finite-difference stencils in (s, t) need the room.
constexpr double kMinXLeg = 0.05;
constexpr double kMinALegFraction = 0.3;

Vec unit_vector(Rng& rng, int n) {
  Vec v(n);
  double len = 0.0;
  while (len < 1e-12) {
    for (double& c : v) c = rng.normal();
    len = norm(v);
  }
  for (double& c : v) c /= len;
  return v;
}

bool acceptable(const PhiModel& m, const EvalPoint& p) {
  const Invariants inv = compute_invariants(p);
  if (!m.in_domain(inv.u, inv.s, inv.v, inv.t)) return false;
  const double xleg2 = inv.u - inv.s * inv.s;
  if (xleg2 < kMinXLeg * kMinXLeg) return false;
  if (p.dim() >= 3 && inv.a2 > 0.0) {
    const double aperp2 = inv.a2 - inv.t * inv.t -
                          (inv.v - inv.s * inv.t) * (inv.v - inv.s * inv.t) / xleg2;
    if (aperp2 < kMinALegFraction * kMinALegFraction * inv.a2) return false;
  }
  try {
    return min_eigenvalue(fundamental_tensor(m, p)) > 0.0;
  } catch (const Error&) {
    return false;
  }
}

}  // namespace

std::vector<EvalPoint> sample_points(const PhiModel& m, const SampleSpec& spec) {
  if (spec.n < 2) throw Error(ErrorCode::ConfigError, "dimension must be at least 2");
  if (spec.count < 1) throw Error(ErrorCode::ConfigError, "sample count must be positive");
  if (!(spec.domain_margin >= 0.0 && spec.domain_margin < 1.0))
    throw Error(ErrorCode::ConfigError, "domain_margin must lie in [0, 1)");
  const double radius = spec.x_bound.value_or((1.0 - spec.domain_margin) * m.x_radius());
  if (!(radius > 0.0)) throw Error(ErrorCode::ConfigError, "sampling radius must be positive");

  Rng rng(spec.seed);
  Vec a(spec.n, 0.0);
  a[0] = m.anchor_norm();
  std::vector<EvalPoint> out;
  out.reserve(spec.count);
  const long budget = 1000L * spec.count;
  for (long attempt = 0; static_cast<int>(out.size()) < spec.count; ++attempt) {
    if (attempt >= budget)
      throw Error(ErrorCode::ConfigError, "sampler rejected too many points for " + m.name());
    Vec x = unit_vector(rng, spec.n);
    const double rx = radius * std::pow(rng.uniform(), 1.0 / spec.n);
    for (double& c : x) c *= rx;
    Vec y = unit_vector(rng, spec.n);
    const double ry = rng.uniform(spec.r_min, spec.r_max);
    for (double& c : y) c *= ry;
    EvalPoint p{std::move(x), std::move(y), a};
    if (acceptable(m, p)) out.push_back(std::move(p));
  }
  return out;
}

}  // namespace finsler
