#pragma once

#include <array>
#include <optional>

#include "finsler/invariants.hpp"
#include "finsler/phi_models.hpp"

namespace finsler {

/// G^i = ¼ g^{il}[(F²)_{x^k y^l} y^k − (F²)_{x^l}] through jets.
Vec spray_oracle(const PhiModel& m, const EvalPoint& p);

/// Closed form in terms of φ, its first and second partials and the
/// numeric inverse metric.
Vec spray_closed(const PhiModel& m, const EvalPoint& p);

/// G = rP·y + r²Q·x + r²R·a.  A coefficient is absent when its direction is
/// (numerically) in the span of the ones before it, in the order y, x, a.
struct PqrDecomposition {
  std::optional<double> P, Q, R;
  double residual = 0;  // out-of-span part of G relative to ‖G‖
};

/// Throws RankDeficientFrame when x is parallel to y.
PqrDecomposition pqr_decompose(const Vec& G, const EvalPoint& p);

struct SprayValue {
  Vec G;
  PqrDecomposition pqr;
};

SprayValue spray_value(const PhiModel& m, const EvalPoint& p);

/// Point of invariant space.  Models without anchor dependence ignore
/// (v, t, a2) and are evaluated at the surrogate (0, 0, 1).
struct InvariantPoint {
  double u = 0, s = 0, v = 0, t = 0, a2 = 0;
};

/// Canonical configuration used by pqr_field (n = 4, r = 1).
EvalPoint canonical_point(const PhiModel& m, const InvariantPoint& q);

struct PqrValue {
  double P = 0, Q = 0, R = 0;
};

PqrValue pqr_field(const PhiModel& m, const InvariantPoint& q);

/// ∂^{ks+kt}/∂s^ks∂t^kt of (P, Q, R) for ks + kt ≤ 3, by central differences
/// with one Richardson step.  Index with at(ks, kt).
struct PqrPartials {
  std::array<std::array<PqrValue, 4>, 4> d{};
  const PqrValue& at(int ks, int kt) const { return d[ks][kt]; }
};

PqrPartials pqr_partials(const PhiModel& m, const InvariantPoint& q);

struct Trajectory {
  std::vector<double> tau;
  std::vector<Vec> x;
  std::vector<Vec> y;
  std::vector<double> F;
  bool domain_exit = false;
  double max_F_drift = 0;  // max |F(τ) − F(0)| / F(0)
};

/// Fixed-step RK4 for ẋ = y, ẏ = −2G(x, y).  Stops early, with domain_exit
/// set, when a stage leaves the model's domain.
Trajectory geodesic_integrate(const PhiModel& m, const Vec& x0, const Vec& y0, const Vec& a,
                              int steps, double dt);

}  // namespace finsler
