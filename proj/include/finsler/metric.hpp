#pragma once

#include <array>

#include "finsler/invariants.hpp"
#include "finsler/phi_models.hpp"
#include "finsler/tensor.hpp"

namespace finsler {

/// Invariants of p plus φ partials to `order`, after the domain check.
struct PointData {
  Invariants inv;
  PhiJet phi;
};

PointData point_data(const PhiModel& m, const EvalPoint& p, int order);

/// c₀…c₆ of the closed-form fundamental tensor.
std::array<double, 7> metric_coefficients(const PhiJet& j, const Invariants& inv);

/// g_ij = c₀δ + c₁aa + c₂ r r + c₃(a r + r a) + c₄(x r + r x) + c₅(a x + x a) + c₆xx,
/// with r = y/|y|.
SymTensor2 fundamental_tensor(const PhiModel& m, const EvalPoint& p);

/// ½ ∂²F²/∂y^i∂y^j through jets.
SymTensor2 fundamental_tensor_oracle(const PhiModel& m, const EvalPoint& p);

/// h_ij = σ₁φ(δ − r r) + φφ_ss ss + φφ_tt tt + φφ_st(st + ts).
SymTensor2 angular_metric(const PhiModel& m, const EvalPoint& p);
SymTensor2 angular_metric(const PhiJet& j, const Invariants& inv);

/// g_ij − F_{y^i}F_{y^j} through jets.
SymTensor2 angular_metric_oracle(const PhiModel& m, const EvalPoint& p);

/// Numeric inverse; throws SingularMetric unless g is positive definite.
SymTensor2 inverse_metric(const SymTensor2& g);

struct QuadraticForms {
  double S2 = 0;  // g^{ij} s_i s_j
  double R2 = 0;  // g^{ij} s_i t_j
  double T2 = 0;  // g^{ij} t_i t_j
};

QuadraticForms quadratic_forms(const SymTensor2& ginv, const Invariants& inv);

/// S2 for a metric without anchor dependence:
/// c₀⁻¹[(u−s²) − 𝔄(u−s²)²], 𝔄 = φ_ss / (φ − sφ_s + (u−s²)φ_ss).
double spherical_S2(const PhiModel& m, const EvalPoint& p);

}  // namespace finsler
