#pragma once

#include <array>
#include <string>

#include "finsler/metric.hpp"

namespace finsler {

/// σ₁…σ₁₂ of the closed-form Cartan torsion; index 0 is unused.
struct SigmaSet {
  std::array<double, 13> v{};
  double operator[](int k) const { return v[k]; }
};

/// Needs φ partials to order 3.  Throws DegenerateSigma1 when σ₁ ≈ 0.
SigmaSet compute_sigmas(const PhiJet& j, const Invariants& inv);

/// C_ijk = σ₂/(2σ₁₂){h s} + σ₃/(2σ₁₂){h t} + (σ₈ sss + σ₉ ttt)/(2σ₁₂)
///       + (σ₁₀ sst + σ₁₁ tts)(cyclic)/(2σ₁₂).
SymTensor3 cartan_closed(const PhiModel& m, const EvalPoint& p);

/// ¼ ∂³F²/∂y^i∂y^j∂y^k through jets.
SymTensor3 cartan_oracle(const PhiModel& m, const EvalPoint& p);

struct MeanCartan {
  Vec I;             // (1/2r)(H s_k + K t_k)
  double H = 0;
  double K = 0;
  QuadraticForms q;
  SymTensor2 g;      // closed-form fundamental tensor
  SymTensor2 g_inv;
  double r = 0;
};

MeanCartan mean_cartan(const PhiModel& m, const EvalPoint& p);

/// g^{ij}C_ijk from the oracle g and C.
Vec mean_cartan_oracle(const PhiModel& m, const EvalPoint& p);

/// (S2 H² + 2 R2 H K + T2 K²) / 4r².
double cartan_norm_squared(const MeanCartan& mc);
double cartan_norm(const PhiModel& m, const EvalPoint& p);

/// √(g^{ij} I_i I_j) with I and g⁻¹ both from the oracle path.
double cartan_norm_direct(const PhiModel& m, const EvalPoint& p);

/// Closed-form ‖I‖ for metrics without anchor dependence.
/// Throws NotSphericallySymmetric otherwise.
double spherical_norm_formula(const PhiModel& m, const EvalPoint& p);

/// Explicit ‖I‖ of Berwald's metric in dimension 2.
double berwald_norm_explicit(const EvalPoint& p);

enum class ReductionMethod { General, SphericalCorollary, ConstrainedFit };

std::string to_string(ReductionMethod m);

struct CReducibilityReport {
  double P = 0;
  double Q = 0;
  double M = 0;
  double N = 0;
  double H = 0;
  double K = 0;
  double I_norm2 = 0;
  double residual = 0;           // ‖C − P/(n+1){h I} − Q/‖I‖² III‖ / ‖C‖
  double best_fit_residual = 0;  // same with unconstrained least-squares (P, Q)
  bool degenerate_denominator = false;
  ReductionMethod method = ReductionMethod::General;
};

/// (𝒫, 𝒬) of the anchor-free corollary.
std::array<double, 2> corollary_pq(const PhiModel& m, const EvalPoint& p);

/// Throws RiemannianPoint when ‖I‖²F² ≤ 1e−10.
CReducibilityReport semi_c_reducible(const PhiModel& m, const EvalPoint& p);

}  // namespace finsler
