#pragma once

#include <cstddef>
#include <optional>

#include "finsler/invariants.hpp"
#include "finsler/jet_geometry.hpp"
#include "finsler/phi_models.hpp"
#include "finsler/tensor.hpp"

namespace finsler {

/// L_ijk = −½ F F_{y^l} ∂³G^l/∂y^i∂y^j∂y^k through jets.
SymTensor3 landsberg_oracle(const PhiModel& m, const EvalPoint& p);

/// L assembled from φ, φ_s, φ_t and the (s, t)-partials of the spray
/// scalars P, Q, R (finite differences of pqr_field).
SymTensor3 landsberg_closed(const PhiModel& m, const EvalPoint& p);

struct MeanLandsberg {
  Vec J;
  double H_land = 0;
  std::optional<double> K_land;  // absent when the a-leg degenerates
  double leg_residual = 0;       // ‖J − H·(x − s y/r) − K·(a − t y/r)‖ / max(‖J‖, scale)
  double contraction_defect = 0; // g^{jk}L_ijk vs g_im g^{mi'} g^{jk} L_i'jk, relative
  double scale = 0;              // ‖g⁻¹‖·‖g‖·‖G‖/r², the natural size of J
};

MeanLandsberg mean_landsberg(const PhiModel& m, const EvalPoint& p);
MeanLandsberg mean_landsberg(const LandsbergBundle& b, const EvalPoint& p);

/// Σ̄_ij = 2(∂J_i/∂x^j − ∂J_j/∂x^i) − 2(∂J_i/∂y^m ∂G^m/∂y^j − ∂J_j/∂y^m ∂G^m/∂y^i).
Matrix stretch_tensor(const LandsbergBundle& b);
Matrix stretch_tensor(const PhiModel& m, const EvalPoint& p);

/// ‖∂J/∂x‖ + ‖∂J/∂y‖·‖∂G/∂y‖ (floored at 1e−300), the size Σ̄ is measured against.
double stretch_scale(const LandsbergBundle& b);

struct StretchDecomposition {
  Matrix Sigma;
  std::optional<double> T, Z;  // absent in the reduced {x∧y} basis
  double W = 0;
  double residual = 0;
  double scale = 0;
  bool full_frame = false;
};

/// Fits Σ̄ = (2/r)[rT x∧a + (sT + Z) a∧y + (W − tT) x∧y].  Falls back to the
/// x∧y basis when {x, y, a} is rank deficient; throws RankDeficientFrame
/// when x is parallel to y.
StretchDecomposition stretch_decompose(const PhiModel& m, const EvalPoint& p);
StretchDecomposition stretch_decompose(const LandsbergBundle& b, const EvalPoint& p);

struct StretchVerdict {
  bool weakly_stretch = true;
  double max_ratio = 0;  // max ‖Σ̄‖ / scale
  std::size_t points_tested = 0;
  std::size_t points_skipped = 0;  // points where evaluation raised an Error
  std::optional<std::size_t> witness;
  std::optional<StretchDecomposition> witness_values;
};

StretchVerdict weakly_stretch_test(const PhiModel& m, const std::vector<EvalPoint>& sample,
                                   double tol);

}  // namespace finsler
