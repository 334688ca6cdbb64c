#pragma once

// Definition-level geometry computed by composing F = r·φ(u, s, v, t) on
// jets in the 2n coordinates (x, y).  Every quantity here is obtained from
// the defining formula (second y-derivative of F², the spray variational
// formula, third y-derivative of G, ...) and serves as the independent
// oracle for the closed-form paths.

#include <vector>

#include "finsler/invariants.hpp"
#include "finsler/jet.hpp"
#include "finsler/phi_models.hpp"
#include "finsler/tensor.hpp"

namespace finsler {

/// F and F² expanded about p.  Variables 0..n−1 perturb x, n..2n−1 perturb y.
struct FinslerExpansion {
  int n = 0;
  JetSpacePtr space;
  Jet F;
  Jet F2;

  int xv(int i) const { return i; }
  int yv(int i) const { return n + i; }
};

/// Throws OutOfDomain when the invariants of p leave the model's domain.
FinslerExpansion expand_finsler(const PhiModel& m, const EvalPoint& p, int x_order, int y_order);

/// F(x, y) in plain doubles, domain-checked.
double finsler_value(const PhiModel& m, const EvalPoint& p);

/// G^i = ¼ g^{il}[(F²)_{x^k y^l} y^k − (F²)_{x^l}] as jets, exact in the box
/// (x_order − 1, y_order − 2) of the expansion and returned in that space.
std::vector<Jet> spray_jets(const FinslerExpansion& fx, const EvalPoint& p);

/// Landsberg curvature and everything the mean stretch tensor needs,
/// all from the definitions.
struct LandsbergBundle {
  int n = 0;
  double F = 0;
  Vec F_y;             // ∂F/∂y^i
  SymTensor2 g;        // fundamental tensor
  SymTensor2 g_inv;
  Vec G;               // spray coefficients
  Matrix dG_dy;        // (m, j) = ∂G^m/∂y^j
  SymTensor3 L;        // L_ijk = −½ F F_{y^l} ∂³G^l/∂y^i∂y^j∂y^k
  Vec J;               // g^{jk} L_ijk
  bool has_derivatives = false;
  Matrix dJ_dx;        // (i, j) = ∂J_i/∂x^j
  Matrix dJ_dy;        // (i, m) = ∂J_i/∂y^m
};

/// With `derivatives`, F is expanded to x-order 2 and y-order 6 so that J is
/// carried as a first-order jet in (x, y).
LandsbergBundle landsberg_bundle(const PhiModel& m, const EvalPoint& p, bool derivatives);

}  // namespace finsler
