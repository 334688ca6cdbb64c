#pragma once

#include <vector>

namespace finsler {

using Vec = std::vector<double>;

/// Base point x, direction y and anchor covector a in ℝⁿ.  Indices are
/// raised and lowered with δ, so one coordinate array serves both roles.
struct EvalPoint {
  Vec x;
  Vec y;
  Vec a;

  int dim() const { return static_cast<int>(x.size()); }
};

/// Validates sizes, finiteness and y ≠ 0.  Throws Error.
void validate(const EvalPoint& p);

struct Invariants {
  double r = 0;  // |y|
  double u = 0;  // |x|²
  double s = 0;  // <x,y>/|y|
  double v = 0;  // <a,x>
  double t = 0;  // <a,y>/|y|
  double a2 = 0; // |a|²
  Vec r_cov;     // y/r
  Vec s_cov;     // x − s·r_cov
  Vec t_cov;     // a − t·r_cov
};

Invariants compute_invariants(const EvalPoint& p);

/// Canonical configuration with the given invariants:
/// y = r e₁, x = s e₁ + √(u−s²) e₂, a = t e₁ + ((v−st)/√(u−s²)) e₂ + √(rest) e₃.
/// Requires n ≥ 3 and strictly feasible Gram data (margin 1e−10).
EvalPoint realize_invariants(double r, double u, double s, double v, double t, double a2, int n);

double dot(const Vec& a, const Vec& b);
double norm(const Vec& a);

/// Largest deviation among the contraction identities r·r = 1, x·r = s,
/// a·r = t, r·y = r, r·s = 0, r·t = 0 and the Gram identities of s_cov, t_cov.
double contraction_defect(const EvalPoint& p, const Invariants& inv);

}  // namespace finsler
