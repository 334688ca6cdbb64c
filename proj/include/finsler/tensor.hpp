#pragma once

#include <optional>
#include <vector>

#include "finsler/invariants.hpp"

namespace finsler {

/// Dense symmetric n×n tensor.  set() writes both index orders.
class SymTensor2 {
 public:
  SymTensor2() = default;
  explicit SymTensor2(int n) : n_(n), e_(static_cast<std::size_t>(n) * n, 0.0) {}

  static SymTensor2 identity(int n);

  int dim() const { return n_; }
  double operator()(int i, int j) const { return e_[i * n_ + j]; }
  void set(int i, int j, double v) {
    e_[i * n_ + j] = v;
    e_[j * n_ + i] = v;
  }
  const std::vector<double>& data() const { return e_; }

  Vec contract(const Vec& v) const;  // T_ij v^j
  double quadratic(const Vec& a, const Vec& b) const;  // T_ij a^i b^j

 private:
  int n_ = 0;
  std::vector<double> e_;
};

/// Dense totally symmetric rank-3 tensor.  set() writes all six index orders.
class SymTensor3 {
 public:
  SymTensor3() = default;
  explicit SymTensor3(int n) : n_(n), e_(static_cast<std::size_t>(n) * n * n, 0.0) {}

  int dim() const { return n_; }
  double operator()(int i, int j, int k) const { return e_[(i * n_ + j) * n_ + k]; }
  void set(int i, int j, int k, double v);
  /// Sets entries without symmetrizing.  Used by oracles that must expose
  /// their own asymmetry to symmetry checks.
  void set_raw(int i, int j, int k, double v) { e_[(i * n_ + j) * n_ + k] = v; }
  const std::vector<double>& data() const { return e_; }

  std::vector<double> contract_last(const Vec& v) const;  // T_ijk v^k as n×n row-major
  /// max |T_ijk − T_σ(ijk)| over permutations.
  double asymmetry() const;

 private:
  int n_ = 0;
  std::vector<double> e_;
};

/// Dense square matrix (row-major), used for antisymmetric and mixed tensors.
struct Matrix {
  int n = 0;
  std::vector<double> e;

  explicit Matrix(int dim = 0) : n(dim), e(static_cast<std::size_t>(dim) * dim, 0.0) {}
  double& operator()(int i, int j) { return e[i * n + j]; }
  double operator()(int i, int j) const { return e[i * n + j]; }
};

double frobenius(const std::vector<double>& a);
double frobenius_distance(const std::vector<double>& a, const std::vector<double>& b);

/// ‖a − b‖ / max(‖b‖, floor).  `floor` is the natural magnitude of the
/// quantity so that values which vanish exactly compare against roundoff.
double relative_error(const std::vector<double>& a, const std::vector<double>& b, double floor);

double min_eigenvalue(const SymTensor2& g);

/// Inverse of a positive definite g.  Throws Error(SingularMetric) when the
/// smallest eigenvalue is at or below 1e−12‖g‖.
SymTensor2 invert_spd(const SymTensor2& g);

struct LeastSquaresFit {
  std::vector<double> coefficients;
  double residual = 0.0;   // ‖target − Σ c_k col_k‖ / ‖target‖ (0 when target = 0)
  double residual_abs = 0.0;
};

/// Least-squares fit of `target` against the given columns (all of equal length).
LeastSquaresFit least_squares(const std::vector<std::vector<double>>& columns,
                              const std::vector<double>& target);

/// Smallest singular value of the column-normalized matrix; the sine of the
/// smallest angle between any column and the span of the others, up to a factor.
double frame_conditioning(const std::vector<Vec>& columns);

}  // namespace finsler
