#include "finsler/tensor.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "finsler/error.hpp"

namespace finsler {

SymTensor2 SymTensor2::identity(int n) {
  SymTensor2 id(n);
  for (int i = 0; i < n; ++i) id.set(i, i, 1.0);
  return id;
}

Vec SymTensor2::contract(const Vec& v) const {
  Vec out(n_, 0.0);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) out[i] += (*this)(i, j) * v[j];
  return out;
}

double SymTensor2::quadratic(const Vec& a, const Vec& b) const {
  double acc = 0.0;
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) acc += (*this)(i, j) * a[i] * b[j];
  return acc;
}

void SymTensor3::set(int i, int j, int k, double v) {
  const int idx[6][3] = {{i, j, k}, {i, k, j}, {j, i, k}, {j, k, i}, {k, i, j}, {k, j, i}};
  for (const auto& p : idx) e_[(p[0] * n_ + p[1]) * n_ + p[2]] = v;
}

std::vector<double> SymTensor3::contract_last(const Vec& v) const {
  std::vector<double> out(static_cast<std::size_t>(n_) * n_, 0.0);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      for (int k = 0; k < n_; ++k) out[i * n_ + j] += (*this)(i, j, k) * v[k];
  return out;
}

double SymTensor3::asymmetry() const {
  double worst = 0.0;
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      for (int k = 0; k < n_; ++k) {
        const double ref = (*this)(i, j, k);
        for (double other : {(*this)(i, k, j), (*this)(j, i, k), (*this)(j, k, i), (*this)(k, i, j),
                             (*this)(k, j, i)})
          worst = std::max(worst, std::abs(ref - other));
      }
  return worst;
}

double frobenius(const std::vector<double>& a) {
  double acc = 0.0;
  for (double v : a) acc += v * v;
  return std::sqrt(acc);
}

double frobenius_distance(const std::vector<double>& a, const std::vector<double>& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(acc);
}

double relative_error(const std::vector<double>& a, const std::vector<double>& b, double floor) {
  const double denom = std::max(frobenius(b), floor);
  const double diff = frobenius_distance(a, b);
  if (denom == 0.0) return diff == 0.0 ? 0.0 : INFINITY;
  return diff / denom;
}

namespace {

Eigen::MatrixXd to_eigen(const SymTensor2& g) {
  const int n = g.dim();
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = g(i, j);
  return m;
}

}  // namespace

double min_eigenvalue(const SymTensor2& g) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(to_eigen(g), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

SymTensor2 invert_spd(const SymTensor2& g) {
  const Eigen::MatrixXd m = to_eigen(g);
  const double scale = m.norm();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  if (!(es.eigenvalues().minCoeff() > 1e-12 * scale))
    throw Error(ErrorCode::SingularMetric, "fundamental tensor is not positive definite");
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  const Eigen::MatrixXd inv = llt.solve(Eigen::MatrixXd::Identity(g.dim(), g.dim()));
  SymTensor2 out(g.dim());
  for (int i = 0; i < g.dim(); ++i)
    for (int j = i; j < g.dim(); ++j) out.set(i, j, 0.5 * (inv(i, j) + inv(j, i)));
  return out;
}

LeastSquaresFit least_squares(const std::vector<std::vector<double>>& columns,
                              const std::vector<double>& target) {
  const int rows = static_cast<int>(target.size());
  const int cols = static_cast<int>(columns.size());
  Eigen::MatrixXd a(rows, cols);
  Eigen::VectorXd b(rows);
  for (int r = 0; r < rows; ++r) {
    b(r) = target[r];
    for (int c = 0; c < cols; ++c) a(r, c) = columns[c][r];
  }
  LeastSquaresFit fit;
  const Eigen::VectorXd x = a.colPivHouseholderQr().solve(b);
  fit.coefficients.assign(x.data(), x.data() + cols);
  fit.residual_abs = (a * x - b).norm();
  const double bn = b.norm();
  fit.residual = bn == 0.0 ? 0.0 : fit.residual_abs / bn;
  return fit;
}

double frame_conditioning(const std::vector<Vec>& columns) {
  if (columns.empty()) return 0.0;
  const int rows = static_cast<int>(columns.front().size());
  const int cols = static_cast<int>(columns.size());
  if (cols > rows) return 0.0;
  Eigen::MatrixXd a(rows, cols);
  for (int c = 0; c < cols; ++c) {
    const double nc = norm(columns[c]);
    for (int r = 0; r < rows; ++r) a(r, c) = nc == 0.0 ? 0.0 : columns[c][r] / nc;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
  return svd.singularValues().minCoeff();
}

}  // namespace finsler
