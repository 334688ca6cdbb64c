#include <gtest/gtest.h>

#include <cmath>

#include "finsler/error.hpp"
#include "finsler/jet_geometry.hpp"
#include "finsler/metric.hpp"
#include "support.hpp"

using namespace finsler;

namespace {

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

// Central second difference of F²/2 in y, independent of the jet machinery.
SymTensor2 fd_metric(const PhiModel& m, const EvalPoint& p) {
  const int n = p.dim();
  const double h = 1e-4;
  auto E = [&](const Vec& y) {
    const double F = finsler_value(m, {p.x, y, p.a});
    return 0.5 * F * F;
  };
  SymTensor2 g(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      auto at = [&](int di, int dj) {
        Vec y = p.y;
        y[i] += di * h;
        y[j] += dj * h;
        return E(y);
      };
      g.set(i, j, (at(1, 1) - at(1, -1) - at(-1, 1) + at(-1, -1)) / (4 * h * h));
    }
  return g;
}

}  // namespace

TEST(Metric, EuclideanIsIdentity) {
  const PhiModel m = make_model("euclidean");
  const EvalPoint p{{0.1, 0.5, -0.2}, {0.3, 1.2, 0.7}, {0, 0, 0}};
  const auto I = SymTensor2::identity(3).data();
  EXPECT_LT(max_abs_diff(fundamental_tensor(m, p).data(), I), 1e-15);
  EXPECT_LT(max_abs_diff(fundamental_tensor_oracle(m, p).data(), I), 1e-15);
  const PhiJet j = phi_jet(m, 0.3, 0.1, 0, 0, 2);
  const auto c = metric_coefficients(j, compute_invariants(p));
  EXPECT_EQ(c[0], 1.0);
  for (int k = 1; k < 7; ++k) EXPECT_EQ(c[k], 0.0);
}

TEST(Metric, EuclideanAngularMetric) {
  const PhiModel m = make_model("euclidean");
  const EvalPoint p{{0.1, 0.5, -0.2}, {0.3, 1.2, 0.7}, {0, 0, 0}};
  const SymTensor2 h = angular_metric(m, p);
  const double yy = dot(p.y, p.y);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      EXPECT_NEAR(h(i, j), (i == j) - p.y[i] * p.y[j] / yy, 1e-15);
}

TEST(Metric, FunkWorkedPointPositiveDefinite) {
  const PhiModel m = make_model("funk");
  const EvalPoint p{{0.3, 0.0}, {0.0, 1.0}, {0.0, 0.0}};
  const SymTensor2 g = fundamental_tensor(m, p);
  EXPECT_GT(g(0, 0) * g(1, 1) - g(0, 1) * g(0, 1), 0.0);
  EXPECT_GT(min_eigenvalue(g), 0.0);
  EXPECT_LT(test::rel(g.data(), fundamental_tensor_oracle(m, p).data()), 1e-12);
}

TEST(Metric, ClosedFormMatchesFiniteDifferences) {
  for (const auto& m : {make_model("berwald"), make_model("shen", {{"a", 0.3}}), test::generic_model()}) {
    for (const auto& p : test::sample(m, 3, 10, 21)) {
      const SymTensor2 g = fundamental_tensor(m, p);
      EXPECT_LT(test::rel(g.data(), fd_metric(m, p).data()), 1e-6) << m.name();
    }
  }
}

TEST(Metric, ClosedFormMatchesOracle) {
  for (const auto& m : catalog()) {
    for (const auto& p : test::sample(m, 3, 30, 22)) {
      const SymTensor2 g = fundamental_tensor(m, p);
      EXPECT_LE(test::rel(g.data(), fundamental_tensor_oracle(m, p).data()), 1e-9) << m.name();
    }
  }
}

TEST(Metric, GenericPhiClosedFormMatchesOracle) {
  const PhiModel m = test::generic_model();
  for (int n : {2, 3, 5})
    for (const auto& p : test::sample(m, n, 20, 23)) {
      EXPECT_LE(test::rel(fundamental_tensor(m, p).data(), fundamental_tensor_oracle(m, p).data()),
                1e-9);
      EXPECT_LE(test::rel(angular_metric(m, p).data(), angular_metric_oracle(m, p).data()), 1e-9);
    }
}

TEST(Metric, EulerIdentity) {
  const PhiModel m = make_model("shen", {{"a", 0.6}});
  for (const auto& p : test::sample(m, 4, 20, 24)) {
    const double F = finsler_value(m, p);
    const Vec gy = fundamental_tensor(m, p).contract(p.y);
    // g_ij y^i y^j = F²
    EXPECT_NEAR(dot(gy, p.y), F * F, 1e-12 * F * F);
  }
}

TEST(Metric, AngularMetricAnnihilatesY) {
  const PhiModel m = make_model("funk");
  for (const auto& p : test::sample(m, 3, 20, 25)) {
    const SymTensor2 h = angular_metric(m, p);
    EXPECT_LT(norm(h.contract(p.y)), 1e-12 * frobenius(h.data()) * norm(p.y));
  }
}

TEST(Metric, InverseExamples) {
  const auto I = SymTensor2::identity(3);
  EXPECT_EQ(inverse_metric(I).data(), I.data());
  SymTensor2 d = SymTensor2::identity(3);
  d.set(0, 0, 2.0);
  const SymTensor2 inv = inverse_metric(d);
  EXPECT_DOUBLE_EQ(inv(0, 0), 0.5);
  EXPECT_DOUBLE_EQ(inv(1, 1), 1.0);
  EXPECT_DOUBLE_EQ(inv(2, 2), 1.0);
  EXPECT_EQ(inv(0, 1), 0.0);
}

TEST(Metric, InverseResidualOnFunk) {
  const PhiModel m = make_model("funk");
  for (const auto& p : test::sample(m, 4, 20, 26)) {
    const SymTensor2 g = fundamental_tensor(m, p);
    const SymTensor2 gi = inverse_metric(g);
    const int n = p.dim();
    double worst = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double acc = 0.0;
        for (int k = 0; k < n; ++k) acc += g(i, k) * gi(k, j);
        worst = std::max(worst, std::abs(acc - (i == j)));
      }
    EXPECT_LE(worst, 1e-10);
  }
}

TEST(Metric, SingularMetricRejected) {
  SymTensor2 g(2);
  g.set(0, 0, 1.0);
  g.set(0, 1, 1.0);
  g.set(1, 1, 1.0);
  try {
    inverse_metric(g);
    ADD_FAILURE() << "expected SingularMetric";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SingularMetric);
  }
}

TEST(Metric, QuadraticFormsEuclidean) {
  const EvalPoint p{{0.2, 0.4, -0.1}, {1.0, 0.5, 0.3}, {0.3, 0.1, 0.0}};
  const Invariants inv = compute_invariants(p);
  const QuadraticForms q = quadratic_forms(SymTensor2::identity(3), inv);
  EXPECT_NEAR(q.S2, inv.u - inv.s * inv.s, 1e-15);
  EXPECT_NEAR(q.R2, inv.v - inv.s * inv.t, 1e-15);
  EXPECT_NEAR(q.T2, inv.a2 - inv.t * inv.t, 1e-15);
}

TEST(Metric, QuadraticFormsSphericalClosedForm) {
  const PhiModel m = make_model("berwald");
  for (const auto& p : test::sample(m, 3, 20, 27)) {
    const QuadraticForms q =
        quadratic_forms(inverse_metric(fundamental_tensor(m, p)), compute_invariants(p));
    EXPECT_NEAR(spherical_S2(m, p), q.S2, 1e-9 * std::abs(q.S2));
  }
}

TEST(Metric, QuadraticFormsCauchySchwarz) {
  const PhiModel m = make_model("shen", {{"a", 0.3}});
  for (const auto& p : test::sample(m, 4, 20, 28)) {
    const QuadraticForms q =
        quadratic_forms(inverse_metric(fundamental_tensor(m, p)), compute_invariants(p));
    EXPECT_LE(q.R2 * q.R2, q.S2 * q.T2 * (1 + 1e-10));
  }
}

TEST(Metric, SphericalFormRequiresAnchorFreeModel) {
  const PhiModel m = make_model("shen", {{"a", 0.3}});
  const EvalPoint p = test::sample(m, 3, 1, 29).front();
  try {
    spherical_S2(m, p);
    ADD_FAILURE() << "expected NotSphericallySymmetric";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotSphericallySymmetric);
  }
}

TEST(Metric, OutOfDomainRejected) {
  const PhiModel m = make_model("funk");
  try {
    fundamental_tensor(m, {{1.2, 0.0}, {0.0, 1.0}, {0.0, 0.0}});
    ADD_FAILURE() << "expected OutOfDomain";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::OutOfDomain);
  }
}
