#include <gtest/gtest.h>

#include <cmath>

#include "finsler/error.hpp"
#include "finsler/jet_geometry.hpp"
#include "finsler/landsberg.hpp"
#include "finsler/spray.hpp"
#include "support.hpp"

using namespace finsler;

namespace {

double landsberg_floor(const LandsbergBundle& b, double r) {
  return frobenius(b.g.data()) * norm(b.G) / (r * r);
}

// L from third central differences of the oracle spray, independent of the
// order-5 jet composition.
SymTensor3 fd_landsberg(const PhiModel& m, const EvalPoint& p) {
  const int n = p.dim();
  const double h = 2e-3;
  const LandsbergBundle b = landsberg_bundle(m, p, false);
  auto Gy = [&](const Vec& y) {
    // F_{y^l} G^l at shifted y
    return dot(b.F_y, spray_oracle(m, {p.x, y, p.a}));
  };
  SymTensor3 L(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      for (int k = j; k < n; ++k) {
        double acc = 0.0;
        for (int si : {-1, 1})
          for (int sj : {-1, 1})
            for (int sk : {-1, 1}) {
              Vec y = p.y;
              y[i] += si * h;
              y[j] += sj * h;
              y[k] += sk * h;
              acc += si * sj * sk * Gy(y);
            }
        L.set(i, j, k, -0.5 * b.F * acc / (8 * h * h * h));
      }
  return L;
}

}  // namespace

TEST(Landsberg, EuclideanVanishes) {
  const PhiModel m = make_model("euclidean");
  const EvalPoint p{{0.1, 0.2, 0.3}, {1.0, -0.4, 0.2}, {0, 0, 0}};
  const SymTensor3 Lo = landsberg_oracle(m, p);
  for (double c : Lo.data()) EXPECT_EQ(c, 0.0);
  const SymTensor3 Lc = landsberg_closed(m, p);
  for (double c : Lc.data()) EXPECT_EQ(c, 0.0);
  const MeanLandsberg ml = mean_landsberg(m, p);
  for (double c : ml.J) EXPECT_EQ(c, 0.0);
  EXPECT_EQ(ml.H_land, 0.0);
  EXPECT_EQ(ml.K_land.value_or(0.0), 0.0);
  for (double c : stretch_tensor(m, p).e) EXPECT_EQ(c, 0.0);
}

TEST(Landsberg, OracleMatchesSprayDifferences) {
  for (const auto& m : {make_model("funk"), make_model("shen", {{"a", 0.3}}), test::generic_model()})
    for (const auto& p : test::sample(m, 3, 5, 61)) {
      const LandsbergBundle b = landsberg_bundle(m, p, false);
      EXPECT_LE(test::rel(fd_landsberg(m, p).data(), b.L.data(), landsberg_floor(b, norm(p.y))), 1e-4)
          << m.name();
    }
}

TEST(Landsberg, SymmetricAndAnnihilatesY) {
  for (const auto& m : {make_model("funk"), make_model("shen", {{"a", 0.6}})})
    for (const auto& p : test::sample(m, 4, 15, 62)) {
      const LandsbergBundle b = landsberg_bundle(m, p, false);
      const double scale = std::max(frobenius(b.L.data()), landsberg_floor(b, norm(p.y)));
      EXPECT_LE(b.L.asymmetry(), 1e-12 * scale);
      EXPECT_LE(frobenius(b.L.contract_last(p.y)), 1e-9 * scale * norm(p.y));
    }
}

TEST(Landsberg, ClosedFormMatchesOracle) {
  for (const auto& m : {make_model("berwald"), make_model("shen", {{"a", 0.2}}), make_model("funk"),
                        make_model("randers_exp")})
    for (const auto& p : test::sample(m, 4, 10, 63)) {
      const LandsbergBundle b = landsberg_bundle(m, p, false);
      EXPECT_LE(test::rel(landsberg_closed(m, p).data(), b.L.data(), landsberg_floor(b, norm(p.y))), 1e-4)
          << m.name();
    }
}

TEST(Landsberg, ClosedFormWithMixedStDependence) {
  // The generic φ exercises the s Q_st term in L4 and the R_stt term in L6.
  const PhiModel m = test::generic_model();
  for (int n : {3, 4})
    for (const auto& p : test::sample(m, n, 10, 64)) {
      const LandsbergBundle b = landsberg_bundle(m, p, false);
      EXPECT_LE(test::rel(landsberg_closed(m, p).data(), b.L.data(), landsberg_floor(b, norm(p.y))), 1e-4);
    }
}

TEST(MeanLandsberg, AnnihilatesY) {
  const PhiModel m = make_model("funk");
  for (const auto& p : test::sample(m, 3, 15, 65)) {
    const MeanLandsberg ml = mean_landsberg(m, p);
    EXPECT_LE(std::abs(dot(ml.J, p.y)), 1e-10 * std::max(norm(ml.J), ml.scale) * norm(p.y));
  }
}

TEST(MeanLandsberg, LegDecomposition) {
  for (const auto& m : {make_model("shen", {{"a", 0.3}}), make_model("randers_exp"), test::generic_model()})
    for (const auto& p : test::sample(m, 4, 15, 66)) {
      const MeanLandsberg ml = mean_landsberg(m, p);
      EXPECT_LE(ml.leg_residual, 1e-8) << m.name();
      EXPECT_TRUE(ml.K_land.has_value());
      EXPECT_LE(ml.contraction_defect, 1e-12);
    }
}

TEST(MeanLandsberg, BerwaldSingleLeg) {
  const PhiModel m = make_model("berwald");
  for (const auto& p : test::sample(m, 4, 10, 67)) {
    const MeanLandsberg ml = mean_landsberg(m, p);
    EXPECT_FALSE(ml.K_land.has_value());
    EXPECT_LE(ml.leg_residual, 1e-8);
  }
}

TEST(Stretch, DerivativesMatchFiniteDifferences) {
  const PhiModel m = make_model("shen", {{"a", 0.3}});
  const double h = 1e-5;
  for (const auto& p : test::sample(m, 3, 3, 68)) {
    const LandsbergBundle b = landsberg_bundle(m, p, true);
    const int n = p.dim();
    for (int j = 0; j < n; ++j) {
      EvalPoint lo = p, hi = p;
      lo.x[j] -= h;
      hi.x[j] += h;
      const Vec Jlo = landsberg_bundle(m, lo, false).J, Jhi = landsberg_bundle(m, hi, false).J;
      for (int i = 0; i < n; ++i)
        EXPECT_NEAR(b.dJ_dx(i, j), (Jhi[i] - Jlo[i]) / (2 * h), 1e-6 * stretch_scale(b));
    }
  }
}

TEST(Stretch, Antisymmetric) {
  const PhiModel m = make_model("berwald");
  for (const auto& p : test::sample(m, 3, 10, 69)) {
    const Matrix S = stretch_tensor(m, p);
    for (int i = 0; i < S.n; ++i)
      for (int j = 0; j < S.n; ++j) EXPECT_EQ(S(i, j), -S(j, i));
  }
}

TEST(Stretch, BerwaldReducedBasis) {
  const PhiModel m = make_model("berwald");
  for (const auto& p : test::sample(m, 4, 10, 70)) {
    const StretchDecomposition d = stretch_decompose(m, p);
    EXPECT_FALSE(d.full_frame);
    EXPECT_FALSE(d.T.has_value());
    EXPECT_FALSE(d.Z.has_value());
    EXPECT_LE(d.residual, 1e-6);
  }
}

TEST(Stretch, ShenBivectorDecomposition) {
  const PhiModel m = make_model("shen", {{"a", 0.3}});
  for (const auto& p : test::sample(m, 4, 20, 71)) {
    const StretchDecomposition d = stretch_decompose(m, p);
    EXPECT_TRUE(d.full_frame);
    EXPECT_LE(d.residual, 1e-6);
  }
}

TEST(Stretch, EuclideanDecomposesToZero) {
  const PhiModel m = make_model("euclidean");
  const EvalPoint p{{0.3, 0.1, -0.2, 0.4}, {1.0, 0.5, 0.2, -0.3}, {0.2, 0.0, 0.1, 0.0}};
  const StretchDecomposition d = stretch_decompose(m, p);
  EXPECT_EQ(d.T.value_or(0.0), 0.0);
  EXPECT_EQ(d.Z.value_or(0.0), 0.0);
  EXPECT_EQ(d.W, 0.0);
  EXPECT_EQ(d.residual, 0.0);
}

TEST(Stretch, ParallelXAndYRejected) {
  try {
    stretch_decompose(make_model("funk"), {{0.2, 0.0, 0.0}, {1.0, 0.0, 0.0}, {0, 0, 0}});
    ADD_FAILURE() << "expected RankDeficientFrame";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::RankDeficientFrame);
  }
}

TEST(WeaklyStretch, EuclideanIsWeaklyStretch) {
  const PhiModel m = make_model("euclidean");
  const StretchVerdict v = weakly_stretch_test(m, test::sample(m, 3, 10, 72), 1e-10);
  EXPECT_TRUE(v.weakly_stretch);
  EXPECT_EQ(v.points_tested, 10u);
  EXPECT_FALSE(v.witness.has_value());
}

TEST(WeaklyStretch, FunkVerdictCarriesWitness) {
  // No expected verdict; only that a negative verdict names a point.
  const PhiModel m = make_model("funk");
  const StretchVerdict v = weakly_stretch_test(m, test::sample(m, 3, 10, 73), 1e-10);
  EXPECT_EQ(v.points_tested + v.points_skipped, 10u);
  if (!v.weakly_stretch) {
    ASSERT_TRUE(v.witness.has_value());
    EXPECT_GT(v.max_ratio, 1e-10);
  }
}
