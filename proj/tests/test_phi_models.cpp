#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "finsler/error.hpp"
#include "finsler/jet_geometry.hpp"
#include "finsler/phi_models.hpp"
#include "support.hpp"

using namespace finsler;

TEST(PhiModels, CatalogNames) {
  std::set<std::string> names;
  for (const auto& m : catalog()) names.insert(m.name());
  for (const char* want : {"euclidean", "funk", "berwald", "shen"}) EXPECT_TRUE(names.count(want)) << want;
}

TEST(PhiModels, EuclideanJetIsConstant) {
  const PhiJet j = phi_jet(make_model("euclidean"), 0.4, -0.3, 0.2, 0.7, 3);
  for (const auto& [alpha, value] : j.partials) {
    if (alpha == MultiIndex{0, 0, 0, 0})
      EXPECT_EQ(value, 1.0);
    else
      EXPECT_EQ(value, 0.0);
  }
}

TEST(PhiModels, BerwaldAtOrigin) {
  EXPECT_DOUBLE_EQ(make_model("berwald")(0, 0, 0, 0), 1.0);
}

TEST(PhiModels, FunkValue) {
  // A = √(1 − 0.09 + 0.09) = 1, φ = (1 + 0.3)/0.91.
  EXPECT_NEAR(make_model("funk")(0.09, 0.3, 0, 0), 1.3 / 0.91, 1e-15);
}

TEST(PhiModels, FunkFirstPartialsByHand) {
  const double u = 0.3, s = 0.2;
  const double A = std::sqrt(1 - u + s * s);
  const double phi_s = (s / A + 1) / (1 - u);
  const double phi_u = -0.5 / (A * (1 - u)) + (A + s) / ((1 - u) * (1 - u));
  const PhiJet j = phi_jet(make_model("funk"), u, s, 0, 0, 1);
  EXPECT_NEAR(j(0, 1, 0, 0), phi_s, 1e-14);
  EXPECT_NEAR(j(1, 0, 0, 0), phi_u, 1e-14);
  EXPECT_EQ(j(0, 0, 1, 0), 0.0);
  EXPECT_EQ(j(0, 0, 0, 1), 0.0);
}

TEST(PhiModels, ShenWithZeroAnchorIsBerwald) {
  const PhiModel shen = make_model("shen", {{"a", 0.0}});
  const PhiModel berwald = make_model("berwald");
  for (double u : {0.0, 0.2, 0.5, 0.8})
    for (double s : {-0.4, 0.0, 0.3}) {
      if (s * s > u) continue;
      EXPECT_NEAR(shen(u, s, 0, 0), berwald(u, s, 0, 0), 1e-14 * berwald(u, s, 0, 0));
    }
}

TEST(PhiModels, ShenMatchesCartesianFormula) {
  const PhiModel m = make_model("shen", {{"a", 0.3}});
  for (const auto& p : test::sample(m, 3, 40, 5)) {
    const double yy = dot(p.y, p.y), xx = dot(p.x, p.x), xy = dot(p.x, p.y);
    const double A = std::sqrt(yy - (xx * yy - xy * xy));
    const double F = (1 + dot(p.a, p.x) + (1 - xx) * dot(p.a, p.y) / (A + xy)) * (A + xy) *
                     (A + xy) / ((1 - xx) * (1 - xx) * A);
    EXPECT_NEAR(finsler_value(m, p), F, 1e-13 * F);
  }
}

TEST(PhiModels, FunkMatchesCartesianFormula) {
  const PhiModel m = make_model("funk");
  for (const auto& p : test::sample(m, 4, 40, 6)) {
    const double yy = dot(p.y, p.y), xx = dot(p.x, p.x), xy = dot(p.x, p.y);
    const double F = (std::sqrt(yy - (xx * yy - xy * xy)) + xy) / (1 - xx);
    EXPECT_NEAR(finsler_value(m, p), F, 1e-13 * F);
  }
}

TEST(PhiModels, FdSelfCheck) {
  EXPECT_EQ(fd_self_check(make_model("euclidean"), 0.3, 0.1, 0.0, 0.0).max_deviation, 0.0);
  EXPECT_LE(fd_self_check(make_model("berwald"), 0.25, 0.1, 0, 0).max_deviation, 1e-5);
  EXPECT_LE(fd_self_check(make_model("shen", {{"a", 0.3}}), 0.2, 0.1, 0.05, 0.02).max_deviation,
            1e-5);
  EXPECT_LE(fd_self_check(test::generic_model(), 0.2, 0.1, 0.05, 0.02).max_deviation, 1e-5);
}

TEST(PhiModels, FiniteDifferenceModeTracksExact) {
  const PhiModel m = make_model("shen", {{"a", 0.3}});
  const PhiJet ex = phi_jet(m, 0.2, 0.1, 0.05, 0.02, 2);
  const PhiJet fd = phi_jet(m.with_mode(DerivativeMode::FiniteDifference), 0.2, 0.1, 0.05, 0.02, 2);
  for (const auto& [alpha, value] : ex.partials)
    EXPECT_NEAR(fd.partials.at(alpha), value, 1e-5 * std::max(1.0, std::abs(value)));
}

TEST(PhiModels, Errors) {
  auto code_of = [](const std::function<void()>& f) {
    try {
      f();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::DomainExit;  // sentinel: nothing thrown
  };
  EXPECT_EQ(code_of([] { make_model("nonesuch"); }), ErrorCode::ConfigError);
  EXPECT_EQ(code_of([] { make_model("funk", {{"a", 0.1}}); }), ErrorCode::ConfigError);
  EXPECT_EQ(code_of([] { make_model("shen", {{"a", 1.5}}); }), ErrorCode::ConfigError);
  EXPECT_EQ(code_of([] { phi_jet(make_model("funk"), 1.2, 0, 0, 0, 1); }), ErrorCode::OutOfDomain);
  EXPECT_EQ(code_of([] { phi_jet(make_model("funk"), 0.2, 0, 0, 0, kMaxPhiOrder + 1); }),
            ErrorCode::OrderUnsupported);
}

TEST(PhiModels, DefaultsAndAnchor) {
  const PhiModel shen = make_model("shen");
  EXPECT_TRUE(shen.uses_anchor());
  EXPECT_DOUBLE_EQ(shen.anchor_norm(), 0.3);
  EXPECT_FALSE(make_model("berwald").uses_anchor());
  EXPECT_EQ(make_model("berwald").anchor_norm(), 0.0);
}
