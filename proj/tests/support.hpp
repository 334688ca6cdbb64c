#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "finsler/invariants.hpp"
#include "finsler/phi_models.hpp"
#include "finsler/sampler.hpp"
#include "finsler/tensor.hpp"

namespace finsler::test {

inline std::vector<EvalPoint> sample(const PhiModel& m, int n, int count, std::uint64_t seed,
                                     std::optional<double> x_bound = {}) {
  SampleSpec spec;
  spec.n = n;
  spec.count = count;
  spec.seed = seed;
  spec.x_bound = x_bound;
  return sample_points(m, spec);
}

// A φ with every (s, t) cross-partial nonzero, so closed forms that lean on
// mixed derivatives cannot hide behind the catalog's special structure.
struct GenericPhi {
  template <class T>
  T operator()(const T& u, const T& s, const T& v, const T& t) const {
    using std::exp;
    return exp(0.3 * s * t + 0.2 * t + 0.1 * s * s) * (1.0 + 0.1 * u * s + 0.05 * v * t);
  }
};

inline PhiModel generic_model(double a = 0.3) {
  PhiModel::Definition def;
  def.name = "generic";
  def.description = "test-only phi with mixed (s, t) dependence";
  def.domain_text = "phi >= 1e-6";
  def.params = {{"a", a}};
  def.uses_anchor = true;
  def.domain = [](double u, double s, double v, double t) {
    return GenericPhi{}(u, s, v, t) >= kDomainMargin;
  };
  return PhiModel(std::move(def), GenericPhi{});
}

inline double rel(const std::vector<double>& a, const std::vector<double>& b, double floor = 0.0) {
  return relative_error(a, b, floor);
}

inline EvalPoint scaled_y(EvalPoint p, double lambda) {
  for (double& c : p.y) c *= lambda;
  return p;
}

}  // namespace finsler::test
