#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "finsler/invariants.hpp"
#include "finsler/phi_models.hpp"

namespace finsler {

/// mt19937_64 with explicit conversions so that streams are identical
/// across standard libraries (std:: distributions are not).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform();  // [0, 1)
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal();   // Box–Muller

 private:
  std::mt19937_64 engine_;
  std::optional<double> spare_;
};

struct SampleSpec {
  int n = 3;
  int count = 100;
  std::uint64_t seed = 0;
  double domain_margin = 0.2;   // x is drawn in the ball of radius (1 − margin)·x_radius
  std::optional<double> x_bound; // overrides the radius above
  double r_min = 0.5;
  double r_max = 2.0;
};

/// x uniform in a ball, y uniform on the sphere scaled by r ∈ [r_min, r_max],
/// a = |a|·e₁.  Points outside the domain, with an indefinite fundamental
/// tensor or with a nearly degenerate {x, y} (or {x, y, a}) frame are
/// redrawn.  Throws ConfigError when the rejection rate is pathological.
std::vector<EvalPoint> sample_points(const PhiModel& m, const SampleSpec& spec);

}  // namespace finsler
