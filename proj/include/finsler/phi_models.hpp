#pragma once

#include <array>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "finsler/jet.hpp"

namespace finsler {

enum class DerivativeMode { Exact, FiniteDifference };

/// Index of φ's arguments in jets and multi-indices.
enum PhiArg : int { kU = 0, kS = 1, kV = 2, kT = 3 };

using MultiIndex = std::array<int, 4>;  // (k_u, k_s, k_v, k_t)

/// φ and its mixed partials in (u, s, v, t) up to a total order.
struct PhiJet {
  int order = 0;
  std::map<MultiIndex, double> partials;

  /// ∂^{ku+ks+kv+kt} φ / ∂u^ku ∂s^ks ∂v^kv ∂t^kt.  Throws if not populated.
  double operator()(int ku, int ks, int kv, int kt) const;
  double value() const { return (*this)(0, 0, 0, 0); }
};

/// A generator φ(u, s, v, t) of F = r·φ.  The closed form is stored twice,
/// once for doubles and once for jets, so every derivative comes from
/// Taylor arithmetic on the same expression.
class PhiModel {
 public:
  using ScalarFn = std::function<double(double, double, double, double)>;
  using JetFn = std::function<Jet(const Jet&, const Jet&, const Jet&, const Jet&)>;
  using DomainFn = std::function<bool(double, double, double, double)>;

  struct Definition {
    std::string name;
    std::string description;
    std::string domain_text;
    std::map<std::string, double> params;
    bool uses_anchor = false;  // depends on (v, t)
    double x_radius = 1.0;     // sampling bound for |x|
    DomainFn domain;
  };

  template <class Expr>
  PhiModel(Definition def, Expr expr)
      : def_(std::move(def)), scalar_(expr), jet_(expr) {}

  const std::string& name() const { return def_.name; }
  const std::string& description() const { return def_.description; }
  const std::string& domain_text() const { return def_.domain_text; }
  const std::map<std::string, double>& params() const { return def_.params; }
  double param(const std::string& key, double fallback = 0.0) const;
  bool uses_anchor() const { return def_.uses_anchor; }
  double x_radius() const { return def_.x_radius; }
  /// |a| used when sampling the anchor covector (0 for models without one).
  double anchor_norm() const { return def_.uses_anchor ? param("a") : 0.0; }

  DerivativeMode mode() const { return mode_; }
  PhiModel with_mode(DerivativeMode mode) const;

  bool in_domain(double u, double s, double v, double t) const;

  double operator()(double u, double s, double v, double t) const { return scalar_(u, s, v, t); }
  Jet operator()(const Jet& u, const Jet& s, const Jet& v, const Jet& t) const {
    return jet_(u, s, v, t);
  }

 private:
  Definition def_;
  ScalarFn scalar_;
  JetFn jet_;
  DerivativeMode mode_ = DerivativeMode::Exact;
};

inline constexpr int kMaxPhiOrder = 5;
inline constexpr double kDomainMargin = 1e-6;

/// φ partials up to `order` (≤ 5 exact, ≤ 3 in finite-difference mode).
PhiJet phi_jet(const PhiModel& m, double u, double s, double v, double t, int order);

/// Builds a catalog model by name with parameter overrides.  Throws
/// Error(ConfigError) for unknown names or parameters out of range.
PhiModel make_model(const std::string& name, const std::map<std::string, double>& params = {});

/// euclidean, funk, berwald, shen, randers_exp with default parameters.
std::vector<PhiModel> catalog();

struct FdReport {
  std::array<double, 4> max_deviation_by_order{};  // index 1..3 used
  double max_deviation = 0.0;
};

/// Compares exact jets with central differences of φ values (orders 1–3,
/// one Richardson refinement).  Deviation is |fd − exact| / max(1, |exact|).
FdReport fd_self_check(const PhiModel& m, double u, double s, double v, double t);

/// Central-difference estimate of ∂^α φ with base step h and one Richardson step.
double fd_partial(const PhiModel& m, const std::array<double, 4>& at, const MultiIndex& alpha,
                  double h);

/// Base step used by fd_self_check and finite-difference mode for a given order.
double fd_step(int order);

}  // namespace finsler
