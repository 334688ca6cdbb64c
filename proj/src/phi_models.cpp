#include "finsler/phi_models.hpp"

#include <cmath>
#include <sstream>

#include "finsler/error.hpp"

namespace finsler {

double PhiJet::operator()(int ku, int ks, int kv, int kt) const {
  auto it = partials.find({ku, ks, kv, kt});
  if (it == partials.end()) throw Error(ErrorCode::OrderUnsupported, "phi partial not in jet");
  return it->second;
}

double PhiModel::param(const std::string& key, double fallback) const {
  auto it = def_.params.find(key);
  return it == def_.params.end() ? fallback : it->second;
}

PhiModel PhiModel::with_mode(DerivativeMode mode) const {
  PhiModel copy = *this;
  copy.mode_ = mode;
  return copy;
}

bool PhiModel::in_domain(double u, double s, double v, double t) const {
  if (!std::isfinite(u) || !std::isfinite(s) || !std::isfinite(v) || !std::isfinite(t))
    return false;
  return def_.domain(u, s, v, t);
}

namespace {

// A := √(1 − u + s²) is real on the unit ball; all roots take the positive branch.
struct Euclidean {
  template <class T>
  T operator()(const T& u, const T&, const T&, const T&) const {
    return 0.0 * u + 1.0;
  }
};

struct Funk {
  template <class T>
  T operator()(const T& u, const T& s, const T&, const T&) const {
    using std::sqrt;
    const T A = sqrt(1.0 - u + s * s);
    return (A + s) / (1.0 - u);
  }
};

struct Berwald {
  template <class T>
  T operator()(const T& u, const T& s, const T&, const T&) const {
    using std::sqrt;
    const T A = sqrt(1.0 - u + s * s);
    const T w = 1.0 - u;
    return (A + s) * (A + s) / (w * w * A);
  }
};

struct Shen {
  template <class T>
  T operator()(const T& u, const T& s, const T& v, const T& t) const {
    using std::sqrt;
    const T A = sqrt(1.0 - u + s * s);
    const T w = 1.0 - u;
    return (1.0 + v + w * t / (A + s)) * (A + s) * (A + s) / (w * w * A);
  }
};

// Randers metric |y| + e^{-|x|²}<a,y>; not projectively flat, so its spray
// has nonzero x- and a-components.
struct RandersExp {
  template <class T>
  T operator()(const T& u, const T&, const T&, const T& t) const {
    using std::exp;
    return 1.0 + t * exp(-u);
  }
};

bool unit_ball(double u, double s) {
  return u < 1.0 - kDomainMargin && 1.0 - u + s * s > 0.0;
}

void require_known(const std::string& name, const std::map<std::string, double>& params,
                   std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : params) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw Error(ErrorCode::ConfigError, "model '" + name + "' has no parameter '" + key + "'");
    if (!std::isfinite(value)) throw Error(ErrorCode::ConfigError, "parameter '" + key + "' not finite");
  }
}

double anchor_param(const std::string& name, const std::map<std::string, double>& params,
                    double fallback) {
  auto it = params.find("a");
  const double a = it == params.end() ? fallback : it->second;
  if (!(a >= 0.0 && a < 1.0))
    throw Error(ErrorCode::ConfigError, "model '" + name + "' needs 0 <= a < 1");
  return a;
}

}  // namespace

PhiModel make_model(const std::string& name, const std::map<std::string, double>& params) {
  PhiModel::Definition def;
  def.name = name;
  if (name == "euclidean") {
    require_known(name, params, {});
    def.description = "phi = 1 (flat metric |y|)";
    def.domain_text = "all of R^4";
    def.domain = [](double, double, double, double) { return true; };
    return PhiModel(std::move(def), Euclidean{});
  }
  if (name == "funk") {
    require_known(name, params, {});
    def.description = "Funk metric on the unit ball, phi = (sqrt(1-u+s^2)+s)/(1-u)";
    def.domain_text = "u <= 1 - 1e-6";
    def.domain = [](double u, double s, double, double) { return unit_ball(u, s); };
    return PhiModel(std::move(def), Funk{});
  }
  if (name == "berwald") {
    require_known(name, params, {});
    def.description = "Berwald's metric, phi = (sqrt(1-u+s^2)+s)^2/((1-u)^2 sqrt(1-u+s^2))";
    def.domain_text = "u <= 1 - 1e-6";
    def.domain = [](double u, double s, double, double) { return unit_ball(u, s); };
    return PhiModel(std::move(def), Berwald{});
  }
  if (name == "shen") {
    require_known(name, params, {"a"});
    const double a = anchor_param(name, params, 0.3);
    def.description =
        "Shen's projectively flat metric, phi = {1+v+(1-u)t/(A+s)}(A+s)^2/((1-u)^2 A), "
        "A = sqrt(1-u+s^2)";
    def.domain_text = "u <= 1 - 1e-6, phi >= 1e-6, |a| < 1";
    def.params = {{"a", a}};
    def.uses_anchor = true;
    def.domain = [](double u, double s, double v, double t) {
      return unit_ball(u, s) && Shen{}(u, s, v, t) >= kDomainMargin;
    };
    return PhiModel(std::move(def), Shen{});
  }
  if (name == "randers_exp") {
    require_known(name, params, {"a"});
    const double a = anchor_param(name, params, 0.5);
    def.description = "Randers metric |y| + exp(-|x|^2)<a,y>, phi = 1 + t exp(-u)";
    def.domain_text = "phi >= 1e-6, |a| < 1";
    def.params = {{"a", a}};
    def.uses_anchor = true;
    def.domain = [](double u, double s, double v, double t) {
      return RandersExp{}(u, s, v, t) >= kDomainMargin;
    };
    return PhiModel(std::move(def), RandersExp{});
  }
  throw Error(ErrorCode::ConfigError, "unknown metric '" + name + "'");
}

std::vector<PhiModel> catalog() {
  std::vector<PhiModel> out;
  for (const char* name : {"euclidean", "funk", "berwald", "shen", "randers_exp"})
    out.push_back(make_model(name));
  return out;
}

namespace {

struct Stencil {
  std::vector<int> offsets;
  std::vector<double> weights;
};

const Stencil& central_stencil(int order) {
  static const Stencil stencils[] = {
      {{0}, {1.0}},
      {{-1, 1}, {-0.5, 0.5}},
      {{-1, 0, 1}, {1.0, -2.0, 1.0}},
      {{-2, -1, 1, 2}, {-0.5, 1.0, -1.0, 0.5}},
  };
  return stencils[order];
}

double fd_once(const PhiModel& m, const std::array<double, 4>& at, const MultiIndex& alpha,
               double h) {
  double acc = 0.0;
  const Stencil* st[4];
  for (int k = 0; k < 4; ++k) st[k] = &central_stencil(alpha[k]);
  for (std::size_t i0 = 0; i0 < st[0]->offsets.size(); ++i0)
    for (std::size_t i1 = 0; i1 < st[1]->offsets.size(); ++i1)
      for (std::size_t i2 = 0; i2 < st[2]->offsets.size(); ++i2)
        for (std::size_t i3 = 0; i3 < st[3]->offsets.size(); ++i3) {
          const double u = at[0] + h * st[0]->offsets[i0];
          const double s = at[1] + h * st[1]->offsets[i1];
          const double v = at[2] + h * st[2]->offsets[i2];
          const double t = at[3] + h * st[3]->offsets[i3];
          if (!m.in_domain(u, s, v, t))
            throw Error(ErrorCode::OutOfDomain, "finite-difference stencil leaves the domain");
          acc += st[0]->weights[i0] * st[1]->weights[i1] * st[2]->weights[i2] *
                 st[3]->weights[i3] * m(u, s, v, t);
        }
  const int order = alpha[0] + alpha[1] + alpha[2] + alpha[3];
  return acc / std::pow(h, order);
}

std::vector<MultiIndex> multi_indices(int order) {
  std::vector<MultiIndex> out;
  for (int a = 0; a <= order; ++a)
    for (int b = 0; a + b <= order; ++b)
      for (int c = 0; a + b + c <= order; ++c)
        for (int d = 0; a + b + c + d <= order; ++d) out.push_back({a, b, c, d});
  return out;
}

}  // namespace

double fd_step(int order) {
  switch (order) {
    case 0:
    case 1: return 1e-5;
    case 2: return 1e-4;
    default: return 2e-3;
  }
}

double fd_partial(const PhiModel& m, const std::array<double, 4>& at, const MultiIndex& alpha,
                  double h) {
  for (int k : alpha)
    if (k > 3) throw Error(ErrorCode::OrderUnsupported, "finite differences support order <= 3 per variable");
  if (alpha[0] + alpha[1] + alpha[2] + alpha[3] == 0) return m(at[0], at[1], at[2], at[3]);
  const double coarse = fd_once(m, at, alpha, h);
  const double fine = fd_once(m, at, alpha, 0.5 * h);
  return (4.0 * fine - coarse) / 3.0;
}

PhiJet phi_jet(const PhiModel& m, double u, double s, double v, double t, int order) {
  if (order < 0 || order > kMaxPhiOrder)
    throw Error(ErrorCode::OrderUnsupported, "phi jets support orders 0.." + std::to_string(kMaxPhiOrder));
  if (!m.in_domain(u, s, v, t)) {
    std::ostringstream msg;
    msg << "(u,s,v,t) = (" << u << ", " << s << ", " << v << ", " << t << ") outside " << m.name();
    throw Error(ErrorCode::OutOfDomain, msg.str());
  }
  PhiJet out;
  out.order = order;
  if (m.mode() == DerivativeMode::FiniteDifference) {
    if (order > 3) throw Error(ErrorCode::OrderUnsupported, "finite-difference jets support order <= 3");
    const std::array<double, 4> at{u, s, v, t};
    for (const auto& alpha : multi_indices(order))
      out.partials[alpha] = fd_partial(m, at, alpha, fd_step(alpha[0] + alpha[1] + alpha[2] + alpha[3]));
    return out;
  }
  auto space = JetSpace::get(4, order);
  const Jet value = m(Jet::variable(space, kU, u), Jet::variable(space, kS, s),
                      Jet::variable(space, kV, v), Jet::variable(space, kT, t));
  for (int i = 0; i < space->size(); ++i) {
    auto e = space->exponents(i);
    out.partials[{e[0], e[1], e[2], e[3]}] = value.coeff(i) * space->factorial_weight(i);
  }
  return out;
}

FdReport fd_self_check(const PhiModel& m, double u, double s, double v, double t) {
  const PhiJet exact = phi_jet(m.with_mode(DerivativeMode::Exact), u, s, v, t, 3);
  const std::array<double, 4> at{u, s, v, t};
  FdReport report;
  for (const auto& alpha : multi_indices(3)) {
    const int order = alpha[0] + alpha[1] + alpha[2] + alpha[3];
    if (order == 0) continue;
    const double ex = exact.partials.at(alpha);
    const double fd = fd_partial(m, at, alpha, fd_step(order));
    const double dev = std::abs(fd - ex) / std::max(1.0, std::abs(ex));
    report.max_deviation_by_order[order] = std::max(report.max_deviation_by_order[order], dev);
    report.max_deviation = std::max(report.max_deviation, dev);
  }
  return report;
}

}  // namespace finsler
