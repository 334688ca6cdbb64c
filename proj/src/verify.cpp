#include "finsler/verify.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <sstream>
#include <thread>

#include "finsler/cartan.hpp"
#include "finsler/error.hpp"
#include "finsler/jet_geometry.hpp"
#include "finsler/landsberg.hpp"
#include "finsler/metric.hpp"
#include "finsler/sampler.hpp"
#include "finsler/spray.hpp"

namespace finsler {

std::map<std::string, double> default_tolerances() {
  return {
      {"oracle_rel", 1e-9},        {"theorem1_rel", 1e-8},
      {"theorem2_rel", 1e-6},      {"fd_rel", 1e-4},
      {"fd_phi", 1e-5},            {"identity_rel", 1e-10},
      {"contraction_abs", 1e-12},  {"f_homogeneity_rel", 1e-12},
      {"homogeneity_rel", 1e-10},  {"inverse_rel", 1e-10},
      {"symmetry_rel", 1e-12},     {"norm_formula_rel", 1e-8},
      {"pq_sum_abs", 1e-9},        {"randers_q_abs", 1e-7},
      {"bound_ratio", 1.0},        {"span_rel", 1e-9},
      {"landsberg_y_rel", 1e-9},   {"leg_rel", 1e-8},
      {"contraction_rel", 1e-12},  {"weak_landsberg_rel", 1e-10},
  };
}

void validate(const RunConfig& cfg) {
  make_model(cfg.metric, cfg.params);
  if (cfg.n < 2) throw Error(ErrorCode::ConfigError, "dimension must be at least 2");
  if (cfg.n > 7) throw Error(ErrorCode::ConfigError, "dimension above 7 is not supported");
  if (cfg.samples < 1) throw Error(ErrorCode::ConfigError, "samples must be at least 1");
  if (!(cfg.domain_margin >= 0.0 && cfg.domain_margin < 1.0))
    throw Error(ErrorCode::ConfigError, "domain_margin must lie in [0, 1)");
  const auto defaults = default_tolerances();
  for (const auto& [name, value] : cfg.tolerances) {
    if (!defaults.count(name)) throw Error(ErrorCode::ConfigError, "unknown tolerance '" + name + "'");
    if (!(value > 0.0) || !std::isfinite(value))
      throw Error(ErrorCode::ConfigError, "tolerance '" + name + "' must be positive");
  }
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw Error(ErrorCode::ConfigError, "'" + key + "' expects a number, got '" + v + "'");
  }
}

long long parse_integer(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const long long d = std::stoll(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw Error(ErrorCode::ConfigError, "'" + key + "' expects an integer, got '" + v + "'");
  }
}

}  // namespace

void apply_config_text(RunConfig& cfg, const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorCode::ConfigError, "config line " + std::to_string(lineno) + ": expected key=value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "metric") {
      cfg.metric = value;
    } else if (key == "n") {
      cfg.n = static_cast<int>(parse_integer(key, value));
    } else if (key == "samples") {
      cfg.samples = static_cast<int>(parse_integer(key, value));
    } else if (key == "seed") {
      const long long s = parse_integer(key, value);
      if (s < 0) throw Error(ErrorCode::ConfigError, "seed must be non-negative");
      cfg.seed = static_cast<std::uint64_t>(s);
    } else if (key == "domain_margin") {
      cfg.domain_margin = parse_double(key, value);
    } else if (key == "out") {
      cfg.output_path = value;
    } else if (key.rfind("param.", 0) == 0) {
      cfg.params[key.substr(6)] = parse_double(key, value);
    } else if (key.rfind("tol.", 0) == 0) {
      cfg.tolerances[key.substr(4)] = parse_double(key, value);
    } else {
      throw Error(ErrorCode::ConfigError, "unknown config key '" + key + "'");
    }
  }
}

unsigned thread_count() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("FINSLER_SSM_THREADS")) {
    const long cap = std::strtol(env, nullptr, 10);
    if (cap >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
  }
  return n;
}

namespace {

enum Check : int {
  kContractions,
  kPhiFd,
  kFHomogeneity,
  kMetricOracle,
  kMetricHomogeneity,
  kMetricEuler,
  kInverse,
  kAngularOracle,
  kAngularY,
  kQuadraticCS,
  kQuadraticSpherical,
  kCartanOracle,
  kCartanSymmetry,
  kCartanY,
  kMeanCartanOracle,
  kMeanCartanY,
  kCartanNorm,
  kSphericalNorm,
  kBerwaldExplicit,
  kSemiC,
  kSemiCSum,
  kRandersQ,
  kFunkBound,
  kBerwaldBound,
  kSprayOracle,
  kSpraySpan,
  kSprayHomogeneity,
  kLandsbergSymmetry,
  kLandsbergY,
  kLandsbergClosed,
  kMeanLandsbergY,
  kMeanLandsbergLegs,
  kMeanLandsbergContraction,
  kWeakLandsberg,
  kStretch,
  kCheckCount
};

struct CheckDef {
  const char* name;
  const char* anchor;
  const char* tolerance;
  bool strict = false;
};

const CheckDef kChecks[kCheckCount] = {
    {"invariant_contractions", "covector frame r_i, s_i, t_i identities", "contraction_abs"},
    {"phi_fd_self_check", "phi jets vs central differences", "fd_phi"},
    {"f_homogeneity", "F(x, ly) = l F(x, y)", "f_homogeneity_rel"},
    {"metric_oracle", "fundamental tensor closed form (c0..c6) vs 1/2 d2F2/dydy", "oracle_rel"},
    {"metric_homogeneity", "g(x, ly) = g(x, y)", "homogeneity_rel"},
    {"metric_euler", "g_ij y^j = F F_y^i", "oracle_rel"},
    {"inverse_metric", "g g^-1 = I", "inverse_rel"},
    {"angular_metric_oracle", "angular metric closed form vs g - dF dF", "oracle_rel"},
    {"angular_metric_y", "h_ij y^j = 0", "identity_rel"},
    {"quadratic_forms_cauchy_schwarz", "R2^2 <= S2 T2", "identity_rel"},
    {"quadratic_forms_spherical", "S2 = c0^-1[(u-s^2) - A(u-s^2)^2] without anchor", "oracle_rel"},
    {"cartan_oracle", "Cartan torsion closed form (sigma2..sigma12) vs 1/2 dg/dy", "oracle_rel"},
    {"cartan_symmetry", "total symmetry of C", "symmetry_rel"},
    {"cartan_y", "C_ijk y^k = 0", "identity_rel"},
    {"mean_cartan_oracle", "I_k = (H s_k + K t_k)/2r vs g^ij C_ijk", "oracle_rel"},
    {"mean_cartan_y", "I_k y^k = 0", "identity_rel"},
    {"cartan_norm", "|I|^2 = (S2 H^2 + 2 R2 H K + T2 K^2)/4r^2 vs g^ij I_i I_j", "oracle_rel"},
    {"spherical_norm", "closed-form |I| without anchor", "norm_formula_rel"},
    {"berwald_explicit_norm", "explicit |I| of Berwald's metric (n = 2)", "norm_formula_rel"},
    {"semi_c_reducibility", "C = P/(n+1){h I} + Q/|I|^2 III", "theorem1_rel"},
    {"semi_c_pq_sum", "P + Q = 1", "pq_sum_abs"},
    {"randers_q", "Randers metrics are C-reducible (Q = 0)", "randers_q_abs"},
    {"funk_norm_bound", "|I| < (n+1)/sqrt2 sqrt(1 - sqrt(1 - |x|^2)) at F = 1", "bound_ratio", true},
    {"berwald_norm_bound", "|I| < 3(1 + (1+|x|^2)/(2(1+sqrt(1-|x|^2)))) at F = 1", "bound_ratio", true},
    {"spray_oracle", "spray closed form vs variational formula", "oracle_rel"},
    {"spray_span", "G = rP y + r^2 Q x + r^2 R a", "span_rel"},
    {"spray_homogeneity", "G(x, 2y) = 4 G(x, y)", "homogeneity_rel"},
    {"landsberg_symmetry", "total symmetry of L", "symmetry_rel"},
    {"landsberg_y", "L_ijk y^k = 0", "landsberg_y_rel"},
    {"landsberg_closed", "Landsberg closed form L1..L13 vs -1/2 F F_y d3G", "fd_rel"},
    {"mean_landsberg_y", "J_i y^i = 0", "identity_rel"},
    {"mean_landsberg_legs", "J = H(x - s y/r) + K(a - t y/r)", "leg_rel"},
    {"mean_landsberg_contraction", "g^jk L_ijk raised then lowered", "contraction_rel"},
    {"weakly_landsberg_legs", "J = 0 implies H = K = 0", "weak_landsberg_rel"},
    {"stretch_bivector", "mean stretch in span{x^a, a^y, x^y}", "theorem2_rel"},
};

struct Outcome {
  enum Kind { NotApplicable, Value, Skipped } kind = NotApplicable;
  double value = 0;
  std::string reason;
};

using PointOutcomes = std::array<Outcome, kCheckCount>;

double contract_y(const SymTensor3& T, const Vec& y) {
  return frobenius(T.contract_last(y));
}

// Runs `body`, recording a skip on the listed checks if it raises Error.
void guarded(PointOutcomes& out, std::initializer_list<Check> checks,
             const std::function<void()>& body) {
  try {
    body();
  } catch (const Error& e) {
    for (Check c : checks) {
      if (out[c].kind == Outcome::Value) continue;
      out[c].kind = Outcome::Skipped;
      out[c].reason = e.what();
    }
  }
}

void set(PointOutcomes& out, Check c, double v) {
  out[c].kind = Outcome::Value;
  out[c].value = std::isnan(v) ? INFINITY : v;
}

PointOutcomes evaluate_point(const PhiModel& m, const EvalPoint& p) {
  PointOutcomes out;
  const int n = p.dim();
  const Invariants inv = compute_invariants(p);
  const double r = inv.r;
  const bool anchor_free = !m.uses_anchor() || norm(p.a) == 0.0;

  set(out, kContractions, contraction_defect(p, inv));

  guarded(out, {kPhiFd}, [&] {
    set(out, kPhiFd, fd_self_check(m, inv.u, inv.s, inv.v, inv.t).max_deviation);
  });

  guarded(out, {kFHomogeneity}, [&] {
    const double F = finsler_value(m, p);
    double worst = 0;
    for (double l : {0.5, 2.0, 7.0}) {
      EvalPoint q = p;
      for (double& c : q.y) c *= l;
      worst = std::max(worst, std::abs(finsler_value(m, q) - l * F) / (l * F));
    }
    set(out, kFHomogeneity, worst);
  });

  SymTensor2 g, go, ginv;
  guarded(out, {kMetricOracle, kMetricHomogeneity, kMetricEuler, kInverse, kAngularOracle,
                kAngularY, kQuadraticCS, kQuadraticSpherical},
          [&] {
            g = fundamental_tensor(m, p);
            go = fundamental_tensor_oracle(m, p);
            const double gn = frobenius(go.data());
            set(out, kMetricOracle, relative_error(g.data(), go.data(), gn));

            double worst = 0;
            for (double l : {0.5, 2.0}) {
              EvalPoint q = p;
              for (double& c : q.y) c *= l;
              worst = std::max(worst, relative_error(fundamental_tensor_oracle(m, q).data(),
                                                     go.data(), gn));
            }
            set(out, kMetricHomogeneity, worst);

            const FinslerExpansion fx = expand_finsler(m, p, 0, 1);
            Vec FFy(n);
            for (int i = 0; i < n; ++i) FFy[i] = fx.F.value() * fx.F.partial_vars({fx.yv(i)});
            set(out, kMetricEuler, relative_error(go.contract(p.y), FFy, gn * r));

            ginv = inverse_metric(go);
            std::vector<double> prod(static_cast<std::size_t>(n) * n);
            for (int i = 0; i < n; ++i)
              for (int j = 0; j < n; ++j) {
                double acc = 0.0;
                for (int k = 0; k < n; ++k) acc += go(i, k) * ginv(k, j);
                prod[i * n + j] = acc;
              }
            set(out, kInverse, relative_error(prod, SymTensor2::identity(n).data(), 1.0));

            const SymTensor2 h = angular_metric(m, p);
            const SymTensor2 ho = angular_metric_oracle(m, p);
            set(out, kAngularOracle, relative_error(h.data(), ho.data(), gn));
            set(out, kAngularY, frobenius(h.contract(p.y)) / (std::max(frobenius(h.data()), gn) * r));

            const QuadraticForms q = quadratic_forms(inverse_metric(g), inv);
            const double st = std::max(q.S2 * q.T2, 1e-300);
            set(out, kQuadraticCS, std::max(0.0, q.R2 * q.R2 - q.S2 * q.T2) / st);
            if (anchor_free) {
              const double closed = spherical_S2(m, p);
              set(out, kQuadraticSpherical,
                  std::abs(closed - q.S2) / std::max(std::abs(q.S2), inv.u));
            }
          });

  const double gnorm = g.dim() ? frobenius(g.data()) : 1.0;
  guarded(out, {kCartanOracle, kCartanSymmetry, kCartanY, kMeanCartanOracle, kMeanCartanY,
                kCartanNorm, kSphericalNorm, kBerwaldExplicit},
          [&] {
            const SymTensor3 C = cartan_closed(m, p);
            const SymTensor3 Co = cartan_oracle(m, p);
            const double cfloor = gnorm / r;
            set(out, kCartanOracle, relative_error(C.data(), Co.data(), cfloor));
            set(out, kCartanSymmetry, Co.asymmetry() / std::max(frobenius(Co.data()), cfloor));
            set(out, kCartanY, contract_y(Co, p.y) / (std::max(frobenius(Co.data()), cfloor) * r));

            const MeanCartan mc = mean_cartan(m, p);
            const Vec Io = mean_cartan_oracle(m, p);
            set(out, kMeanCartanOracle, relative_error(mc.I, Io, 1.0 / r));
            set(out, kMeanCartanY, std::abs(dot(Io, p.y)) / (std::max(norm(Io), 1.0 / r) * r));

            const double nf = std::sqrt(std::max(0.0, cartan_norm_squared(mc)));
            const double nd = cartan_norm_direct(m, p);
            set(out, kCartanNorm, std::abs(nf - nd) / std::max(nd, 1.0 / r));
            if (anchor_free) {
              const double ns = spherical_norm_formula(m, p);
              set(out, kSphericalNorm, std::abs(ns - nf) / std::max(nf, 1e-12 / r));
              if (m.name() == "berwald" && n == 2) {
                const double ne = berwald_norm_explicit(p);
                set(out, kBerwaldExplicit, std::abs(ne - ns) / std::max(ns, 1e-12 / r));
              }
            }
          });

  guarded(out, {kSemiC, kSemiCSum, kRandersQ, kFunkBound, kBerwaldBound}, [&] {
    if (m.name() == "funk") set(out, kRandersQ, std::abs(corollary_pq(m, p)[1]));
    const double F = finsler_value(m, p);
    const double x2 = inv.u;
    if (n == 2 && (m.name() == "funk" || m.name() == "berwald")) {
      const double normalized = cartan_norm(m, p) * F;
      if (m.name() == "funk") {
        const double bound = (n + 1) / std::sqrt(2.0) * std::sqrt(1.0 - std::sqrt(1.0 - x2));
        set(out, kFunkBound, normalized / bound);
      } else {
        const double bound = 3.0 * (1.0 + (1.0 + x2) / (2.0 * (1.0 + std::sqrt(1.0 - x2))));
        set(out, kBerwaldBound, normalized / bound);
      }
    }
    const CReducibilityReport rep = semi_c_reducible(m, p);
    set(out, kSemiC, rep.residual);
    set(out, kSemiCSum, std::abs(rep.P + rep.Q - 1.0));
  });

  Vec Go;
  guarded(out, {kSprayOracle, kSpraySpan, kSprayHomogeneity}, [&] {
    Go = spray_oracle(m, p);
    const Vec G = spray_closed(m, p);
    set(out, kSprayOracle, relative_error(G, Go, r * r));
    EvalPoint q = p;
    for (double& c : q.y) c *= 2.0;
    Vec G4 = Go;
    for (double& c : G4) c *= 4.0;
    set(out, kSprayHomogeneity, relative_error(spray_oracle(m, q), G4, 4 * r * r));
    set(out, kSpraySpan, pqr_decompose(Go, p).residual);
  });

  std::optional<LandsbergBundle> bundle;
  guarded(out, {kLandsbergSymmetry, kLandsbergY, kLandsbergClosed, kMeanLandsbergY,
                kMeanLandsbergLegs, kMeanLandsbergContraction, kWeakLandsberg, kStretch},
          [&] {
            bundle = landsberg_bundle(m, p, true);
            const LandsbergBundle& b = *bundle;
            // L is degree 0 in y; ‖g‖·‖G‖/r² is its natural size.
            const double lnat = frobenius(b.g.data()) * norm(b.G) / (r * r);
            const double ln = std::max(frobenius(b.L.data()), lnat);
            set(out, kLandsbergSymmetry, ln == 0.0 ? 0.0 : b.L.asymmetry() / ln);
            set(out, kLandsbergY, ln == 0.0 ? 0.0 : contract_y(b.L, p.y) / (ln * r));

            const MeanLandsberg ml = mean_landsberg(b, p);
            const double jnat = ml.scale;
            const double jn = std::max(norm(ml.J), jnat);
            set(out, kMeanLandsbergY, jn == 0.0 ? 0.0 : std::abs(dot(ml.J, p.y)) / (jn * r));
            set(out, kMeanLandsbergLegs, ml.leg_residual);
            set(out, kMeanLandsbergContraction, ml.contraction_defect);
            if (norm(ml.J) <= 1e-12 * jnat) {
              const double legs = std::max(std::abs(ml.H_land) * norm(inv.s_cov),
                                           std::abs(ml.K_land.value_or(0.0)) * norm(inv.t_cov));
              set(out, kWeakLandsberg, jnat == 0.0 ? 0.0 : legs / jnat);
            }

            const StretchDecomposition sd = stretch_decompose(b, p);
            set(out, kStretch, sd.residual);
          });

  guarded(out, {kLandsbergClosed}, [&] {
    if (!bundle) return;
    const LandsbergBundle& b = *bundle;
    const double lnat = frobenius(b.g.data()) * norm(b.G) / (r * r);
    const SymTensor3 Lc = landsberg_closed(m, p);
    const double floor = std::max(lnat, 1e-300);
    set(out, kLandsbergClosed, relative_error(Lc.data(), b.L.data(), floor));
  });
  return out;
}

}  // namespace

VerificationReport run_verification(const RunConfig& cfg) {
  validate(cfg);
  const PhiModel model = make_model(cfg.metric, cfg.params);
  SampleSpec spec;
  spec.n = cfg.n;
  spec.count = cfg.samples;
  spec.seed = cfg.seed;
  spec.domain_margin = cfg.domain_margin;
  const std::vector<EvalPoint> points = sample_points(model, spec);

  std::vector<PointOutcomes> results(points.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < points.size(); i = next++)
      results[i] = evaluate_point(model, points[i]);
  };
  const unsigned nthreads = std::min<unsigned>(thread_count(), static_cast<unsigned>(points.size()));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < nthreads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  VerificationReport report;
  report.config = cfg;
  for (int c = 0; c < kCheckCount; ++c) {
    CheckRecord rec;
    rec.name = kChecks[c].name;
    rec.anchor = kChecks[c].anchor;
    rec.tolerance = cfg.tolerances.at(kChecks[c].tolerance);
    rec.strict = kChecks[c].strict;
    for (std::size_t i = 0; i < results.size(); ++i) {
      const Outcome& o = results[i][c];
      if (o.kind == Outcome::Skipped) {
        if (rec.points_skipped++ == 0) rec.skip_reason = o.reason;
      } else if (o.kind == Outcome::Value) {
        ++rec.points_tested;
        if (!rec.worst_point || o.value > rec.max_residual) {
          rec.max_residual = o.value;
          rec.worst_point = i;
        }
      }
    }
    if (rec.points_tested == 0 && rec.points_skipped == 0) continue;
    rec.pass = rec.strict ? rec.max_residual < rec.tolerance : rec.max_residual <= rec.tolerance;
    report.pass = report.pass && rec.pass;
    report.checks.push_back(std::move(rec));
  }
  return report;
}

namespace {

nlohmann::ordered_json number(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

}  // namespace

nlohmann::ordered_json VerificationReport::to_json() const {
  using nlohmann::ordered_json;
  ordered_json j;
  j["schema"] = kReportSchema;
  ordered_json env;
  env["version"] = kVersion;
  env["metric"] = config.metric;
  ordered_json params = ordered_json::object();
  const PhiModel model = make_model(config.metric, config.params);
  for (const auto& [k, v] : model.params()) params[k] = v;
  env["params"] = params;
  env["dimension"] = config.n;
  env["samples"] = config.samples;
  env["seed"] = config.seed;
  env["domain_margin"] = config.domain_margin;
  j["environment"] = env;
  ordered_json tols = ordered_json::object();
  for (const auto& [k, v] : config.tolerances) tols[k] = v;
  j["tolerances"] = tols;
  ordered_json checks = ordered_json::array();
  std::size_t failed = 0;
  for (const auto& c : this->checks) {
    ordered_json rec;
    rec["check_name"] = c.name;
    rec["anchor"] = c.anchor;
    rec["points_tested"] = c.points_tested;
    rec["points_skipped"] = c.points_skipped;
    rec["max_residual"] = number(c.max_residual);
    rec["tolerance"] = c.tolerance;
    rec["comparison"] = c.strict ? "<" : "<=";
    rec["worst_point"] = c.worst_point ? ordered_json(*c.worst_point) : ordered_json(nullptr);
    if (!c.skip_reason.empty()) rec["skip_reason"] = c.skip_reason;
    rec["pass"] = c.pass;
    failed += c.pass ? 0 : 1;
    checks.push_back(rec);
  }
  j["checks"] = checks;
  ordered_json summary;
  summary["pass"] = pass;
  summary["checks_total"] = this->checks.size();
  summary["checks_failed"] = failed;
  j["summary"] = summary;
  return j;
}

namespace {

nlohmann::ordered_json matrix_json(const std::vector<double>& e, int n) {
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  for (int i = 0; i < n; ++i) {
    nlohmann::ordered_json row = nlohmann::ordered_json::array();
    for (int j = 0; j < n; ++j) row.push_back(e[i * n + j]);
    out.push_back(row);
  }
  return out;
}

nlohmann::ordered_json tensor3_json(const SymTensor3& T) {
  const int n = T.dim();
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  for (int i = 0; i < n; ++i) {
    std::vector<double> slice(static_cast<std::size_t>(n) * n);
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) slice[j * n + k] = T(i, j, k);
    out.push_back(matrix_json(slice, n));
  }
  return out;
}

template <class Fn>
void section(nlohmann::ordered_json& j, const char* key, Fn&& fn) {
  try {
    j[key] = fn();
  } catch (const Error& e) {
    j[key] = {{"error", e.what()}};
  }
}

template <class T>
nlohmann::ordered_json opt(const std::optional<T>& v) {
  return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

}  // namespace

nlohmann::ordered_json tensor_dump(const PhiModel& m, const EvalPoint& p) {
  using nlohmann::ordered_json;
  validate(p);
  const double F = finsler_value(m, p);
  const int n = p.dim();
  const Invariants inv = compute_invariants(p);
  ordered_json j;
  j["schema"] = kReportSchema;
  j["metric"] = m.name();
  j["point"] = {{"x", p.x}, {"y", p.y}, {"a", p.a}};
  j["invariants"] = {{"r", inv.r}, {"u", inv.u}, {"s", inv.s}, {"v", inv.v}, {"t", inv.t}};
  j["F"] = F;
  section(j, "g", [&] {
    const SymTensor2 g = fundamental_tensor(m, p);
    const SymTensor2 go = fundamental_tensor_oracle(m, p);
    return ordered_json{{"value", matrix_json(g.data(), n)},
                        {"oracle_residual", relative_error(g.data(), go.data(), frobenius(go.data()))}};
  });
  section(j, "g_inv", [&] {
    return matrix_json(inverse_metric(fundamental_tensor(m, p)).data(), n);
  });
  section(j, "h", [&] {
    const SymTensor2 h = angular_metric(m, p);
    const SymTensor2 ho = angular_metric_oracle(m, p);
    return ordered_json{{"value", matrix_json(h.data(), n)},
                        {"oracle_residual", relative_error(h.data(), ho.data(), frobenius(ho.data()))}};
  });
  section(j, "C", [&] {
    const SymTensor3 C = cartan_closed(m, p);
    const SymTensor3 Co = cartan_oracle(m, p);
    return ordered_json{{"value", tensor3_json(C)},
                        {"oracle_residual", relative_error(C.data(), Co.data(),
                                                          frobenius(fundamental_tensor(m, p).data()) / inv.r)}};
  });
  section(j, "I", [&] {
    const MeanCartan mc = mean_cartan(m, p);
    return ordered_json{{"value", mc.I},
                        {"H", mc.H},
                        {"K", mc.K},
                        {"norm", std::sqrt(std::max(0.0, cartan_norm_squared(mc)))},
                        {"norm_direct", cartan_norm_direct(m, p)}};
  });
  section(j, "semi_c", [&] {
    const CReducibilityReport rep = semi_c_reducible(m, p);
    return ordered_json{{"P", rep.P},
                        {"Q", rep.Q},
                        {"M", rep.M},
                        {"N", rep.N},
                        {"method", to_string(rep.method)},
                        {"degenerate_denominator", rep.degenerate_denominator},
                        {"residual", rep.residual},
                        {"best_fit_residual", rep.best_fit_residual}};
  });
  section(j, "G", [&] {
    const Vec Go = spray_oracle(m, p);
    const Vec G = spray_closed(m, p);
    ordered_json s{{"value", Go}, {"closed_residual", relative_error(G, Go, inv.r * inv.r)}};
    try {
      const PqrDecomposition d = pqr_decompose(Go, p);
      s["P"] = opt(d.P);
      s["Q"] = opt(d.Q);
      s["R"] = opt(d.R);
      s["span_residual"] = d.residual;
    } catch (const Error& e) {
      s["pqr_error"] = e.what();
    }
    return s;
  });
  section(j, "landsberg", [&] {
    const LandsbergBundle b = landsberg_bundle(m, p, true);
    const MeanLandsberg ml = mean_landsberg(b, p);
    ordered_json s{{"L", tensor3_json(b.L)},
                   {"J", ml.J},
                   {"H_land", ml.H_land},
                   {"K_land", opt(ml.K_land)},
                   {"leg_residual", ml.leg_residual}};
    const StretchDecomposition sd = stretch_decompose(b, p);
    s["Sigma"] = matrix_json(sd.Sigma.e, n);
    s["T"] = opt(sd.T);
    s["Z"] = opt(sd.Z);
    s["W"] = sd.W;
    s["stretch_residual"] = sd.residual;
    return s;
  });
  return j;
}

}  // namespace finsler
