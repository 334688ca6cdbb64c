// finsler_ssm: catalog listing, verification suite, tensor dumps and
// geodesic traces for F = r·φ(u, s, v, t).
//
// Exit codes: 0 success, 1 verification failure or point outside the
// domain, 2 usage or configuration error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "finsler/error.hpp"
#include "finsler/phi_models.hpp"
#include "finsler/spray.hpp"
#include "finsler/verify.hpp"

using namespace finsler;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

std::map<std::string, double> parse_params(const std::vector<std::string>& items) {
  std::map<std::string, double> out;
  for (const auto& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0)
      throw Error(ErrorCode::ConfigError, "--param expects key=value, got '" + item + "'");
    const std::string key = item.substr(0, eq), value = item.substr(eq + 1);
    try {
      std::size_t used = 0;
      out[key] = std::stod(value, &used);
      if (used != value.size()) throw std::invalid_argument(value);
    } catch (const std::exception&) {
      throw Error(ErrorCode::ConfigError, "parameter '" + key + "' is not a number");
    }
  }
  return out;
}

Vec parse_vector(const std::string& name, const std::string& text) {
  Vec out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error(ErrorCode::ConfigError, name + " must be a comma-separated list of numbers");
    }
  }
  if (out.empty()) throw Error(ErrorCode::ConfigError, name + " is empty");
  return out;
}

Vec default_anchor(const PhiModel& m, int n) {
  Vec a(n, 0.0);
  a[0] = m.anchor_norm();
  return a;
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::ConfigError, "cannot open '" + path + "' for writing");
  out << text;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

int cmd_catalog(bool json) {
  const auto models = catalog();
  if (json) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& m : models) {
      nlohmann::ordered_json params = nlohmann::ordered_json::object();
      for (const auto& [k, v] : m.params()) params[k] = v;
      arr.push_back({{"name", m.name()},
                     {"description", m.description()},
                     {"params", params},
                     {"domain", m.domain_text()},
                     {"uses_anchor", m.uses_anchor()}});
    }
    std::cout << arr.dump(2) << "\n";
    return kExitPass;
  }
  for (const auto& m : models) {
    std::cout << m.name() << "\n  " << m.description() << "\n  domain: " << m.domain_text();
    for (const auto& [k, v] : m.params()) std::cout << "\n  param " << k << " = " << v;
    std::cout << "\n";
  }
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Verification engine for general spherically symmetric Finsler metrics"};
  app.require_subcommand(1);

  bool catalog_json = false;
  auto* catalog_cmd = app.add_subcommand("catalog", "List the built-in metrics");
  catalog_cmd->add_flag("--json", catalog_json, "Machine-readable output");

  RunConfig defaults;
  std::string metric = defaults.metric, config_path, out_path;
  std::vector<std::string> params;
  int n = defaults.n, samples = defaults.samples;
  std::uint64_t seed = defaults.seed;
  double margin = defaults.domain_margin;
  std::map<std::string, double> tol_values = default_tolerances();

  auto* verify_cmd = app.add_subcommand("verify", "Run the identity suite on sampled points");
  auto* o_metric = verify_cmd->add_option("--metric", metric, "Catalog metric name");
  auto* o_param = verify_cmd->add_option("--param", params, "Model parameter key=value (repeatable)");
  auto* o_n = verify_cmd->add_option("--n", n, "Dimension");
  auto* o_samples = verify_cmd->add_option("--samples", samples, "Number of sample points");
  auto* o_seed = verify_cmd->add_option("--seed", seed, "RNG seed");
  auto* o_margin = verify_cmd->add_option("--domain-margin", margin, "Relative margin from the domain boundary");
  auto* o_out = verify_cmd->add_option("--out", out_path, "Report path (stdout if omitted)");
  verify_cmd->add_option("--config", config_path, "key=value config file; flags win")
      ->check(CLI::ExistingFile);
  std::map<std::string, CLI::Option*> tol_opts;
  for (auto& [name, value] : tol_values)
    tol_opts[name] = verify_cmd->add_option("--tol-" + name, value, "Tolerance " + name);

  std::string t_metric = "euclidean", t_x, t_y, t_a, t_out;
  std::vector<std::string> t_params;
  auto* tensors_cmd = app.add_subcommand("tensors", "Dump every tensor at one point as JSON");
  tensors_cmd->add_option("--metric", t_metric, "Catalog metric name");
  tensors_cmd->add_option("--param", t_params, "Model parameter key=value (repeatable)");
  tensors_cmd->add_option("--x", t_x, "Base point, comma separated")->required();
  tensors_cmd->add_option("--y", t_y, "Direction, comma separated")->required();
  tensors_cmd->add_option("--a", t_a, "Anchor covector (default |a| e1)");
  tensors_cmd->add_option("--out", t_out, "Output path (stdout if omitted)");

  std::string g_metric = "euclidean", g_x, g_y, g_a, g_out;
  std::vector<std::string> g_params;
  int g_steps = 1000;
  double g_dt = 1e-3;
  auto* geo_cmd = app.add_subcommand("geodesic", "Integrate a geodesic and write a CSV trace");
  geo_cmd->add_option("--metric", g_metric, "Catalog metric name");
  geo_cmd->add_option("--param", g_params, "Model parameter key=value (repeatable)");
  geo_cmd->add_option("--x0", g_x, "Initial point")->required();
  geo_cmd->add_option("--y0", g_y, "Initial velocity")->required();
  geo_cmd->add_option("--a", g_a, "Anchor covector (default |a| e1)");
  geo_cmd->add_option("--steps", g_steps, "Number of RK4 steps");
  geo_cmd->add_option("--dt", g_dt, "Step size");
  geo_cmd->add_option("--out", g_out, "CSV path (stdout if omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*catalog_cmd) return cmd_catalog(catalog_json);

    if (*verify_cmd) {
      RunConfig cfg;
      if (!config_path.empty()) {
        std::ifstream in(config_path);
        std::stringstream buf;
        buf << in.rdbuf();
        apply_config_text(cfg, buf.str());
      }
      if (o_metric->count()) cfg.metric = metric;
      if (o_param->count())
        for (const auto& [k, v] : parse_params(params)) cfg.params[k] = v;
      if (o_n->count()) cfg.n = n;
      if (o_samples->count()) cfg.samples = samples;
      if (o_seed->count()) cfg.seed = seed;
      if (o_margin->count()) cfg.domain_margin = margin;
      if (o_out->count()) cfg.output_path = out_path;
      for (const auto& [name, opt] : tol_opts)
        if (opt->count()) cfg.tolerances[name] = tol_values[name];
      validate(cfg);

      const VerificationReport report = run_verification(cfg);
      write_output(cfg.output_path, report.to_json().dump(2) + "\n");
      for (const auto& c : report.checks)
        if (!c.pass)
          std::cerr << "FAIL " << c.name << ": max residual " << c.max_residual
                    << (c.strict ? " >= " : " > ") << c.tolerance << "\n";
      std::cerr << (report.pass ? "verification passed" : "verification FAILED") << " ("
                << report.checks.size() << " checks, " << cfg.samples << " points)\n";
      return report.pass ? kExitPass : kExitFail;
    }

    if (*tensors_cmd) {
      const PhiModel m = make_model(t_metric, parse_params(t_params));
      EvalPoint p{parse_vector("--x", t_x), parse_vector("--y", t_y), {}};
      p.a = t_a.empty() ? default_anchor(m, p.dim()) : parse_vector("--a", t_a);
      validate(p);
      write_output(t_out, tensor_dump(m, p).dump(2) + "\n");
      return kExitPass;
    }

    if (*geo_cmd) {
      const PhiModel m = make_model(g_metric, parse_params(g_params));
      const Vec x0 = parse_vector("--x0", g_x), y0 = parse_vector("--y0", g_y);
      const Vec a = g_a.empty() ? default_anchor(m, static_cast<int>(x0.size()))
                                : parse_vector("--a", g_a);
      validate(EvalPoint{x0, y0, a});
      const Trajectory tr = geodesic_integrate(m, x0, y0, a, g_steps, g_dt);
      std::ostringstream csv;
      const int dim = static_cast<int>(x0.size());
      csv << "tau";
      for (int i = 1; i <= dim; ++i) csv << ",x" << i;
      for (int i = 1; i <= dim; ++i) csv << ",y" << i;
      csv << ",F\n";
      for (std::size_t k = 0; k < tr.tau.size(); ++k) {
        csv << fmt(tr.tau[k]);
        for (double v : tr.x[k]) csv << "," << fmt(v);
        for (double v : tr.y[k]) csv << "," << fmt(v);
        csv << "," << fmt(tr.F[k]) << "\n";
      }
      csv << "# steps=" << tr.tau.size() - 1 << " max_F_drift=" << fmt(tr.max_F_drift)
          << " domain_exit=" << (tr.domain_exit ? "true" : "false") << "\n";
      write_output(g_out, csv.str());
      return tr.domain_exit ? kExitFail : kExitPass;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    switch (e.code()) {
      case ErrorCode::ConfigError:
      case ErrorCode::ZeroDirection:
        return kExitUsage;
      default:
        return kExitFail;
    }
  }
  return kExitUsage;
}
