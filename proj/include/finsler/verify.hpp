#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "finsler/invariants.hpp"
#include "finsler/phi_models.hpp"

namespace finsler {

inline constexpr const char* kVersion = "1.0.0";
inline constexpr int kReportSchema = 1;

/// Named tolerances and their defaults.  oracle_rel, theorem1_rel,
/// theorem2_rel and fd_rel are the headline ones; the rest gate identities.
std::map<std::string, double> default_tolerances();

struct RunConfig {
  std::string metric = "euclidean";
  std::map<std::string, double> params;
  int n = 3;
  int samples = 100;
  std::uint64_t seed = 0;
  double domain_margin = 0.2;
  std::map<std::string, double> tolerances = default_tolerances();
  std::string output_path;
};

/// Throws Error(ConfigError) on invalid fields or unknown tolerance names.
void validate(const RunConfig& cfg);

/// Applies `key=value` lines (blank lines and '#' comments ignored) to cfg.
/// Keys: metric, n, samples, seed, domain_margin, out, param.<name>, tol.<name>.
void apply_config_text(RunConfig& cfg, const std::string& text);

struct CheckRecord {
  std::string name;
  std::string anchor;
  std::size_t points_tested = 0;
  std::size_t points_skipped = 0;  // evaluation raised a documented Error
  double max_residual = 0;
  std::optional<std::size_t> worst_point;
  double tolerance = 0;
  bool strict = false;  // pass requires max_residual < tolerance
  bool pass = true;
  std::string skip_reason;  // first error message seen, if any
};

struct VerificationReport {
  RunConfig config;
  std::vector<CheckRecord> checks;
  bool pass = true;

  nlohmann::ordered_json to_json() const;
};

/// Worker threads: hardware concurrency capped by FINSLER_SSM_THREADS.
unsigned thread_count();

VerificationReport run_verification(const RunConfig& cfg);

/// Every quantity at one point, with residual fields.  Throws OutOfDomain
/// when p is not admissible.
nlohmann::ordered_json tensor_dump(const PhiModel& m, const EvalPoint& p);

}  // namespace finsler
