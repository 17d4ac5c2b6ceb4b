#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "hardy/boundary.hpp"
#include "hardy/chain.hpp"
#include "hardy/domain.hpp"
#include "hardy/toeplitz.hpp"
#include "json.hpp"

namespace hardy {

/// Where and how run() writes its artifacts.
struct OutputSpec {
  std::string path;  // JSON report file; empty means stdout only
  std::vector<std::string> formats{"json"};  // subset of {json, csv}
};

/// A fully resolved experiment. The domain is built at the deepest schedule
/// entry; boundary data arrives as coefficient lists or boundary samples and
/// is stored in coefficient form either way.
struct ExperimentConfig {
  DomainSpec domain = DomainSpec::disk(1);
  std::vector<int> schedule{16, 32, 64};
  std::uint64_t seed = 20260825ull;
  bool has_rho = false;
  bool has_phi = false;
  BoundaryFunction rho;   // real boundary density for the distance identity
  BoundaryFunction phi;   // symbol for operator scans
  GamelinChain chain;     // empty when the block is absent
  WidomGridSpec scan;
  Eigen::VectorXd alpha;  // weight exponents, used by kernel-dump
  DeltaPoint at;          // chain parameter, used by kernel-dump
  OutputSpec output;
  nlohmann::json echo;    // resolved config with every default materialized
};

/// Strict parse and validation. Unknown keys, wrong types, and out-of-range
/// values raise ConfigError naming the offending path; JSON syntax errors
/// report the line they occur on. Nothing is computed here.
ExperimentConfig parse_config(const std::string& text);

enum class RunMode { SzegoVerify, WidomScan, KernelDump };

struct Report {
  std::string schema = "hardy-report/1";
  std::string mode;
  nlohmann::json config;   // the resolved-config echo
  nlohmann::json results;
  /// stage wall-clocks in seconds. These go to stderr, never into the
  /// serialized report, so reruns of one config stay byte-identical.
  std::vector<std::pair<std::string, double>> timings;

  std::string to_json_text() const;
};

/// Dispatches the experiment and writes the configured outputs atomically
/// (temporary sibling file + rename). Library errors pass through with the
/// failing stage's name prefixed, preserving their type.
Report run(const ExperimentConfig& cfg, RunMode mode);

/// Plot tables as CSV text: kind "convergence" gives (M, gap) rows from a
/// szego-verify report, kind "sigma-grid" gives (alpha, at, sigma_min, norm)
/// rows from a widom-scan report. Mismatched kinds are ConfigErrors.
std::string plot_data_csv(const Report& rep, const std::string& kind);
void emit_plot_data(const Report& rep, const std::string& kind,
                    const std::string& path);

/// Write bytes through a temporary sibling and an atomic rename, creating
/// parent directories as needed. Partial output never lands on `path`.
void write_atomic(const std::string& path, const std::string& bytes);

}  // namespace hardy
