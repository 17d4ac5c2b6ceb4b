#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hardy/chain.hpp"
#include "hardy/config.hpp"
#include "hardy/errors.hpp"

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in.good())
    throw hardy::ConfigError("cannot read file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_config_command(const std::string& path, hardy::RunMode mode) {
  const hardy::ExperimentConfig cfg = hardy::parse_config(slurp(path));
  const hardy::Report rep = hardy::run(cfg, mode);
  for (const auto& [stage, seconds] : rep.timings)
    std::fprintf(stderr, "[%s] %.3f s\n", stage.c_str(), seconds);
  if (cfg.output.path.empty())
    std::fputs(rep.to_json_text().c_str(), stdout);
  else
    std::fprintf(stderr, "report written to %s\n", cfg.output.path.c_str());
  return 0;
}

int run_delta_calc(const std::string& chain_path, const std::string& op,
                   const std::vector<std::string>& point_args) {
  const nlohmann::json j = [&] {
    try {
      return nlohmann::json::parse(slurp(chain_path));
    } catch (const nlohmann::json::parse_error& e) {
      throw hardy::ConfigError(std::string("chain file is not valid JSON: ") +
                               e.what());
    }
  }();
  // accept either a bare chain list or an object with a "chain" key
  const hardy::GamelinChain chain = hardy::chain_from_json(
      j.is_object() && j.contains("chain") ? j["chain"] : j);

  const int n = chain.size();
  const int need = op == "product" ? 2 * n : (op == "inverse" ? n : 0);
  if (static_cast<int>(point_args.size()) != need)
    throw hardy::ConfigError("op '" + op + "' needs " + std::to_string(need) +
                             " point(s) for a " + std::to_string(n) +
                             "-stage chain, got " +
                             std::to_string(point_args.size()));
  std::vector<hardy::ProjectiveValue> pts;
  pts.reserve(point_args.size());
  for (const auto& s : point_args) pts.push_back(hardy::parse_projective(s));

  hardy::DeltaPoint result;
  if (op == "gamma") {
    result = hardy::delta_gamma(chain);
  } else if (op == "inverse") {
    result = hardy::delta_inverse(
        hardy::DeltaPoint(pts.begin(), pts.end()), chain);
  } else {
    result = hardy::delta_product(
        hardy::DeltaPoint(pts.begin(), pts.begin() + n),
        hardy::DeltaPoint(pts.begin() + n, pts.end()), chain);
  }
  nlohmann::json out;
  out["op"] = op;
  out["stages"] = n;
  nlohmann::json coords = nlohmann::json::array();
  for (const auto& p : result) coords.push_back(hardy::format_projective(p));
  out["result"] = std::move(coords);
  std::fputs((out.dump(2) + "\n").c_str(), stdout);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"constrained Hardy space toolkit"};
  app.require_subcommand(1);

  std::string szego_cfg, widom_cfg, kernel_cfg;
  auto* szego = app.add_subcommand(
      "szego-verify", "run the two-sided distance check from a config");
  szego->add_option("-c,--config", szego_cfg, "experiment config (JSON)")
      ->required();
  auto* widom = app.add_subcommand(
      "widom-scan", "scan Toeplitz compressions over the parameter grid");
  widom->add_option("-c,--config", widom_cfg, "experiment config (JSON)")
      ->required();
  auto* kernel = app.add_subcommand(
      "kernel-dump", "dump the reproducing kernel of the configured space");
  kernel->add_option("-c,--config", kernel_cfg, "experiment config (JSON)")
      ->required();

  std::string chain_path, op;
  std::vector<std::string> points;
  auto* delta = app.add_subcommand(
      "delta-calc", "evaluate the parameter-space group operations");
  delta->add_option("--chain", chain_path, "chain description (JSON)")
      ->required();
  delta->add_option("--op", op, "one of product, inverse, gamma")
      ->required()
      ->check(CLI::IsMember({"product", "inverse", "gamma"}));
  delta->add_option("--points", points,
                    "projective coordinates, e.g. 0.5, -0.3+0.25i, inf");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (szego->parsed())
      return run_config_command(szego_cfg, hardy::RunMode::SzegoVerify);
    if (widom->parsed())
      return run_config_command(widom_cfg, hardy::RunMode::WidomScan);
    if (kernel->parsed())
      return run_config_command(kernel_cfg, hardy::RunMode::KernelDump);
    return run_delta_calc(chain_path, op, points);
  } catch (const hardy::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const hardy::Error& e) {
    std::fprintf(stderr, "numerical guard: %s\n", e.what());
    return 3;
  }
}
