#include "hardy/config.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <initializer_list>

#include <unistd.h>

#include "hardy/errors.hpp"
#include "hardy/kernel.hpp"
#include "hardy/szego.hpp"

namespace hardy {

namespace {

using nlohmann::json;

// shortest round-trip decimal text, '.' separator regardless of locale
std::string fmt_double(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void check_keys(const json& obj, const std::string& where,
                std::initializer_list<const char*> allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* k : allowed)
      if (it.key() == k) {
        known = true;
        break;
      }
    if (!known)
      throw ConfigError(where + ": unknown key '" + it.key() + "'");
  }
}

const json& expect_object(const json& j, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  return j;
}

cplx complex_value(const json& j, const std::string& where) {
  if (j.is_number()) return cplx(j.get<double>(), 0.0);
  if (j.is_string()) return parse_complex(j.get<std::string>());
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return cplx(j[0].get<double>(), j[1].get<double>());
  throw ConfigError(where + " must be a number, a complex string, or [re, im]");
}

ProjectiveValue projective_value(const json& j, const std::string& where) {
  if (j.is_string()) return parse_projective(j.get<std::string>());
  return ProjectiveValue::finite(complex_value(j, where));
}

// domain block: kind, q/x0 for the annulus, and the truncation schedule
void parse_domain(const json& block, ExperimentConfig& cfg) {
  expect_object(block, "domain");
  check_keys(block, "domain", {"kind", "q", "x0", "schedule"});
  if (!block.contains("kind") || !block["kind"].is_string())
    throw ConfigError("domain.kind must be \"disk\" or \"annulus\"");
  const std::string kind = block["kind"].get<std::string>();
  if (kind != "disk" && kind != "annulus")
    throw ConfigError("domain.kind must be \"disk\" or \"annulus\"");

  if (block.contains("schedule")) {
    const json& s = block["schedule"];
    if (!s.is_array() || s.empty())
      throw ConfigError("domain.schedule must be a nonempty integer list");
    cfg.schedule.clear();
    for (const auto& e : s) {
      if (!e.is_number_integer() || e.get<int>() < 1)
        throw ConfigError("domain.schedule entries must be integers >= 1");
      cfg.schedule.push_back(e.get<int>());
    }
    for (size_t i = 1; i < cfg.schedule.size(); ++i)
      if (cfg.schedule[i] <= cfg.schedule[i - 1])
        throw ConfigError("domain.schedule must be strictly increasing");
  }
  const int deepest = cfg.schedule.back();

  if (kind == "disk") {
    if (block.contains("q") || block.contains("x0"))
      throw ConfigError("domain: q and x0 apply to the annulus only");
    cfg.domain = DomainSpec::disk(deepest);
    return;
  }
  if (!block.contains("q") || !block["q"].is_number())
    throw ConfigError("domain.q is required for the annulus");
  const double q = block["q"].get<double>();
  if (!(q > 0.0 && q < 1.0)) throw ConfigError("domain.q: q outside (0,1)");
  double x0 = std::sqrt(q);
  if (block.contains("x0")) {
    if (!block["x0"].is_number())
      throw ConfigError("domain.x0 must be a number");
    x0 = block["x0"].get<double>();
    if (!(x0 > q && x0 < 1.0))
      throw ConfigError("domain.x0 must lie strictly between q and 1");
  }
  cfg.domain = DomainSpec::annulus(q, x0, deepest);
}

// boundary data block: {"coefficients": [per-component [k, value] lists]}
// or {"samples": [per-component node values], "nodes": count}
BoundaryFunction parse_boundary_block(const json& block, const DomainSpec& dom,
                                      const std::string& name) {
  expect_object(block, name);
  check_keys(block, name, {"coefficients", "samples", "nodes"});
  const bool has_coeffs = block.contains("coefficients");
  const bool has_samples = block.contains("samples");
  if (has_coeffs == has_samples)
    throw ConfigError(name + " needs exactly one of coefficients/samples");
  if (has_coeffs && block.contains("nodes"))
    throw ConfigError(name + ".nodes applies to samples only");

  if (has_coeffs) {
    const json& comps = block["coefficients"];
    if (!comps.is_array() ||
        static_cast<int>(comps.size()) != dom.components())
      throw ConfigError(name + ".coefficients must hold " +
                        std::to_string(dom.components()) +
                        " component list(s) for this domain");
    int band = 0;
    for (const auto& comp : comps) {
      if (!comp.is_array())
        throw ConfigError(name + ".coefficients components must be lists");
      for (const auto& entry : comp) {
        if (!entry.is_array() || entry.size() != 2 ||
            !entry[0].is_number_integer())
          throw ConfigError(name +
                            ".coefficients entries must be [k, value] pairs");
        band = std::max(band, std::abs(entry[0].get<int>()));
      }
    }
    BoundaryFunction f(dom.components(), band);
    for (int c = 0; c < dom.components(); ++c) {
      std::vector<bool> seen(2 * band + 1, false);
      for (const auto& entry : comps[c]) {
        const int k = entry[0].get<int>();
        if (seen[k + band])
          throw ConfigError(name + ".coefficients[" + std::to_string(c) +
                            "]: duplicate exponent " + std::to_string(k));
        seen[k + band] = true;
        f.at(c, k) = complex_value(entry[1], name + ".coefficients value");
      }
    }
    return f;
  }

  const json& comps = block["samples"];
  if (!comps.is_array() || static_cast<int>(comps.size()) != dom.components())
    throw ConfigError(name + ".samples must hold " +
                      std::to_string(dom.components()) +
                      " component list(s) for this domain");
  const size_t n = comps[0].is_array() ? comps[0].size() : 0;
  for (const auto& comp : comps)
    if (!comp.is_array() || comp.size() != n)
      throw ConfigError(name + ".samples components must be equal-length lists");
  if (block.contains("nodes")) {
    if (!block["nodes"].is_number_integer() ||
        block["nodes"].get<size_t>() != n)
      throw ConfigError(name + ".nodes must match the sample count " +
                        std::to_string(n));
  }
  // node counts of the form 4k+4 alias exactly onto a band-k truncation
  if (n < 8 || n % 4 != 0)
    throw ConfigError(name + ".samples needs 4k+4 nodes per component, k >= 1");
  const int band = (static_cast<int>(n) - 4) / 4;
  std::vector<Eigen::VectorXcd> vals(dom.components(),
                                     Eigen::VectorXcd(static_cast<int>(n)));
  for (int c = 0; c < dom.components(); ++c)
    for (size_t i = 0; i < n; ++i)
      vals[c][static_cast<int>(i)] =
          complex_value(comps[c][i], name + ".samples value");
  return samples_to_coeffs(dom.with_truncation(band), vals);
}

void parse_scan(const json& block, ExperimentConfig& cfg) {
  expect_object(block, "scan");
  check_keys(block, "scan", {"sigma_points", "delta_points", "margin"});
  if (block.contains("sigma_points")) {
    if (!block["sigma_points"].is_number_integer() ||
        block["sigma_points"].get<int>() < 1)
      throw ConfigError("scan.sigma_points must be an integer >= 1");
    cfg.scan.sigma_points = block["sigma_points"].get<int>();
  }
  if (block.contains("delta_points")) {
    if (!block["delta_points"].is_number_integer() ||
        block["delta_points"].get<int>() < 2)
      throw ConfigError("scan.delta_points must be an integer >= 2");
    cfg.scan.delta_points = block["delta_points"].get<int>();
  }
  if (block.contains("margin")) {
    if (!block["margin"].is_number())
      throw ConfigError("scan.margin must be a number");
    cfg.scan.margin = block["margin"].get<double>();
    if (!(cfg.scan.margin > 0.0 && cfg.scan.margin < 0.5))
      throw ConfigError("scan.margin must lie in (0, 0.5)");
  }
}

void parse_weight(const json& block, ExperimentConfig& cfg) {
  expect_object(block, "weight");
  check_keys(block, "weight", {"alpha", "at"});
  if (block.contains("alpha")) {
    const json& a = block["alpha"];
    if (!a.is_array() || static_cast<int>(a.size()) != cfg.domain.sigma())
      throw ConfigError("weight.alpha must list " +
                        std::to_string(cfg.domain.sigma()) +
                        " exponent(s) for this domain");
    cfg.alpha.resize(cfg.domain.sigma());
    for (int i = 0; i < cfg.domain.sigma(); ++i) {
      if (!a[i].is_number())
        throw ConfigError("weight.alpha entries must be numbers");
      cfg.alpha[i] = a[i].get<double>();
    }
  }
  if (block.contains("at")) {
    const json& d = block["at"];
    if (!d.is_array() || static_cast<int>(d.size()) != cfg.chain.size())
      throw ConfigError("weight.at must list one parameter per chain stage (" +
                        std::to_string(cfg.chain.size()) + ")");
    cfg.at.clear();
    for (size_t i = 0; i < d.size(); ++i)
      cfg.at.push_back(
          projective_value(d[i], "weight.at[" + std::to_string(i) + "]"));
  }
}

void parse_output(const json& block, ExperimentConfig& cfg) {
  expect_object(block, "output");
  check_keys(block, "output", {"path", "formats"});
  if (block.contains("path")) {
    if (!block["path"].is_string())
      throw ConfigError("output.path must be a string");
    cfg.output.path = block["path"].get<std::string>();
  }
  if (block.contains("formats")) {
    const json& f = block["formats"];
    if (!f.is_array() || f.empty())
      throw ConfigError("output.formats must be a nonempty list");
    cfg.output.formats.clear();
    for (const auto& e : f) {
      if (!e.is_string() ||
          (e.get<std::string>() != "json" && e.get<std::string>() != "csv"))
        throw ConfigError("output.formats entries must be \"json\" or \"csv\"");
      for (const auto& prev : cfg.output.formats)
        if (prev == e.get<std::string>())
          throw ConfigError("output.formats lists '" + prev + "' twice");
      cfg.output.formats.push_back(e.get<std::string>());
    }
  }
  bool wants_csv = false;
  for (const auto& e : cfg.output.formats) wants_csv |= (e == "csv");
  if (wants_csv && cfg.output.path.empty())
    throw ConfigError("output.formats: csv needs output.path");
}

json boundary_echo(const BoundaryFunction& f) {
  json comps = json::array();
  for (int c = 0; c < f.components(); ++c) {
    json list = json::array();
    for (int k = -f.band(); k <= f.band(); ++k)
      if (f.coeff(c, k) != cplx(0.0))
        list.push_back(json::array({k, format_complex(f.coeff(c, k))}));
    comps.push_back(std::move(list));
  }
  return json{{"coefficients", std::move(comps)}};
}

json build_echo(const ExperimentConfig& cfg) {
  json e;
  e["domain"]["kind"] =
      cfg.domain.kind() == DomainKind::Disk ? "disk" : "annulus";
  if (cfg.domain.kind() == DomainKind::Annulus) {
    e["domain"]["q"] = cfg.domain.q();
    e["domain"]["x0"] = cfg.domain.x0();
  }
  e["domain"]["schedule"] = cfg.schedule;
  e["seed"] = cfg.seed;
  if (!cfg.chain.empty()) e["chain"] = chain_to_json(cfg.chain);
  if (cfg.has_rho) e["rho"] = boundary_echo(cfg.rho);
  if (cfg.has_phi) e["phi"] = boundary_echo(cfg.phi);
  e["scan"] = {{"sigma_points", cfg.scan.sigma_points},
               {"delta_points", cfg.scan.delta_points},
               {"margin", cfg.scan.margin}};
  json alpha = json::array();
  for (int i = 0; i < cfg.alpha.size(); ++i) alpha.push_back(cfg.alpha[i]);
  json at = json::array();
  for (const auto& p : cfg.at) at.push_back(format_projective(p));
  e["weight"] = {{"alpha", std::move(alpha)}, {"at", std::move(at)}};
  e["output"] = {{"path", cfg.output.path}, {"formats", cfg.output.formats}};
  return e;
}

// rethrow with the stage name while keeping the exception family, so the
// exit-code mapping (config -> 2, numerical guard -> 3) survives wrapping
template <typename F>
auto with_stage(const char* stage, F&& f) {
  const auto tag = [stage](const char* what) {
    return std::string(stage) + ": " + what;
  };
  try {
    return f();
  } catch (const ShapeError& e) {
    throw ShapeError(tag(e.what()));
  } catch (const ConfigError& e) {
    throw ConfigError(tag(e.what()));
  } catch (const DomainError& e) {
    throw DomainError(tag(e.what()));
  } catch (const WeightError& e) {
    throw WeightError(tag(e.what()));
  } catch (const TruncationError& e) {
    throw TruncationError(tag(e.what()));
  } catch (const ConstraintError& e) {
    throw ConstraintError(tag(e.what()));
  } catch (const EvaluationError& e) {
    throw EvaluationError(tag(e.what()));
  } catch (const UnsupportedError& e) {
    throw UnsupportedError(tag(e.what()));
  }
}

json projective_list(const DeltaPoint& d) {
  json out = json::array();
  for (const auto& p : d) out.push_back(format_projective(p));
  return out;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    size_t line = 1;
    for (size_t i = 0; i + 1 < e.byte && i < text.size(); ++i)
      if (text[i] == '\n') ++line;
    throw ConfigError("config is not valid JSON (line " +
                      std::to_string(line) + "): " + e.what());
  }
  expect_object(j, "config");
  check_keys(j, "config", {"domain", "seed", "rho", "phi", "chain", "scan",
                           "weight", "output"});

  ExperimentConfig cfg;
  if (!j.contains("domain"))
    throw ConfigError("config needs a domain block");
  parse_domain(j["domain"], cfg);

  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned())
      throw ConfigError("seed must be a nonnegative integer");
    cfg.seed = j["seed"].get<std::uint64_t>();
  }

  if (j.contains("chain")) cfg.chain = chain_from_json(j["chain"]);

  cfg.has_rho = j.contains("rho");
  cfg.has_phi = j.contains("phi");
  if (cfg.has_rho && cfg.has_phi)
    throw ConfigError("config: rho and phi are mutually exclusive");
  if (cfg.has_rho) {
    cfg.rho = parse_boundary_block(j["rho"], cfg.domain, "rho");
    if (!cfg.rho.is_real())
      throw ConfigError("rho must be real boundary data");
  }
  if (cfg.has_phi) cfg.phi = parse_boundary_block(j["phi"], cfg.domain, "phi");

  if (j.contains("scan")) parse_scan(j["scan"], cfg);

  cfg.alpha = Eigen::VectorXd::Zero(cfg.domain.sigma());
  cfg.at = delta_gamma(cfg.chain);
  if (j.contains("weight")) parse_weight(j["weight"], cfg);

  if (j.contains("output")) parse_output(j["output"], cfg);

  cfg.echo = build_echo(cfg);
  return cfg;
}

std::string Report::to_json_text() const {
  json j;
  j["schema"] = schema;
  j["mode"] = mode;
  j["config"] = config;
  j["results"] = results;
  return j.dump(2) + "\n";
}

Report run(const ExperimentConfig& cfg, RunMode mode) {
  Report rep;
  rep.config = cfg.echo;
  const auto clock = [] {
    return std::chrono::steady_clock::now();
  };
  const auto record = [&rep](const char* stage, auto t0, auto t1) {
    rep.timings.emplace_back(
        stage, std::chrono::duration<double>(t1 - t0).count());
  };

  if (!cfg.chain.empty()) {
    const auto t0 = clock();
    with_stage("validate-chain", [&] {
      const ChainValidation v = validate_chain(cfg.domain, cfg.chain, cfg.seed);
      if (!v.passed)
        throw ConstraintError(
            "stage " + std::to_string(v.first_failure) + ": " +
            v.messages.at(static_cast<size_t>(v.first_failure)));
    });
    record("validate-chain", t0, clock());
  }

  switch (mode) {
    case RunMode::SzegoVerify: {
      rep.mode = "szego-verify";
      if (!cfg.has_rho)
        throw ConfigError("szego-verify needs a rho block");
      const auto t0 = clock();
      const SzegoReport r = with_stage("szego-schedule", [&] {
        return szego_schedule(cfg.domain, cfg.rho, cfg.chain, cfg.schedule);
      });
      record("szego-schedule", t0, clock());
      json n = json::array();
      for (int i = 0; i < r.n.size(); ++i) n.push_back(r.n[i]);
      json trace = json::array();
      for (const auto& [deg, gap] : r.trace)
        trace.push_back(json::array({deg, gap}));
      rep.results = {{"c_rho", r.c_rho},
                     {"n", std::move(n)},
                     {"omega", projective_list(r.omega)},
                     {"rhs", r.rhs},
                     {"lhs", r.lhs},
                     {"basis_degree", r.basis_degree},
                     {"gap", r.gap},
                     {"lhs_warned", r.lhs_warned},
                     {"trace", std::move(trace)}};
      break;
    }
    case RunMode::WidomScan: {
      rep.mode = "widom-scan";
      if (!cfg.has_phi)
        throw ConfigError("widom-scan needs a phi block");
      const auto t0 = clock();
      const WidomScan s = with_stage("widom-scan", [&] {
        return widom_scan(cfg.domain, cfg.phi, cfg.chain, cfg.scan);
      });
      record("widom-scan", t0, clock());
      json grid = json::array();
      for (const auto& pt : s.grid) {
        json alpha = json::array();
        for (int i = 0; i < pt.alpha.size(); ++i) alpha.push_back(pt.alpha[i]);
        grid.push_back({{"alpha", std::move(alpha)},
                        {"at", projective_list(pt.at)},
                        {"sigma_min", pt.sigma_min},
                        {"norm", pt.norm}});
      }
      rep.results = {{"verdict", to_string(s.verdict)},
                     {"min_sigma", s.min_sigma},
                     {"distance", s.distance},
                     {"distance_stalled", s.distance_stalled},
                     {"margin", s.margin},
                     {"grid", std::move(grid)}};
      break;
    }
    case RunMode::KernelDump: {
      rep.mode = "kernel-dump";
      const auto t0 = clock();
      const ConstrainedSpace space = with_stage("kernel-build", [&] {
        const WeightSpec w = cfg.domain.sigma() > 0
                                 ? WeightSpec::z_power(cfg.domain, cfg.alpha)
                                 : WeightSpec::trivial(cfg.domain);
        return build_constrained_space(cfg.domain, w, cfg.chain, cfg.at);
      });
      record("kernel-build", t0, clock());
      const KernelRep& k = space.kernel();
      json exps = json::array();
      for (int e : k.exponents()) exps.push_back(e);
      json alpha = json::array();
      for (int i = 0; i < cfg.alpha.size(); ++i) alpha.push_back(cfg.alpha[i]);
      // kernel values on a deterministic interior ring
      const double r = cfg.domain.kind() == DomainKind::Disk
                           ? 0.5
                           : std::sqrt(cfg.domain.q());
      json ring = json::array();
      std::vector<cplx> zs;
      for (int i = 0; i < 5; ++i) {
        zs.push_back(std::polar(r, 2.0 * M_PI * i / 5.0));
        ring.push_back(format_complex(zs.back()));
      }
      json values = json::array();
      for (int i = 0; i < 5; ++i) {
        json row = json::array();
        for (int j2 = 0; j2 < 5; ++j2)
          row.push_back(format_complex(k.kernel(zs[i], zs[j2])));
        values.push_back(std::move(row));
      }
      const double x0 = cfg.domain.x0();
      rep.results = {{"truncation", cfg.domain.truncation()},
                     {"dim", space.dim()},
                     {"exponents", std::move(exps)},
                     {"alpha", std::move(alpha)},
                     {"at", projective_list(cfg.at)},
                     {"basepoint_norm", std::real(k.kernel(x0, x0))},
                     {"ring", std::move(ring)},
                     {"kernel", std::move(values)}};
      break;
    }
  }

  if (!cfg.output.path.empty()) {
    const auto t0 = clock();
    with_stage("write-outputs", [&] {
      for (const auto& f : cfg.output.formats)
        if (f == "csv" && mode == RunMode::KernelDump)
          throw ConfigError("kernel-dump has no plot table");
      for (const auto& f : cfg.output.formats) {
        if (f == "json") {
          write_atomic(cfg.output.path, rep.to_json_text());
        } else {
          const std::string kind =
              mode == RunMode::SzegoVerify ? "convergence" : "sigma-grid";
          std::string stem = cfg.output.path;
          if (stem.size() > 5 && stem.substr(stem.size() - 5) == ".json")
            stem.resize(stem.size() - 5);
          emit_plot_data(rep, kind, stem + "." + kind + ".csv");
        }
      }
    });
    record("write-outputs", t0, clock());
  }
  return rep;
}

std::string plot_data_csv(const Report& rep, const std::string& kind) {
  if (kind == "convergence") {
    if (rep.mode != "szego-verify")
      throw ConfigError("plot kind 'convergence' needs a szego-verify report");
    std::string csv = "M,gap\n";
    for (const auto& row : rep.results.at("trace")) {
      csv += std::to_string(row[0].get<int>());
      csv += ',';
      csv += fmt_double(row[1].get<double>());
      csv += '\n';
    }
    return csv;
  }
  if (kind == "sigma-grid") {
    if (rep.mode != "widom-scan")
      throw ConfigError("plot kind 'sigma-grid' needs a widom-scan report");
    std::string csv = "alpha,at,sigma_min,norm\n";
    for (const auto& cell : rep.results.at("grid")) {
      std::string alpha, at;
      for (const auto& a : cell.at("alpha")) {
        if (!alpha.empty()) alpha += ';';
        alpha += fmt_double(a.get<double>());
      }
      for (const auto& p : cell.at("at")) {
        if (!at.empty()) at += ';';
        at += p.get<std::string>();
      }
      csv += alpha + ',' + at + ',' + fmt_double(cell.at("sigma_min")) + ',' +
             fmt_double(cell.at("norm")) + '\n';
    }
    return csv;
  }
  throw ConfigError("unknown plot kind '" + kind + "'");
}

void emit_plot_data(const Report& rep, const std::string& kind,
                    const std::string& path) {
  write_atomic(path, plot_data_csv(rep, kind));
}

void write_atomic(const std::string& path, const std::string& bytes) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  std::error_code ec;
  if (target.has_parent_path()) {
    fs::create_directories(target.parent_path(), ec);
    if (ec)
      throw ConfigError("output path not writable: " +
                        target.parent_path().string());
  }
  fs::path tmp = target;
  tmp += ".tmp" + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out.good()) {
      fs::remove(tmp, ec);
      throw ConfigError("failed writing output file " + tmp.string());
    }
  }
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw ConfigError("failed moving output into place at " + path);
  }
}

}  // namespace hardy
