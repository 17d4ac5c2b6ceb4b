#include "hardy/chain.hpp"

#include <Eigen/SVD>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

#include "hardy/errors.hpp"

namespace hardy {

Constraint Constraint::two_point(cplx a, cplx b) {
  if (a == b)
    throw ConfigError("two-point constraint needs distinct points");
  Constraint s;
  s.kind = Kind::TwoPoint;
  s.a = a;
  s.b = b;
  return s;
}

Constraint Constraint::derivation(cplx c, int order) {
  if (order < 1) throw ConfigError("derivation order must be >= 1");
  Constraint s;
  s.kind = Kind::Derivation;
  s.c = c;
  s.order = order;
  return s;
}

cplx ProjectiveValue::value() const {
  if (is_infinite())
    throw EvaluationError("projective value is infinite; no finite value");
  return u / v;
}

ProjectiveValue ProjectiveValue::normalized() const {
  if (!is_valid()) throw ConfigError("projective coordinate (0,0) is invalid");
  if (std::abs(u) >= std::abs(v)) return {cplx(1.0), v / u};
  return {u / v, cplx(1.0)};
}

double ProjectiveValue::distance(const ProjectiveValue& p,
                                 const ProjectiveValue& q) {
  const double np = std::hypot(std::abs(p.u), std::abs(p.v));
  const double nq = std::hypot(std::abs(q.u), std::abs(q.v));
  if (np == 0.0 || nq == 0.0)
    throw ConfigError("projective coordinate (0,0) is invalid");
  return std::abs(p.u * q.v - p.v * q.u) / (np * nq);
}

bool ProjectiveValue::approx_eq(const ProjectiveValue& p,
                                const ProjectiveValue& q, double tol) {
  return distance(p, q) <= tol;
}

namespace {

void check_point(const DeltaPoint& d, const GamelinChain& chain,
                 const char* what) {
  if (static_cast<int>(d.size()) != chain.size())
    throw ShapeError(std::string(what) + ": coordinate count " +
                     std::to_string(d.size()) + " != chain length " +
                     std::to_string(chain.size()));
  for (const auto& p : d)
    if (!p.is_valid())
      throw ConfigError(std::string(what) +
                        ": projective coordinate (0,0) is invalid");
}

}  // namespace

DeltaPoint delta_gamma(const GamelinChain& chain) {
  DeltaPoint d;
  d.reserve(chain.size());
  for (const auto& s : chain.stages())
    d.push_back(s.kind == Constraint::Kind::TwoPoint
                    ? ProjectiveValue::finite(1.0)
                    : ProjectiveValue::infinity());
  return d;
}

DeltaPoint delta_product(const DeltaPoint& d, const DeltaPoint& e,
                         const GamelinChain& chain) {
  check_point(d, chain, "delta_product lhs");
  check_point(e, chain, "delta_product rhs");
  DeltaPoint out(chain.size());
  for (int i = 0; i < chain.size(); ++i) {
    const auto& p = d[i];
    const auto& q = e[i];
    ProjectiveValue r;
    if (chain.stage(i).kind == Constraint::Kind::TwoPoint) {
      r = {p.u * q.u, p.v * q.v};
    } else {
      r = {p.u * q.u, p.u * q.v + p.v * q.u};
    }
    // Both indeterminate corners (two-point 0*inf, derivation 0 o 0) have a
    // vanishing numerator; resolve them to the zero of the sphere.
    if (!r.is_valid()) r = ProjectiveValue::finite(0.0);
    out[i] = r;
  }
  return out;
}

DeltaPoint delta_inverse(const DeltaPoint& d, const GamelinChain& chain) {
  check_point(d, chain, "delta_inverse");
  DeltaPoint out(chain.size());
  for (int i = 0; i < chain.size(); ++i) {
    const auto& p = d[i];
    if (chain.stage(i).kind == Constraint::Kind::TwoPoint)
      out[i] = {p.v, p.u};
    else
      out[i] = {-p.u, p.v};
  }
  return out;
}

Eigen::VectorXcd gamma_eval(const DomainSpec& dom, const LaurentSeries& f,
                            const GamelinChain& chain) {
  Eigen::VectorXcd g(chain.gamma_count());
  for (int i = 0; i < chain.size(); ++i) {
    const Constraint& s = chain.stage(i);
    if (s.kind == Constraint::Kind::TwoPoint) {
      g[2 * i] = f.evaluate(dom, s.a);
      g[2 * i + 1] = f.evaluate(dom, s.b);
    } else {
      g[2 * i] = f.evaluate(dom, s.c);
      g[2 * i + 1] = f.evaluate(dom, s.c, s.order);
    }
  }
  return g;
}

double constraint_residual(const DomainSpec& dom, const LaurentSeries& f,
                           const GamelinChain& chain, const DeltaPoint& d) {
  check_point(d, chain, "constraint_residual");
  const Eigen::VectorXcd g = gamma_eval(dom, f, chain);
  double worst = 0.0;
  for (int i = 0; i < chain.size(); ++i) {
    const cplx lhs = g[2 * i], rhs = g[2 * i + 1];
    const double r = std::abs(d[i].v * lhs - d[i].u * rhs) /
                     (std::abs(d[i].u) + std::abs(d[i].v));
    worst = std::max(worst, r);
  }
  return worst;
}

cplx condition_on_monomial(const DomainSpec& dom, const Constraint& s, int k) {
  const LaurentSeries mono = LaurentSeries::monomial(k);
  if (s.kind == Constraint::Kind::TwoPoint)
    return mono.evaluate(dom, s.a) - mono.evaluate(dom, s.b);
  return mono.evaluate(dom, s.c, s.order);
}

ChainValidation validate_chain(const DomainSpec& dom,
                               const GamelinChain& chain, std::uint64_t seed) {
  for (int i = 0; i < chain.size(); ++i) {
    const Constraint& s = chain.stage(i);
    if (s.kind == Constraint::Kind::TwoPoint) {
      if (s.a == s.b)
        throw ConfigError("stage " + std::to_string(i) +
                          ": two-point constraint needs distinct points");
      if (!dom.is_interior(s.a) || !dom.is_interior(s.b))
        throw ConfigError("stage " + std::to_string(i) +
                          ": constraint points must be interior");
    } else {
      if (s.order < 1)
        throw ConfigError("stage " + std::to_string(i) +
                          ": derivation order must be >= 1");
      if (!dom.is_interior(s.c))
        throw ConfigError("stage " + std::to_string(i) +
                          ": constraint points must be interior");
    }
  }

  ChainValidation rep;
  rep.stage_ok.assign(chain.size(), true);
  rep.messages.assign(chain.size(), "");

  int max_order = 0;
  for (const auto& s : chain.stages())
    if (s.kind == Constraint::Kind::Derivation)
      max_order = std::max(max_order, s.order);
  const int reach = chain.size() + max_order + 8;
  const int kmin = dom.kind() == DomainKind::Disk ? 0 : -reach;
  const int m = reach - kmin + 1;

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  for (int i = 0; i < chain.size(); ++i) {
    const Constraint& s = chain.stage(i);
    if (s.kind == Constraint::Kind::TwoPoint) {
      rep.messages[i] = "two-point stage: nothing to check";
      continue;
    }

    // basis of the algebra cut out by the earlier stages: null space of
    // their conditions on the monomial span
    Eigen::MatrixXcd cond(i, m);
    for (int r = 0; r < i; ++r)
      for (int k = kmin; k <= reach; ++k)
        cond(r, k - kmin) = condition_on_monomial(dom, chain.stage(r), k);
    Eigen::MatrixXcd null_basis;
    if (i == 0) {
      null_basis = Eigen::MatrixXcd::Identity(m, m);
    } else {
      Eigen::JacobiSVD<Eigen::MatrixXcd> svd(
          cond, Eigen::ComputeFullU | Eigen::ComputeFullV);
      const auto& sv = svd.singularValues();
      int rank = 0;
      const double cut = sv.size() ? sv[0] * 1e-12 : 0.0;
      for (int j = 0; j < sv.size(); ++j)
        if (sv[j] > cut) ++rank;
      null_basis = svd.matrixV().rightCols(m - rank);
    }
    if (null_basis.cols() < 1) {
      rep.stage_ok[i] = false;
      rep.messages[i] = "no admissible test functions below this stage";
      if (rep.passed) rep.first_failure = i;
      rep.passed = false;
      continue;
    }

    double worst = 0.0;
    for (int trial = 0; trial < 6; ++trial) {
      auto draw = [&]() {
        Eigen::VectorXcd g(null_basis.cols());
        for (int j = 0; j < g.size(); ++j) g[j] = cplx(gauss(rng), gauss(rng));
        Eigen::VectorXcd x = null_basis * g;
        x /= x.cwiseAbs().maxCoeff();
        return LaurentSeries(kmin, x);
      };
      const LaurentSeries f = draw(), g = draw();
      const LaurentSeries fg = f.product(g);
      const cplx lfg = fg.evaluate(dom, s.c, s.order);
      const cplx fc = f.evaluate(dom, s.c), gc = g.evaluate(dom, s.c);
      const cplx lf = f.evaluate(dom, s.c, s.order);
      const cplx lg = g.evaluate(dom, s.c, s.order);
      const double scale =
          std::max({1.0, std::abs(lfg), std::abs(fc * lg) + std::abs(gc * lf)});
      worst = std::max(worst, std::abs(lfg - fc * lg - gc * lf) / scale);
    }
    char txt[128];
    if (worst <= 1e-9) {
      std::snprintf(txt, sizeof txt,
                    "derivation law holds on sampled pairs (max residual %.3g)",
                    worst);
      rep.messages[i] = txt;
    } else {
      std::snprintf(txt, sizeof txt,
                    "derivation law fails on sampled pairs (residual %.3g)",
                    worst);
      rep.messages[i] = txt;
      rep.stage_ok[i] = false;
      if (rep.passed) rep.first_failure = i;
      rep.passed = false;
    }
  }
  return rep;
}

namespace {

bool read_number(const std::string& s, size_t& i, double& out) {
  size_t j = i;
  std::string buf;
  bool digits = false;
  if (j < s.size() && (s[j] == '+' || s[j] == '-')) buf += s[j++];
  while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) {
    buf += s[j++];
    digits = true;
  }
  if (j < s.size() && s[j] == '.') {
    buf += s[j++];
    while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) {
      buf += s[j++];
      digits = true;
    }
  }
  if (!digits) return false;
  if (j < s.size() && (s[j] == 'e' || s[j] == 'E')) {
    size_t k = j + 1;
    std::string ebuf(1, s[j]);
    if (k < s.size() && (s[k] == '+' || s[k] == '-')) ebuf += s[k++];
    bool edig = false;
    while (k < s.size() && std::isdigit(static_cast<unsigned char>(s[k]))) {
      ebuf += s[k++];
      edig = true;
    }
    if (edig) {
      buf += ebuf;
      j = k;
    }
  }
  out = std::stod(buf);
  i = j;
  return true;
}

[[noreturn]] void bad_literal(const std::string& text) {
  throw ConfigError("bad complex literal: '" + text + "'");
}

}  // namespace

cplx parse_complex(const std::string& text) {
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
  if (s.empty()) bad_literal(text);

  size_t i = 0;
  double first = 0.0;
  const bool has_first = read_number(s, i, first);
  if (has_first && i == s.size()) return cplx(first, 0.0);
  if (has_first && i + 1 == s.size() && s[i] == 'i') return cplx(0.0, first);
  if (!has_first) {
    double sign = 1.0;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
      if (s[i] == '-') sign = -1.0;
      ++i;
    }
    if (i + 1 == s.size() && s[i] == 'i') return cplx(0.0, sign);
    bad_literal(text);
  }
  if (i >= s.size() || (s[i] != '+' && s[i] != '-')) bad_literal(text);
  double second;
  if (!read_number(s, i, second)) {
    second = s[i] == '-' ? -1.0 : 1.0;
    ++i;
  }
  if (i + 1 == s.size() && s[i] == 'i') return cplx(first, second);
  bad_literal(text);
}

std::string format_complex(cplx z) {
  // std::to_chars gives the shortest text that parses back exactly and
  // ignores the process locale, so formatted values are stable everywhere
  const auto num = [](double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
  };
  if (z.imag() == 0.0) return num(z.real());
  if (z.real() == 0.0) return num(z.imag()) + "i";
  std::string s = num(z.real());
  if (z.imag() > 0.0 || std::isnan(z.imag())) s += '+';
  return s + num(z.imag()) + "i";
}

ProjectiveValue parse_projective(const std::string& text) {
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
  if (s == "inf" || s == "Inf" || s == "INF")
    return ProjectiveValue::infinity();
  return ProjectiveValue::finite(parse_complex(text));
}

std::string format_projective(const ProjectiveValue& p) {
  if (!p.is_valid()) throw ConfigError("projective coordinate (0,0) is invalid");
  if (p.is_infinite()) return "inf";
  return format_complex(p.value());
}

nlohmann::json chain_to_json(const GamelinChain& chain) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& s : chain.stages()) {
    nlohmann::json rec;
    if (s.kind == Constraint::Kind::TwoPoint) {
      rec["type"] = "two_point";
      rec["a"] = format_complex(s.a);
      rec["b"] = format_complex(s.b);
    } else {
      rec["type"] = "derivation";
      rec["c"] = format_complex(s.c);
      rec["order"] = s.order;
    }
    arr.push_back(std::move(rec));
  }
  return arr;
}

namespace {

cplx complex_from_json(const nlohmann::json& j, const char* field) {
  if (j.is_number()) return cplx(j.get<double>(), 0.0);
  if (j.is_string()) return parse_complex(j.get<std::string>());
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return cplx(j[0].get<double>(), j[1].get<double>());
  throw ConfigError(std::string("field '") + field +
                    "' must be a number, a complex string, or [re, im]");
}

}  // namespace

GamelinChain chain_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw ConfigError("chain must be a list of records");
  if (j.empty()) throw ConfigError("chain must have at least one stage");
  std::vector<Constraint> stages;
  stages.reserve(j.size());
  for (size_t i = 0; i < j.size(); ++i) {
    const auto& rec = j[i];
    const std::string where = "chain[" + std::to_string(i) + "]";
    if (!rec.is_object() || !rec.contains("type") || !rec["type"].is_string())
      throw ConfigError(where + ": record needs a string 'type'");
    const std::string type = rec["type"].get<std::string>();
    if (type == "two_point") {
      if (!rec.contains("a") || !rec.contains("b"))
        throw ConfigError(where + ": two_point needs fields 'a' and 'b'");
      stages.push_back(Constraint::two_point(complex_from_json(rec["a"], "a"),
                                             complex_from_json(rec["b"], "b")));
    } else if (type == "derivation") {
      if (!rec.contains("c") || !rec.contains("order"))
        throw ConfigError(where + ": derivation needs fields 'c' and 'order'");
      if (!rec["order"].is_number_integer())
        throw ConfigError(where + ": 'order' must be an integer");
      stages.push_back(Constraint::derivation(complex_from_json(rec["c"], "c"),
                                              rec["order"].get<int>()));
    } else {
      throw ConfigError(where + ": unknown constraint type '" + type + "'");
    }
  }
  return GamelinChain(std::move(stages));
}

}  // namespace hardy
