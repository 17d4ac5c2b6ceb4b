#pragma once

#include <string>
#include <vector>

#include "hardy/boundary.hpp"
#include "hardy/domain.hpp"
#include "json.hpp"

namespace hardy {

// One stage of a constraint chain: either a two-point identification
// f(a) ~ f(b) or an order-n derivation condition at c.
struct Constraint {
  enum class Kind { TwoPoint, Derivation };
  Kind kind = Kind::TwoPoint;
  cplx a{}, b{};  // TwoPoint
  cplx c{};       // Derivation
  int order = 0;  // Derivation, >= 1

  static Constraint two_point(cplx a, cplx b);
  static Constraint derivation(cplx c, int order);
};

// Ordered list of constraint stages. Each stage refines the algebra cut out
// by the previous ones. An empty chain means "no constraints" and is valid
// for internal use; the serialization boundary requires at least one stage.
class GamelinChain {
 public:
  GamelinChain() = default;
  explicit GamelinChain(std::vector<Constraint> stages)
      : stages_(std::move(stages)) {}

  int size() const { return static_cast<int>(stages_.size()); }
  bool empty() const { return stages_.empty(); }
  const std::vector<Constraint>& stages() const { return stages_; }
  const Constraint& stage(int i) const { return stages_.at(i); }
  // number of evaluation functionals rho uses: two per stage
  int gamma_count() const { return 2 * size(); }

 private:
  std::vector<Constraint> stages_;
};

// Point of the Riemann sphere stored homogeneously: t = u/v, v = 0 <=> inf.
// (0,0) is invalid everywhere.
struct ProjectiveValue {
  cplx u{1.0, 0.0};
  cplx v{1.0, 0.0};

  static ProjectiveValue finite(cplx t) { return {t, cplx(1.0)}; }
  static ProjectiveValue infinity() { return {cplx(1.0), cplx(0.0)}; }

  bool is_infinite() const { return v == cplx(0.0); }
  bool is_valid() const { return u != cplx(0.0) || v != cplx(0.0); }
  // finite value u/v; throws EvaluationError at infinity
  cplx value() const;
  // scale both components so the larger-modulus one becomes exactly 1
  ProjectiveValue normalized() const;
  // chordal closeness on the sphere: |u v' - v u'| / (|(u,v)| |(u',v')|)
  static double distance(const ProjectiveValue& p, const ProjectiveValue& q);
  static bool approx_eq(const ProjectiveValue& p, const ProjectiveValue& q,
                        double tol = 1e-12);
};

// Element of the parameter space: one sphere coordinate per chain stage.
using DeltaPoint = std::vector<ProjectiveValue>;

// identity element: 1 at two-point stages, inf at derivation stages
DeltaPoint delta_gamma(const GamelinChain& chain);

// coordinatewise product: t*s at two-point stages, ts/(t+s) at derivation
// stages. Total: the two indeterminate corners resolve to 0 (two-point
// 0*inf and derivation 0 o 0, both realized by vanishing numerators).
DeltaPoint delta_product(const DeltaPoint& d, const DeltaPoint& e,
                         const GamelinChain& chain);

// coordinatewise inverse: 1/t at two-point stages, -t at derivation stages
DeltaPoint delta_inverse(const DeltaPoint& d, const GamelinChain& chain);

// stacked constrained values of f, two per stage in chain order:
// (f(a), f(b)) for a two-point stage, (f(c), f^(n)(c)) for a derivation stage
Eigen::VectorXcd gamma_eval(const DomainSpec& dom, const LaurentSeries& f,
                            const GamelinChain& chain);

// max over stages of |v_i * lhs_i - u_i * rhs_i| / (|u_i| + |v_i|) where
// (lhs, rhs) is the stage's pair from gamma_eval; zero iff f meets every
// constraint at D
double constraint_residual(const DomainSpec& dom, const LaurentSeries& f,
                           const GamelinChain& chain, const DeltaPoint& d);

struct ChainValidation {
  bool passed = true;
  int first_failure = -1;  // stage index, -1 if none
  std::vector<bool> stage_ok;
  std::vector<std::string> messages;  // one per stage
};

// Structural checks (interior points) throw ConfigError. Each derivation
// stage is then probed numerically: random pairs f, g drawn from the null
// space of the earlier stages' conditions must satisfy the Leibniz identity
// for h -> h^(n)(c) to 1e-9. Failures land in the report, not exceptions.
ChainValidation validate_chain(const DomainSpec& dom, const GamelinChain& chain,
                               std::uint64_t seed = 20260825ull);

// stage condition at the identity parameter applied to the monomial z^k:
// f(a) - f(b) for a two-point stage, f^(n)(c) for a derivation stage
cplx condition_on_monomial(const DomainSpec& dom, const Constraint& s, int k);

// "1.5", "-0.3+0.25i", "2i", "i", "-i"; ConfigError on anything else
cplx parse_complex(const std::string& text);
std::string format_complex(cplx z);

// like parse_complex but also accepts "inf"
ProjectiveValue parse_projective(const std::string& text);
std::string format_projective(const ProjectiveValue& p);

// records {"type": "two_point", "a": ..., "b": ...} and
// {"type": "derivation", "c": ..., "order": n}; points are complex strings
nlohmann::json chain_to_json(const GamelinChain& chain);
GamelinChain chain_from_json(const nlohmann::json& j);

}  // namespace hardy
