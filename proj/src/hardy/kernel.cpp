#include "hardy/kernel.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>
#include <cstdio>

#include "hardy/errors.hpp"

namespace hardy {

namespace {

// exponent layout: the disk stacks 0..M; the annulus interleaves
// 0, -1, 1, -2, 2, ... so that every prefix is a balanced Laurent family
std::vector<int> exponent_layout(const DomainSpec& dom) {
  const int m = dom.truncation();
  std::vector<int> exps;
  if (dom.kind() == DomainKind::Disk) {
    for (int k = 0; k <= m; ++k) exps.push_back(k);
  } else {
    exps.push_back(0);
    for (int k = 1; k <= m; ++k) {
      exps.push_back(-k);
      exps.push_back(k);
    }
  }
  return exps;
}

// cross response R_c(delta) = sum_k resp_c(k) w_c(k - delta): the pairing
// of e^{i delta theta} times the weight density against the basepoint's
// representing measure, per circle
Eigen::MatrixXcd cross_response(const DomainSpec& dom,
                                const BoundaryFunction& density, int span) {
  const int wband = density.band();
  Eigen::MatrixXcd r(dom.components(), 2 * span + 1);
  for (int c = 0; c < dom.components(); ++c)
    for (int delta = -span; delta <= span; ++delta) {
      cplx acc = 0.0;
      for (int l = -wband; l <= wband; ++l) {
        double a, b;
        dom.pair_response(delta + l, a, b);
        acc += (c == 0 ? a : b) * density.coeff(c, l);
      }
      r(c, delta + span) = acc;
    }
  return r;
}

}  // namespace

Eigen::VectorXd KernelRep::monomial_amplitudes() const {
  Eigen::VectorXd amps(dim());
  for (int j = 0; j < dim(); ++j)
    amps[j] = scales_[j] * std::pow(r0_, -exps_[j]);
  return amps;
}

Eigen::VectorXcd KernelRep::eval_vector(cplx z, int order) const {
  Eigen::VectorXcd v(dim());
  for (int j = 0; j < dim(); ++j) {
    const double amp = scales_[j] * std::pow(r0_, -exps_[j]);
    v[j] = LaurentSeries::monomial(exps_[j], amp).evaluate(dom_, z, order);
  }
  return v;
}

cplx KernelRep::kernel(cplx z, cplx w) const {
  const Eigen::VectorXcd vz = eval_vector(z), vw = eval_vector(w);
  return (vz.transpose() * (b_ * vw.conjugate()))(0);
}

Eigen::VectorXcd KernelRep::kernel_column(cplx w) const {
  return b_ * eval_vector(w).conjugate();
}

LaurentSeries KernelRep::to_series(const Eigen::VectorXcd& coords) const {
  if (coords.size() != dim())
    throw ShapeError("coordinate vector does not match the basis size");
  int kmin = exps_[0], kmax = exps_[0];
  for (int k : exps_) {
    kmin = std::min(kmin, k);
    kmax = std::max(kmax, k);
  }
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(kmax - kmin + 1);
  for (int j = 0; j < dim(); ++j)
    c[exps_[j] - kmin] += coords[j] * scales_[j] * std::pow(r0_, -exps_[j]);
  return LaurentSeries(kmin, c);
}

cplx KernelRep::inner(const Eigen::VectorXcd& x, const Eigen::VectorXcd& y) const {
  return (y.adjoint() * (gram_ * x))(0);
}

KernelRep szego_kernel(const DomainSpec& dom, const WeightSpec& w) {
  KernelRep k;
  k.dom_ = dom;
  k.exps_ = exponent_layout(dom);
  k.r0_ = dom.kind() == DomainKind::Disk ? 1.0 : dom.x0();
  const int n = static_cast<int>(k.exps_.size());

  const WeightSpec ww = w.resolve_on(dom);
  const int span = 2 * dom.truncation();
  const Eigen::MatrixXcd r = cross_response(dom, ww.density(), span);

  // squared norms of the prescaled monomials (z/r0)^k, then unit-scale them
  k.scales_.resize(n);
  for (int j = 0; j < n; ++j) {
    double n2 = 0.0;
    for (int c = 0; c < dom.components(); ++c) {
      const double rel = dom.component_radius(c) / k.r0_;
      n2 += std::pow(rel, 2 * k.exps_[j]) * r(c, span).real();
    }
    if (!(n2 > 0.0) || !std::isfinite(n2))
      throw WeightError("weight gives a non-positive monomial norm");
    k.scales_[j] = 1.0 / std::sqrt(n2);
  }

  Eigen::MatrixXcd gram(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      cplx acc = 0.0;
      for (int c = 0; c < dom.components(); ++c) {
        const double rel = dom.component_radius(c) / k.r0_;
        const double ti = k.scales_[i] * std::pow(rel, k.exps_[i]);
        const double tj = k.scales_[j] * std::pow(rel, k.exps_[j]);
        acc += ti * tj * r(c, k.exps_[j] - k.exps_[i] + span);
      }
      gram(i, j) = acc;
    }
  const double scale = gram.cwiseAbs().maxCoeff();
  if ((gram - gram.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw Error("gram lost Hermitian symmetry; weight data is inconsistent");
  gram = 0.5 * (gram + gram.adjoint()).eval();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(gram);
  const auto& lam = eig.eigenvalues();
  if (!(lam[0] > 0.0) || lam[n - 1] / lam[0] > 1e12)
    throw TruncationError(
        "gram condition number exceeds 1e12; the truncation cannot resolve "
        "this weight");
  k.gram_ = gram;
  k.b_ = eig.eigenvectors() * lam.cwiseInverse().asDiagonal() *
         eig.eigenvectors().adjoint();
  return k;
}

namespace {

Representer representer_from_lvec(const KernelRep& k,
                                  const Eigen::VectorXcd& lvec,
                                  std::string what) {
  Representer r;
  r.coeffs = k.kernel_matrix() * lvec.conjugate();
  r.norm2 = (lvec.transpose() * r.coeffs)(0).real();
  r.what = std::move(what);
  return r;
}

Eigen::VectorXcd stage_lvec(const KernelRep& k, const Constraint& stage,
                            const ProjectiveValue& t) {
  Eigen::VectorXcd first, second;
  if (stage.kind == Constraint::Kind::TwoPoint) {
    first = k.eval_vector(stage.a);
    second = k.eval_vector(stage.b);
  } else {
    first = k.eval_vector(stage.c);
    second = k.eval_vector(stage.c, stage.order);
  }
  // pin the pairing to f(a) - t f(b) exactly when t is finite; at infinity
  // only the second functional survives (scale is immaterial for downdates)
  if (t.is_infinite()) return second;
  return first - t.value() * second;
}

}  // namespace

Representer functional_representer(const KernelRep& k, cplx a) {
  if (!k.domain().is_interior(a))
    throw ConfigError("representer point must be strictly interior");
  char what[64];
  std::snprintf(what, sizeof what, "value at %s", format_complex(a).c_str());
  return representer_from_lvec(k, k.eval_vector(a), what);
}

Representer functional_representer(const KernelRep& k, cplx c, int order) {
  if (!k.domain().is_interior(c))
    throw ConfigError("representer point must be strictly interior");
  if (order < 0) throw ConfigError("derivative order must be >= 0");
  char what[64];
  std::snprintf(what, sizeof what, "derivative %d at %s", order,
                format_complex(c).c_str());
  return representer_from_lvec(k, k.eval_vector(c, order), what);
}

Representer functional_representer(const KernelRep& k, const Constraint& stage,
                                   const ProjectiveValue& t) {
  const cplx p = stage.kind == Constraint::Kind::TwoPoint ? stage.a : stage.c;
  const cplx q = stage.kind == Constraint::Kind::TwoPoint ? stage.b : stage.c;
  if (!k.domain().is_interior(p) || !k.domain().is_interior(q))
    throw ConfigError("representer point must be strictly interior");
  return representer_from_lvec(k, stage_lvec(k, stage, t),
                               "stage condition at " + format_projective(t));
}

KernelRep downdate(const KernelRep& k, const Representer& w) {
  if (!(w.norm2 > 1e-10))
    throw ConstraintError("degenerate constraint: representer norm^2 " +
                          std::to_string(w.norm2) + " for " + w.what);
  KernelRep out = k;
  out.b_ -= (w.coeffs * w.coeffs.adjoint()) / w.norm2;
  out.applied_.push_back(w);
  return out;
}

ConstrainedSpace build_constrained_space(const DomainSpec& dom,
                                         const WeightSpec& w,
                                         const GamelinChain& chain,
                                         const DeltaPoint& at) {
  if (static_cast<int>(at.size()) != chain.size())
    throw ShapeError("parameter has " + std::to_string(at.size()) +
                     " coordinates for a chain of length " +
                     std::to_string(chain.size()));
  const ChainValidation rep = validate_chain(dom, chain);
  if (!rep.passed)
    throw ConstraintError("chain stage " + std::to_string(rep.first_failure) +
                          " rejected: " + rep.messages[rep.first_failure]);

  ConstrainedSpace space;
  space.dom_ = dom;
  space.chain_ = chain;
  space.at_ = at;
  space.weight_ = w.resolve_on(dom);

  KernelRep k = szego_kernel(dom, w);
  const int n = k.dim();
  Eigen::MatrixXcd cond(chain.size(), n);
  for (int i = 0; i < chain.size(); ++i) {
    const Eigen::VectorXcd lvec = stage_lvec(k, chain.stage(i), at[i]);
    cond.row(i) = lvec.transpose();
    k = downdate(k, functional_representer(k, chain.stage(i), at[i]));
  }

  // independent construction: null space of the stage conditions, then
  // Gram-Schmidt under the weighted metric
  Eigen::MatrixXcd null_basis;
  if (chain.empty()) {
    null_basis = Eigen::MatrixXcd::Identity(n, n);
  } else {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(
        cond, Eigen::ComputeFullU | Eigen::ComputeFullV);
    int rank = 0;
    for (int j = 0; j < svd.singularValues().size(); ++j)
      if (svd.singularValues()[j] > svd.singularValues()[0] * 1e-12) ++rank;
    if (n - rank < 1)
      throw ConstraintError("constraints exhaust the truncated space");
    null_basis = svd.matrixV().rightCols(n - rank);
  }

  Eigen::MatrixXcd on(n, null_basis.cols());
  for (int j = 0; j < null_basis.cols(); ++j) {
    Eigen::VectorXcd x = null_basis.col(j);
    for (int pass = 0; pass < 2; ++pass)
      for (int i = 0; i < j; ++i) x -= k.inner(x, on.col(i)) * on.col(i);
    const double norm = std::sqrt(std::abs(k.inner(x, x)));
    if (!(norm > 1e-10))
      throw TruncationError(
          "orthonormalization collapsed; truncation too aggressive");
    on.col(j) = x / norm;
  }
  space.kernel_ = std::move(k);
  space.on_ = std::move(on);
  return space;
}

LaurentSeries ConstrainedSpace::column_series(int j) const {
  return kernel_.to_series(on_.col(j));
}

cplx ConstrainedSpace::kernel_via_basis(cplx z, cplx w) const {
  const Eigen::VectorXcd vz = kernel_.eval_vector(z),
                         vw = kernel_.eval_vector(w);
  cplx acc = 0.0;
  for (int j = 0; j < on_.cols(); ++j) {
    const cplx ez = (vz.transpose() * on_.col(j))(0);
    const cplx ew = (vw.transpose() * on_.col(j))(0);
    acc += ez * std::conj(ew);
  }
  return acc;
}

double kernel_norm_at_basepoint(const ConstrainedSpace& space) {
  const double x0 = space.domain().x0();
  return space.kernel().kernel(x0, x0).real();
}

LaurentSeries blaschke_with_gamma_zeros(const GamelinChain& chain,
                                        const DomainSpec& dom) {
  if (dom.kind() != DomainKind::Disk)
    throw UnsupportedError(
        "inner functions with prescribed zeros are built on the disk only");
  std::vector<std::pair<cplx, int>> factors;  // (zero, multiplicity)
  double maxp = 0.0;
  for (const auto& s : chain.stages()) {
    if (s.kind == Constraint::Kind::TwoPoint) {
      factors.push_back({s.a, 1});
      factors.push_back({s.b, 1});
    } else {
      factors.push_back({s.c, s.order + 1});
    }
  }
  for (const auto& f : factors) {
    if (!dom.is_interior(f.first))
      throw ConfigError("chain points must be strictly interior");
    maxp = std::max(maxp, std::abs(f.first));
  }

  int band = dom.truncation();
  if (maxp > 0.0)
    band = std::max(band,
                    static_cast<int>(std::ceil(std::log(1e-14) / std::log(maxp))));
  band = std::min(band, 4096);

  LaurentSeries prod = LaurentSeries::constant(1.0);
  for (const auto& [p, mult] : factors)
    for (int rep = 0; rep < mult; ++rep) {
      // (z - p) * sum_k conj(p)^k z^k, the elementary factor's series
      Eigen::VectorXcd geo(band + 1);
      cplx pw = 1.0;
      for (int k = 0; k <= band; ++k) {
        geo[k] = pw;
        pw *= std::conj(p);
      }
      const LaurentSeries denom_inv(0, geo);
      const LaurentSeries numer =
          LaurentSeries::monomial(1).plus(LaurentSeries::constant(-p));
      prod = prod.product(numer.product(denom_inv)).truncated(0, band);
    }
  return prod;
}

}  // namespace hardy
