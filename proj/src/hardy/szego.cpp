#include "hardy/szego.hpp"

#include <Eigen/Cholesky>
#include <Eigen/SVD>
#include <cmath>

#include "hardy/errors.hpp"
#include "hardy/kernel.hpp"

namespace hardy {

namespace {

// basis exponents for degree-d truncations: 0..d on the disk, -d..d on the
// annulus. Annulus monomials are prescaled to unit norm against the basepoint
// measure; without this the normal equations carry a q^{-2d} diagonal spread
// and lose the minimum at large degrees.
void degree_layout(const DomainSpec& dom, int degree, std::vector<int>& exps,
                   Eigen::VectorXd& scales) {
  exps.clear();
  const int lo = dom.kind() == DomainKind::Disk ? 0 : -degree;
  for (int k = lo; k <= degree; ++k) exps.push_back(k);
  scales.resize(static_cast<int>(exps.size()));
  if (dom.kind() == DomainKind::Disk) {
    scales.setOnes();
    return;
  }
  double alpha, beta;
  dom.pair_response(0, alpha, beta);
  for (int j = 0; j < scales.size(); ++j)
    scales[j] =
        1.0 / std::sqrt(alpha + beta * std::pow(dom.q(), 2.0 * exps[j]));
}

}  // namespace

LogRhoDecomposition decompose_log_rho(const DomainSpec& dom,
                                      const BoundaryFunction& rho) {
  const BoundaryFunction lr = boundary_log(dom, rho);
  const int m = dom.truncation();

  LogRhoDecomposition dec;
  dec.c_rho = pair_with_m(dom, lr).real();

  if (dom.kind() == DomainKind::Disk) {
    Eigen::VectorXcd gc = Eigen::VectorXcd::Zero(m + 1);
    for (int k = 0; k <= m; ++k) gc[k] = lr.coeff(0, k);
    dec.gamma = LaurentSeries(0, gc);
    dec.zeta = BoundaryFunction(1, m);
    for (int k = -m; k < 0; ++k) dec.zeta.at(0, k) = lr.coeff(0, k);
    dec.n = Eigen::VectorXd();
  } else {
    // columns: scaled monomials A_k = s_k z^k, conjugated basepoint-vanishing
    // combinations C_k = conj(A_k - A_k(x0)) for k != 0, and the (normalized)
    // N density at the same band so the union spans the band-m boundary space
    // exactly
    std::vector<int> exps;
    Eigen::VectorXd scales;
    degree_layout(dom, m, exps, scales);
    const int na = static_cast<int>(exps.size());  // 2m+1 analytic columns

    Eigen::VectorXd at_x0(na);
    for (int j = 0; j < na; ++j)
      at_x0[j] = scales[j] * std::pow(dom.x0(), exps[j]);

    std::vector<BoundaryFunction> cols;
    for (int j = 0; j < na; ++j)
      cols.push_back(LaurentSeries::monomial(exps[j], scales[j])
                         .boundary_values(dom));
    for (int j = 0; j < na; ++j) {
      if (exps[j] == 0) continue;
      const auto h = LaurentSeries::monomial(exps[j], scales[j])
                         .plus(LaurentSeries::constant(-at_x0[j]));
      cols.push_back(h.boundary_values(dom).conjugated());
    }
    const BoundaryFunction lam = dom.n_basis_density(m);
    const double lam_scale =
        1.0 / std::sqrt(pair_with_m(dom, lam.product(lam)).real());
    cols.push_back(lam.scaled(lam_scale));
    const int n = static_cast<int>(cols.size());

    // normal-equation matrix gram(i, j) = <col_j, col_i>. The monomial
    // blocks assemble from closed forms: with a_i = A_i(x0) the analytic and
    // co-analytic families are exactly orthogonal, since
    // <A_i, conj(A_j - a_j)> = (A_i (A_j - a_j))(x0) = 0, and
    // <conj(A_j - a_j), conj(A_i - a_i)> = conj(<A_j, A_i>) - a_i a_j
    const Eigen::MatrixXcd table = monomial_pair_table(
        dom, BoundaryFunction::constant(dom, 1.0), exps, scales);
    Eigen::MatrixXcd gram = Eigen::MatrixXcd::Zero(n, n);
    gram.topLeftCorner(na, na) = table.transpose();
    {
      int ci = na;
      for (int i = 0; i < na; ++i) {
        if (exps[i] == 0) continue;
        int cj = na;
        for (int j = 0; j < na; ++j) {
          if (exps[j] == 0) continue;
          gram(ci, cj) = table(i, j) - at_x0[i] * at_x0[j];
          ++cj;
        }
        ++ci;
      }
    }
    for (int i = 0; i < n - 1; ++i) {
      gram(n - 1, i) =
          pair_with_m(dom, cols[i].product(cols[n - 1].conjugated()));
      gram(i, n - 1) = std::conj(gram(n - 1, i));
    }
    gram(n - 1, n - 1) = 1.0;  // the N column is normalized

    Eigen::VectorXcd rhs(n);
    for (int i = 0; i < n; ++i)
      rhs[i] = pair_with_m(dom, lr.product(cols[i].conjugated()));
    const Eigen::VectorXcd x = gram.ldlt().solve(rhs);

    Eigen::VectorXcd gc = Eigen::VectorXcd::Zero(2 * m + 1);
    for (int j = 0; j < na; ++j) gc[exps[j] + m] = x[j] * scales[j];
    dec.gamma = LaurentSeries(-m, gc);
    dec.zeta = BoundaryFunction(2, m);
    for (int i = na; i < n - 1; ++i)
      dec.zeta = dec.zeta.plus(cols[i].scaled(x[i]));
    dec.n = Eigen::VectorXd(1);
    dec.n[0] = x[n - 1].real() * lam_scale;
  }

  // reassemble at the quadrature nodes; the split must account for
  // everything the boundary data contains
  BoundaryFunction rec = dec.gamma.boundary_values(dom).plus(dec.zeta);
  if (dom.sigma() == 1)
    rec = rec.plus(dom.n_basis_density(m).scaled(dec.n[0]));
  double worst = 0.0;
  for (int c = 0; c < dom.components(); ++c) {
    const Eigen::VectorXcd a = rec.sample(c, dom.grid_size());
    const Eigen::VectorXcd b = lr.sample(c, dom.grid_size());
    worst = std::max(worst, (a - b).cwiseAbs().maxCoeff());
  }
  dec.residual = worst;
  if (worst > 1e-6)
    throw TruncationError(
        "log-density split leaves a residual above 1e-6; raise the "
        "truncation");
  return dec;
}

DeltaPoint omega_from_gamma(const DomainSpec& dom, const LaurentSeries& gamma,
                            const GamelinChain& chain) {
  bool needs_series = false;
  for (int i = 0; i < chain.size(); ++i)
    if (chain.stage(i).kind == Constraint::Kind::Derivation)
      needs_series = true;
  LaurentSeries eg;
  if (needs_series)
    eg = exp_analytic(dom, gamma, 2 * dom.truncation());

  DeltaPoint d;
  for (int i = 0; i < chain.size(); ++i) {
    const Constraint& s = chain.stage(i);
    if (s.kind == Constraint::Kind::TwoPoint) {
      d.push_back(ProjectiveValue::finite(
          std::exp(gamma.evaluate(dom, s.a) - gamma.evaluate(dom, s.b))));
    } else {
      const cplx u = std::exp(gamma.evaluate(dom, s.c));
      cplx v = eg.evaluate(dom, s.c, s.order);
      // |u| >= exp(-max|gamma|) is never small, so a derivative this far
      // below it is a rounding remnant of an exact zero; land exactly at
      // infinity so downstream projective comparisons see the clean point
      if (std::abs(v) < 1e-12 * std::abs(u)) v = 0.0;
      d.push_back(ProjectiveValue{u, v}.normalized());
    }
  }
  return d;
}

SzegoSides szego_rhs(const DomainSpec& dom, const BoundaryFunction& rho,
                     const GamelinChain& chain) {
  const LogRhoDecomposition dec = decompose_log_rho(dom, rho);
  SzegoSides out;
  out.c_rho = dec.c_rho;
  out.n = dec.n;
  out.omega = omega_from_gamma(dom, dec.gamma, chain);
  const WeightSpec w = dom.sigma() == 0 ? WeightSpec::trivial(dom)
                                        : WeightSpec::exp_n(dom, dec.n);
  const ConstrainedSpace space =
      build_constrained_space(dom, w, chain, out.omega);
  out.rhs = std::exp(dec.c_rho) / kernel_norm_at_basepoint(space);
  return out;
}

double szego_lhs_bruteforce(const DomainSpec& dom, const BoundaryFunction& rho,
                            const GamelinChain& chain, int degree,
                            bool* warned) {
  if (warned) *warned = false;
  if (degree < 1) throw ConfigError("extremal basis degree must be >= 1");

  std::vector<int> exps;
  Eigen::VectorXd scales;
  degree_layout(dom, degree, exps, scales);
  const int n = static_cast<int>(exps.size());
  int idx0 = -1;
  for (int j = 0; j < n; ++j)
    if (exps[j] == 0) idx0 = j;

  // feasible directions: chain conditions at the identity parameter plus
  // vanishing at the basepoint
  Eigen::MatrixXcd rows(chain.size() + 1, n);
  for (int j = 0; j < n; ++j) {
    for (int r = 0; r < chain.size(); ++r)
      rows(r, j) = scales[j] * condition_on_monomial(dom, chain.stage(r), exps[j]);
    const double x0 = dom.kind() == DomainKind::Disk ? 0.0 : dom.x0();
    rows(chain.size(), j) =
        scales[j] * LaurentSeries::monomial(exps[j]).evaluate(dom, x0);
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(rows, Eigen::ComputeFullV);
  int rank = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()[i] > svd.singularValues()[0] * 1e-12) ++rank;
  const Eigen::MatrixXcd basis =
      svd.matrixV().rightCols(n - rank);

  const Eigen::MatrixXcd table = monomial_pair_table(dom, rho, exps, scales);
  const double norm1 = table(idx0, idx0).real();  // rho-mass of the constant 1
  if (basis.cols() == 0) return norm1;

  const Eigen::MatrixXcd gram =
      basis.adjoint() * table.transpose() * basis;
  const Eigen::VectorXcd lin = basis.adjoint() * table.row(idx0).transpose();

  Eigen::VectorXcd x;
  Eigen::LLT<Eigen::MatrixXcd> llt(gram);
  if (llt.info() == Eigen::Success) {
    x = llt.solve(lin);
  } else {
    if (warned) *warned = true;
    const double ridge = 1e-12 * gram.real().trace() / gram.rows();
    Eigen::MatrixXcd reg = gram;
    reg.diagonal().array() += ridge;
    x = reg.ldlt().solve(lin);
  }

  const double val = norm1 - 2.0 * (lin.adjoint() * x)(0).real() +
                     (x.adjoint() * gram * x)(0).real();
  return std::max(val, 0.0);
}

NeilConstants neil_constants(const DomainSpec& dom,
                             const BoundaryFunction& rho) {
  if (dom.kind() != DomainKind::Disk)
    throw UnsupportedError("the degree-one reference constants are disk-only");
  if (!rho.is_real()) throw DomainError("density must be real");
  NeilConstants out;
  out.c_rho = pair_with_m(dom, boundary_log(dom, rho)).real();
  out.lambda = std::exp(out.c_rho) * rho.coeff(0, 1);
  const double s = 1.0 / std::sqrt(1.0 + std::norm(out.lambda));
  out.sigma1 = s;
  out.sigma2 = s * out.lambda;
  return out;
}

SzegoReport szego_schedule(const DomainSpec& dom, const BoundaryFunction& rho,
                           const GamelinChain& chain,
                           const std::vector<int>& schedule) {
  if (schedule.empty()) throw ConfigError("degree schedule must not be empty");
  for (size_t i = 1; i < schedule.size(); ++i)
    if (schedule[i] <= schedule[i - 1])
      throw ConfigError("degree schedule must be strictly increasing");

  const int deep = schedule.back();
  const DomainSpec dom_deep = dom.with_truncation(std::max(deep, dom.truncation()));

  SzegoReport rep;
  const SzegoSides sides = szego_rhs(dom_deep, rho, chain);
  rep.c_rho = sides.c_rho;
  rep.n = sides.n;
  rep.omega = sides.omega;
  rep.rhs = sides.rhs;
  rep.basis_degree = deep;

  for (int d : schedule) {
    bool warn = false;
    const double lhs = szego_lhs_bruteforce(dom_deep, rho, chain, d, &warn);
    rep.lhs_warned = rep.lhs_warned || warn;
    rep.trace.emplace_back(d, std::abs(lhs - rep.rhs));
    rep.lhs = lhs;
  }
  rep.gap = std::abs(rep.lhs - rep.rhs);
  return rep;
}

}  // namespace hardy
