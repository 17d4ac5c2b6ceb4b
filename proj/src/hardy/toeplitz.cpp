#include "hardy/toeplitz.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "hardy/errors.hpp"

namespace hardy {

namespace {

// monomial layout for the approximation basis: 0..d on the disk, -d..d on
// the annulus, scaled to unit norm against the basepoint measure so the
// least-squares steps stay conditioned at large degrees
void approx_layout(const DomainSpec& dom, int degree, std::vector<int>& exps,
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

// orthonormal columns spanning the chain conditions' null space over the
// scaled monomials, at the identity parameter
Eigen::MatrixXcd identity_null_basis(const DomainSpec& dom,
                                     const GamelinChain& chain,
                                     const std::vector<int>& exps,
                                     const Eigen::VectorXd& scales) {
  const int n = static_cast<int>(exps.size());
  if (chain.empty()) return Eigen::MatrixXcd::Identity(n, n);
  Eigen::MatrixXcd rows(chain.size(), n);
  for (int r = 0; r < chain.size(); ++r)
    for (int j = 0; j < n; ++j)
      rows(r, j) =
          scales[j] * condition_on_monomial(dom, chain.stage(r), exps[j]);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(rows, Eigen::ComputeFullV);
  int rank = 0;
  for (int j = 0; j < svd.singularValues().size(); ++j)
    if (svd.singularValues()[j] > svd.singularValues()[0] * 1e-12) ++rank;
  if (n - rank < 1)
    throw ConstraintError("constraints exhaust the approximation basis");
  return svd.matrixV().rightCols(n - rank);
}

void check_compatible(const ConstrainedSpace& a, const ConstrainedSpace& b) {
  const DomainSpec &da = a.domain(), &db = b.domain();
  if (da.kind() != db.kind() || da.q() != db.q() || da.x0() != db.x0())
    throw ShapeError("spaces live on different domains");
  const WeightSpec &wa = a.weight(), &wb = b.weight();
  if (wa.kind() != wb.kind() || wa.exponents().size() != wb.exponents().size())
    throw ShapeError("spaces carry different weights");
  for (int i = 0; i < wa.exponents().size(); ++i)
    if (wa.exponents()[i] != wb.exponents()[i])
      throw ShapeError("spaces carry different weights");
}

}  // namespace

ToeplitzMatrix toeplitz_matrix(const BoundaryFunction& phi,
                               const ConstrainedSpace& space) {
  const DomainSpec& dom = space.domain();
  if (phi.components() != dom.components())
    throw ShapeError("symbol has the wrong number of boundary components");
  const KernelRep& k = space.kernel();
  const BoundaryFunction dens = phi.product(space.weight().density());
  const Eigen::MatrixXcd table = monomial_pair_table(
      dom, dens, k.exponents(), k.monomial_amplitudes());
  ToeplitzMatrix out;
  out.mat = space.on_basis().adjoint() * table.transpose() * space.on_basis();
  out.symbol = phi;
  out.weight = space.weight();
  out.at = space.at();
  out.truncation = dom.truncation();
  return out;
}

Eigen::MatrixXcd toeplitz_block(const BoundaryFunction& phi,
                                const ConstrainedSpace& rows,
                                const ConstrainedSpace& cols) {
  check_compatible(rows, cols);
  const DomainSpec& dom = rows.domain();
  if (phi.components() != dom.components())
    throw ShapeError("symbol has the wrong number of boundary components");
  const KernelRep &kr = rows.kernel(), &kc = cols.kernel();
  const BoundaryFunction dens = phi.product(rows.weight().density());
  // entry (q, p) of the table pairs column monomial q against row monomial p
  const Eigen::MatrixXcd table = monomial_pair_table(
      dom, dens, kc.exponents(), kc.monomial_amplitudes(), kr.exponents(),
      kr.monomial_amplitudes());
  return rows.on_basis().adjoint() * table.transpose() * cols.on_basis();
}

double min_singular_value(const ToeplitzMatrix& t) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(t.mat);
  const auto& sv = svd.singularValues();
  return sv.size() == 0 ? 0.0 : sv[sv.size() - 1];
}

double operator_norm(const ToeplitzMatrix& t) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(t.mat);
  const auto& sv = svd.singularValues();
  return sv.size() == 0 ? 0.0 : sv[0];
}

double distance_to_algebra(const DomainSpec& dom, const BoundaryFunction& phi,
                           const GamelinChain& chain, int degree,
                           bool* stalled) {
  if (stalled) *stalled = false;
  if (degree < 0) throw ConfigError("approximation degree must be >= 0");

  std::vector<int> exps;
  Eigen::VectorXd scales;
  approx_layout(dom, degree, exps, scales);
  const Eigen::MatrixXcd nb = identity_null_basis(dom, chain, exps, scales);
  const int dim = static_cast<int>(nb.cols());
  const int lo = exps.front();

  const int nq = dom.grid_size();
  const int total = dom.components() * nq;
  Eigen::MatrixXcd a(total, dim);
  for (int j = 0; j < dim; ++j) {
    Eigen::VectorXcd coef =
        Eigen::VectorXcd::Zero(exps.back() - lo + 1);
    for (int p = 0; p < static_cast<int>(exps.size()); ++p)
      coef[exps[p] - lo] += nb(p, j) * scales[p];
    const BoundaryFunction vals =
        LaurentSeries(lo, coef).boundary_values(dom);
    for (int c = 0; c < dom.components(); ++c)
      a.block(c * nq, j, nq, 1) = vals.sample(c, nq);
  }
  Eigen::VectorXcd target(total);
  for (int c = 0; c < dom.components(); ++c)
    target.segment(c * nq, nq) = phi.sample(c, nq);

  // Lawson's rule: weighted least squares with weights multiplied by the
  // pointwise residual each round drives the fit toward the minimax one
  Eigen::VectorXd w = Eigen::VectorXd::Constant(total, 1.0 / total);
  double best = target.cwiseAbs().maxCoeff();
  double prev = -1.0;
  bool settled = dim == 0;
  for (int iter = 0; iter < 500 && !settled; ++iter) {
    const Eigen::VectorXcd sw = w.cwiseSqrt().cast<cplx>();
    const Eigen::MatrixXcd aw = sw.asDiagonal() * a;
    const Eigen::VectorXcd tw = sw.asDiagonal() * target;
    const Eigen::VectorXcd c = aw.householderQr().solve(tw);
    const Eigen::VectorXd e = (target - a * c).cwiseAbs();
    const double worst = e.maxCoeff();
    best = std::min(best, worst);
    if (worst < 1e-14 ||
        (prev >= 0.0 && std::abs(worst - prev) <= 1e-6 * std::max(1.0, worst))) {
      settled = true;
      break;
    }
    prev = worst;
    w = w.cwiseProduct(e);
    const double sum = w.sum();
    if (!(sum > 0.0)) {
      settled = true;  // exact interpolation; nothing left to reweight
      break;
    }
    w /= sum;
  }
  if (!settled && stalled) *stalled = true;
  return best;
}

std::vector<ProjectiveValue> sphere_net(int count) {
  if (count < 2)
    throw ConfigError("sphere net needs at least the two poles");
  std::vector<ProjectiveValue> pts;
  pts.push_back(ProjectiveValue::finite(0.0));
  pts.push_back(ProjectiveValue::infinity());
  const int rest = count - 2;
  if (rest == 0) return pts;
  const int rings = (rest + 3) / 4;
  const int base = rest / rings, extra = rest % rings;
  for (int r = 0; r < rings; ++r) {
    const int on_ring = base + (r < extra ? 1 : 0);
    const double rad = std::tan(0.5 * M_PI * (r + 1) / (rings + 1));
    for (int j = 0; j < on_ring; ++j) {
      const double ang = 2.0 * M_PI * j / on_ring + 0.25 * M_PI * r;
      pts.push_back(ProjectiveValue::finite(std::polar(rad, ang)));
    }
  }
  return pts;
}

WidomScan widom_scan(const DomainSpec& dom, const BoundaryFunction& phi,
                     const GamelinChain& chain, const WidomGridSpec& spec) {
  if (spec.sigma_points < 1 || spec.delta_points < 2)
    throw ConfigError("grid needs >= 1 lattice point and >= 2 sphere points");
  if (!(spec.margin > 0.0) || spec.margin >= 0.5)
    throw ConfigError("verdict margin must lie in (0, 0.5)");
  const int nq = std::max(dom.grid_size(), 4 * phi.band() + 4);
  for (int c = 0; c < dom.components(); ++c) {
    const Eigen::VectorXcd v = phi.sample(c, nq);
    for (int j = 0; j < nq; ++j)
      if (std::abs(std::abs(v[j]) - 1.0) > 1e-8)
        throw ConfigError(
            "scan requires a unimodular symbol (||phi| - 1| < 1e-8 on the "
            "nodes)");
  }

  std::vector<Eigen::VectorXd> alphas;
  if (dom.sigma() == 0) {
    alphas.emplace_back(0);
  } else {
    // uniform lattice in [0,1)^sigma
    std::vector<int> idx(dom.sigma(), 0);
    for (;;) {
      Eigen::VectorXd alpha(dom.sigma());
      for (int d = 0; d < dom.sigma(); ++d)
        alpha[d] = static_cast<double>(idx[d]) / spec.sigma_points;
      alphas.push_back(alpha);
      int d = 0;
      while (d < dom.sigma() && ++idx[d] == spec.sigma_points) idx[d++] = 0;
      if (d == dom.sigma()) break;
    }
  }

  const std::vector<ProjectiveValue> net = sphere_net(spec.delta_points);
  std::vector<DeltaPoint> deltas;
  if (chain.empty()) {
    deltas.emplace_back();
  } else {
    std::vector<int> idx(chain.size(), 0);
    for (;;) {
      DeltaPoint at;
      for (int s = 0; s < chain.size(); ++s) at.push_back(net[idx[s]]);
      deltas.push_back(at);
      int s = 0;
      while (s < chain.size() &&
             ++idx[s] == static_cast<int>(net.size()))
        idx[s++] = 0;
      if (s == chain.size()) break;
    }
  }

  WidomScan scan;
  scan.min_sigma = std::numeric_limits<double>::infinity();
  for (const auto& alpha : alphas) {
    const WeightSpec w = dom.sigma() == 0 ? WeightSpec::trivial(dom)
                                          : WeightSpec::z_power(dom, alpha);
    for (const auto& at : deltas) {
      const ConstrainedSpace space = build_constrained_space(dom, w, chain, at);
      const ToeplitzMatrix t = toeplitz_matrix(phi, space);
      Eigen::JacobiSVD<Eigen::MatrixXcd> svd(t.mat);
      WidomGridPoint pt;
      pt.alpha = alpha;
      pt.at = at;
      const auto& sv = svd.singularValues();
      pt.sigma_min = sv[sv.size() - 1];
      pt.norm = sv[0];
      scan.min_sigma = std::min(scan.min_sigma, pt.sigma_min);
      scan.grid.push_back(std::move(pt));
    }
  }

  scan.distance = distance_to_algebra(dom, phi, chain, dom.truncation(),
                                      &scan.distance_stalled);

  const double d = spec.margin;
  const double gap_sigma = scan.min_sigma - d;        // > 0: looks invertible
  const double gap_dist = (1.0 - d) - scan.distance;  // > 0: looks invertible
  if (gap_sigma > 0.0 && gap_dist > 0.0) {
    scan.verdict = WidomVerdict::ConsistentInvertible;
    scan.margin = std::min(gap_sigma, gap_dist);
  } else if (gap_sigma < 0.0 && gap_dist <= 0.0) {
    scan.verdict = WidomVerdict::ConsistentNoninvertible;
    scan.margin = std::min(-gap_sigma, -gap_dist);
  } else {
    scan.verdict = WidomVerdict::Indeterminate;
    scan.margin = std::min(std::abs(gap_sigma), std::abs(gap_dist));
  }
  return scan;
}

const char* to_string(WidomVerdict v) {
  switch (v) {
    case WidomVerdict::ConsistentInvertible:
      return "consistent-invertible";
    case WidomVerdict::ConsistentNoninvertible:
      return "consistent-noninvertible";
    case WidomVerdict::Indeterminate:
      return "indeterminate";
  }
  return "indeterminate";
}

InvertibilityReport symbol_invertibility_check(const DomainSpec& dom,
                                               const LaurentSeries& psi,
                                               const GamelinChain& chain) {
  const double res = constraint_residual(dom, psi, chain, delta_gamma(chain));
  if (!(res < 1e-8))
    throw ConfigError(
        "symbol must satisfy the chain at the identity parameter (residual " +
        std::to_string(res) + ")");
  const int m = dom.truncation();
  if (psi.kmax() > m || psi.kmin() < (dom.kind() == DomainKind::Disk ? 0 : -m))
    throw ShapeError("symbol degree exceeds the truncation");

  InvertibilityReport report;
  // dense |psi| minimum over boundary nodes and interior rings
  const int nq = dom.grid_size();
  const double r_in = dom.kind() == DomainKind::Disk ? 0.0 : dom.q();
  double min_abs = std::numeric_limits<double>::infinity(), sup_abs = 0.0;
  for (int ring = 0; ring <= 10; ++ring) {
    const double r = r_in + (1.0 - r_in) * ring / 10.0;
    if (r == 0.0) {
      const double v = std::abs(psi.coeff(0));
      min_abs = std::min(min_abs, v);
      sup_abs = std::max(sup_abs, v);
      continue;
    }
    for (int j = 0; j < nq; ++j) {
      const cplx z = std::polar(r, 2.0 * M_PI * j / nq);
      // evaluate() rejects boundary points; sum the series directly
      cplx acc = 0.0;
      for (int k = psi.kmin(); k <= psi.kmax(); ++k)
        acc += psi.coeff(k) * std::pow(z, k);
      min_abs = std::min(min_abs, std::abs(acc));
      sup_abs = std::max(sup_abs, std::abs(acc));
    }
  }
  report.min_abs = min_abs;
  report.invertible = min_abs > 1e-8 * std::max(1.0, sup_abs);

  // sampled (alpha, D) cells: identity parameter plus the two equator points
  std::vector<DeltaPoint> cells;
  cells.push_back(delta_gamma(chain));
  if (!chain.empty()) {
    const auto net = sphere_net(4);
    for (int pick = 2; pick < 4; ++pick) {
      DeltaPoint at(chain.size(), net[pick]);
      cells.push_back(at);
    }
  }
  std::vector<WeightSpec> weights{WeightSpec::trivial(dom)};
  if (dom.sigma() > 0)
    weights.push_back(
        WeightSpec::z_power(dom, Eigen::VectorXd::Constant(dom.sigma(), 0.5)));

  const BoundaryFunction psi_b = psi.boundary_values(dom);
  const DomainSpec dom2 = dom.with_truncation(2 * m);

  if (report.invertible) {
    // the reciprocal's band is independent of the truncation: only psi's
    // degree must fit below the middle space. Grow the band until the
    // reconstruction tail passes the guard, so the tail does not leak into
    // the product residual.
    LaurentSeries inv;
    for (int band = 2 * m;; band *= 2) {
      try {
        inv = reciprocal_analytic(dom, psi, band);
        break;
      } catch (const TruncationError&) {
        if (band >= 64 * std::max(m, 1)) throw;
      }
    }
    const BoundaryFunction inv_b = inv.boundary_values(dom2);
    double worst = 0.0;
    for (const auto& w : weights)
      for (const auto& at : cells) {
        const ConstrainedSpace s1 = build_constrained_space(dom, w, chain, at);
        const ConstrainedSpace s2 =
            build_constrained_space(dom2, w.resolve_on(dom2), chain, at);
        const Eigen::MatrixXcd up = toeplitz_block(psi_b, s2, s1);
        const Eigen::MatrixXcd down = toeplitz_block(inv_b, s1, s2);
        const Eigen::MatrixXcd prod = down * up;
        worst = std::max(
            worst, (prod - Eigen::MatrixXcd::Identity(s1.dim(), s1.dim()))
                       .cwiseAbs()
                       .maxCoeff());
      }
    report.product_residual = worst;
  }

  for (const DomainSpec& d : {dom, dom2}) {
    const ConstrainedSpace s = build_constrained_space(
        d, WeightSpec::trivial(d), chain, delta_gamma(chain));
    report.sigma_trace.emplace_back(
        d.truncation(),
        min_singular_value(toeplitz_matrix(psi.boundary_values(d), s)));
  }
  return report;
}

}  // namespace hardy
