#include "hardy/boundary.hpp"

#include <algorithm>
#include <cmath>

namespace hardy {

namespace {

// e^{2 pi i j k / n} looked up exactly from a single table of n-th roots.
struct RootTable {
  explicit RootTable(int n) : n_(n), roots_(n) {
    for (int j = 0; j < n; ++j)
      roots_[j] = std::polar(1.0, 2.0 * M_PI * j / n);
  }
  cplx operator()(long long jk) const {
    long long r = jk % n_;
    if (r < 0) r += n_;
    return roots_[static_cast<size_t>(r)];
  }
  int n_;
  std::vector<cplx> roots_;
};

Eigen::VectorXcd dft_to_band(const Eigen::VectorXcd& vals, int band) {
  const int n = static_cast<int>(vals.size());
  const RootTable w(n);
  Eigen::VectorXcd c(2 * band + 1);
  for (int k = -band; k <= band; ++k) {
    cplx s = 0.0;
    for (int j = 0; j < n; ++j) s += vals[j] * w(-static_cast<long long>(j) * k);
    c[k + band] = s / static_cast<double>(n);
  }
  return c;
}

void symmetrize_real(BoundaryFunction& f) {
  for (int c = 0; c < f.components(); ++c)
    for (int k = 0; k <= f.band(); ++k) {
      const cplx a = f.coeff(c, k), b = f.coeff(c, -k);
      const cplx m = 0.5 * (a + std::conj(b));
      f.at(c, k) = m;
      f.at(c, -k) = std::conj(m);
    }
}

}  // namespace

BoundaryFunction::BoundaryFunction(int components, int band) : band_(band) {
  if (components < 1 || band < 0) throw ShapeError("bad boundary-function shape");
  comps_.assign(components, Eigen::VectorXcd::Zero(2 * band + 1));
}

BoundaryFunction BoundaryFunction::constant(const DomainSpec& dom, cplx value) {
  BoundaryFunction f(dom.components(), 0);
  for (int c = 0; c < f.components(); ++c) f.at(c, 0) = value;
  return f;
}

cplx BoundaryFunction::coeff(int comp, int k) const {
  if (std::abs(k) > band_) return 0.0;
  return comps_[comp][k + band_];
}

cplx& BoundaryFunction::at(int comp, int k) { return comps_[comp][k + band_]; }

BoundaryFunction BoundaryFunction::truncated(int band) const {
  BoundaryFunction g(components(), band);
  for (int c = 0; c < components(); ++c)
    for (int k = -std::min(band, band_); k <= std::min(band, band_); ++k)
      g.at(c, k) = coeff(c, k);
  return g;
}

BoundaryFunction BoundaryFunction::conjugated() const {
  BoundaryFunction g(components(), band_);
  for (int c = 0; c < components(); ++c)
    for (int k = -band_; k <= band_; ++k)
      g.at(c, k) = std::conj(coeff(c, -k));
  return g;
}

BoundaryFunction BoundaryFunction::product(const BoundaryFunction& g) const {
  if (components() != g.components())
    throw ShapeError("component mismatch in boundary product");
  BoundaryFunction h(components(), band_ + g.band());
  for (int c = 0; c < components(); ++c)
    for (int k1 = -band_; k1 <= band_; ++k1) {
      const cplx a = coeff(c, k1);
      if (a == 0.0) continue;
      for (int k2 = -g.band(); k2 <= g.band(); ++k2)
        h.at(c, k1 + k2) += a * g.coeff(c, k2);
    }
  return h;
}

BoundaryFunction BoundaryFunction::plus(const BoundaryFunction& g) const {
  if (components() != g.components())
    throw ShapeError("component mismatch in boundary sum");
  BoundaryFunction h(components(), std::max(band_, g.band()));
  for (int c = 0; c < components(); ++c)
    for (int k = -h.band(); k <= h.band(); ++k)
      h.at(c, k) = coeff(c, k) + g.coeff(c, k);
  return h;
}

BoundaryFunction BoundaryFunction::scaled(cplx s) const {
  BoundaryFunction h = *this;
  for (auto& v : h.comps_) v *= s;
  return h;
}

Eigen::VectorXcd BoundaryFunction::sample(int comp, int n_nodes) const {
  const RootTable w(n_nodes);
  Eigen::VectorXcd v(n_nodes);
  for (int j = 0; j < n_nodes; ++j) {
    cplx s = 0.0;
    for (int k = -band_; k <= band_; ++k)
      s += comps_[comp][k + band_] * w(static_cast<long long>(j) * k);
    v[j] = s;
  }
  return v;
}

double BoundaryFunction::max_abs(int n_nodes) const {
  double m = 0.0;
  for (int c = 0; c < components(); ++c)
    m = std::max(m, sample(c, n_nodes).cwiseAbs().maxCoeff());
  return m;
}

double BoundaryFunction::coeff_norm() const {
  double s = 0.0;
  for (const auto& v : comps_) s += v.squaredNorm();
  return std::sqrt(s);
}

bool BoundaryFunction::is_real(double tol) const {
  const double scale = std::max(1.0, coeff_norm());
  for (int c = 0; c < components(); ++c)
    for (int k = 0; k <= band_; ++k)
      if (std::abs(coeff(c, k) - std::conj(coeff(c, -k))) > tol * scale)
        return false;
  return true;
}

BoundaryFunction samples_to_coeffs(const DomainSpec& dom,
                                   const std::vector<Eigen::VectorXcd>& values) {
  if (static_cast<int>(values.size()) != dom.components())
    throw ShapeError("expected one sample vector per boundary circle");
  const int n = dom.grid_size();
  BoundaryFunction f(dom.components(), dom.truncation());
  for (int c = 0; c < dom.components(); ++c) {
    if (static_cast<int>(values[c].size()) != n)
      throw ShapeError("sample vector length must equal the quadrature size");
    const Eigen::VectorXcd coef = dft_to_band(values[c], dom.truncation());
    for (int k = -dom.truncation(); k <= dom.truncation(); ++k)
      f.at(c, k) = coef[k + dom.truncation()];
  }
  return f;
}

std::vector<Eigen::VectorXcd> coeffs_to_samples(const DomainSpec& dom,
                                                const BoundaryFunction& f) {
  if (f.components() != dom.components())
    throw ShapeError("component mismatch");
  std::vector<Eigen::VectorXcd> out;
  for (int c = 0; c < dom.components(); ++c)
    out.push_back(f.sample(c, dom.grid_size()));
  return out;
}

namespace {

BoundaryFunction pointwise_real_map(const DomainSpec& dom,
                                    const BoundaryFunction& f,
                                    bool require_positive) {
  if (f.components() != dom.components())
    throw ShapeError("component mismatch");
  if (!f.is_real(1e-9))
    throw DomainError("boundary function must be real");
  const int n = std::max(dom.grid_size(), 4 * f.band() + 2);
  BoundaryFunction g(dom.components(), dom.truncation());
  for (int c = 0; c < dom.components(); ++c) {
    Eigen::VectorXcd vals = f.sample(c, n);
    for (int j = 0; j < n; ++j) {
      const double v = vals[j].real();
      if (require_positive) {
        if (!(v > 0.0))
          throw DomainError("log of a non-positive boundary value");
        vals[j] = std::log(v);
      } else {
        vals[j] = std::exp(v);
      }
    }
    const Eigen::VectorXcd coef = dft_to_band(vals, dom.truncation());
    for (int k = -dom.truncation(); k <= dom.truncation(); ++k)
      g.at(c, k) = coef[k + dom.truncation()];
  }
  symmetrize_real(g);
  return g;
}

}  // namespace

BoundaryFunction boundary_log(const DomainSpec& dom, const BoundaryFunction& f) {
  return pointwise_real_map(dom, f, true);
}

BoundaryFunction boundary_exp(const DomainSpec& dom, const BoundaryFunction& f) {
  return pointwise_real_map(dom, f, false);
}

cplx pair_with_m(const DomainSpec& dom, const BoundaryFunction& f) {
  if (f.components() != dom.components())
    throw ShapeError("component mismatch in pairing");
  cplx acc = 0.0;
  for (int k = -f.band(); k <= f.band(); ++k) {
    double a, b;
    dom.pair_response(k, a, b);
    acc += a * f.coeff(0, k);
    if (dom.components() == 2) acc += b * f.coeff(1, k);
  }
  return acc;
}

WeightSpec WeightSpec::trivial(const DomainSpec& dom) {
  WeightSpec w;
  w.kind_ = Kind::Trivial;
  w.density_ = BoundaryFunction::constant(dom, 1.0);
  return w;
}

WeightSpec WeightSpec::z_power(const DomainSpec& dom,
                               const Eigen::VectorXd& alpha) {
  if (alpha.size() != dom.sigma())
    throw WeightError("alpha length must equal sigma(domain)");
  WeightSpec w;
  w.kind_ = Kind::ZPower;
  w.exponents_ = alpha;
  w.density_ = BoundaryFunction::constant(dom, 1.0);
  if (dom.sigma() == 1) w.density_.at(1, 0) = std::pow(dom.q(), alpha[0]);
  return w;
}

WeightSpec WeightSpec::exp_n(const DomainSpec& dom,
                             const Eigen::VectorXd& n_coeffs) {
  if (n_coeffs.size() != dom.sigma())
    throw WeightError("n length must equal sigma(domain)");
  WeightSpec w;
  w.kind_ = Kind::ExpN;
  w.exponents_ = n_coeffs;
  if (dom.sigma() == 0) {
    w.density_ = BoundaryFunction::constant(dom, 1.0);
    return w;
  }
  const int band = 2 * dom.truncation();
  const BoundaryFunction lam = dom.n_basis_density(band);
  const int n = 4 * band + 2;
  BoundaryFunction dens(2, band);
  for (int c = 0; c < 2; ++c) {
    Eigen::VectorXcd vals = lam.sample(c, n);
    for (int j = 0; j < n; ++j) vals[j] = std::exp(n_coeffs[0] * vals[j].real());
    const Eigen::VectorXcd coef = dft_to_band(vals, band);
    for (int k = -band; k <= band; ++k) dens.at(c, k) = coef[k + band];
  }
  symmetrize_real(dens);
  // positivity guard on the truncated density
  for (int c = 0; c < 2; ++c) {
    const Eigen::VectorXcd chk = dens.sample(c, n);
    for (int j = 0; j < n; ++j)
      if (!(chk[j].real() > 0.0))
        throw WeightError("exp-N weight density lost positivity at this truncation");
  }
  w.density_ = dens;
  return w;
}

WeightSpec WeightSpec::resolve_on(const DomainSpec& dom) const {
  switch (kind_) {
    case Kind::Trivial:
      return trivial(dom);
    case Kind::ZPower:
      return z_power(dom, exponents_);
    case Kind::ExpN:
      return exp_n(dom, exponents_);
  }
  throw Error("unreachable");
}

cplx weighted_inner_product(const DomainSpec& dom, const BoundaryFunction& f,
                            const BoundaryFunction& g, const WeightSpec& w) {
  return pair_with_m(dom, f.product(g.conjugated()).product(w.density()));
}

Eigen::MatrixXcd monomial_pair_table(const DomainSpec& dom,
                                     const BoundaryFunction& g,
                                     const std::vector<int>& row_exps,
                                     const Eigen::VectorXd& row_scales,
                                     const std::vector<int>& col_exps,
                                     const Eigen::VectorXd& col_scales) {
  const int nr = static_cast<int>(row_exps.size());
  const int nc = static_cast<int>(col_exps.size());
  if (row_scales.size() != nr || col_scales.size() != nc)
    throw ShapeError("one scale per exponent expected in monomial_pair_table");
  int span = 0;
  for (int k : row_exps) span = std::max(span, std::abs(k));
  for (int k : col_exps) span = std::max(span, std::abs(k));
  span *= 2;

  // pairing responds to the mode difference only, per circle:
  // R_c(delta) = sum_l resp_c(delta + l) g_c(l)
  Eigen::MatrixXcd r(dom.components(), 2 * span + 1);
  for (int c = 0; c < dom.components(); ++c)
    for (int delta = -span; delta <= span; ++delta) {
      cplx acc = 0.0;
      for (int l = -g.band(); l <= g.band(); ++l) {
        double a, b;
        dom.pair_response(delta + l, a, b);
        acc += (c == 0 ? a : b) * g.coeff(c, l);
      }
      r(c, delta + span) = acc;
    }

  Eigen::MatrixXcd t(nr, nc);
  for (int i = 0; i < nr; ++i)
    for (int j = 0; j < nc; ++j) {
      cplx acc = 0.0;
      for (int c = 0; c < dom.components(); ++c) {
        const double rad = dom.component_radius(c);
        acc += row_scales[i] * col_scales[j] *
               std::pow(rad, row_exps[i] + col_exps[j]) *
               r(c, row_exps[i] - col_exps[j] + span);
      }
      t(i, j) = acc;
    }
  return t;
}

Eigen::MatrixXcd monomial_pair_table(const DomainSpec& dom,
                                     const BoundaryFunction& g,
                                     const std::vector<int>& exps,
                                     const Eigen::VectorXd& scales) {
  return monomial_pair_table(dom, g, exps, scales, exps, scales);
}

LaurentSeries::LaurentSeries(int kmin, Eigen::VectorXcd coeffs)
    : kmin_(kmin), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() == 0) coeffs_ = Eigen::VectorXcd::Zero(1);
}

LaurentSeries LaurentSeries::constant(cplx a) {
  Eigen::VectorXcd c(1);
  c[0] = a;
  return LaurentSeries(0, c);
}

LaurentSeries LaurentSeries::monomial(int k, cplx a) {
  Eigen::VectorXcd c(1);
  c[0] = a;
  return LaurentSeries(k, c);
}

cplx LaurentSeries::coeff(int k) const {
  if (k < kmin_ || k > kmax()) return 0.0;
  return coeffs_[k - kmin_];
}

LaurentSeries LaurentSeries::product(const LaurentSeries& g) const {
  Eigen::VectorXcd c =
      Eigen::VectorXcd::Zero(coeffs_.size() + g.coeffs_.size() - 1);
  for (int i = 0; i < coeffs_.size(); ++i) {
    if (coeffs_[i] == 0.0) continue;
    for (int j = 0; j < g.coeffs_.size(); ++j)
      c[i + j] += coeffs_[i] * g.coeffs_[j];
  }
  return LaurentSeries(kmin_ + g.kmin_, c);
}

LaurentSeries LaurentSeries::plus(const LaurentSeries& g) const {
  const int lo = std::min(kmin_, g.kmin_), hi = std::max(kmax(), g.kmax());
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(hi - lo + 1);
  for (int k = lo; k <= hi; ++k) c[k - lo] = coeff(k) + g.coeff(k);
  return LaurentSeries(lo, c);
}

LaurentSeries LaurentSeries::scaled(cplx s) const {
  return LaurentSeries(kmin_, coeffs_ * s);
}

LaurentSeries LaurentSeries::truncated(int lo, int hi) const {
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(hi - lo + 1);
  for (int k = lo; k <= hi; ++k) c[k - lo] = coeff(k);
  return LaurentSeries(lo, c);
}

double LaurentSeries::coeff_norm() const { return coeffs_.norm(); }

namespace {
double falling(int k, int order) {
  double f = 1.0;
  for (int i = 0; i < order; ++i) f *= (k - i);
  return f;
}
}  // namespace

cplx LaurentSeries::evaluate(const DomainSpec& dom, cplx z, int order) const {
  if (!dom.is_interior(z))
    throw EvaluationError("evaluation point must be strictly interior");
  if (z == 0.0) {
    for (int k = kmin_; k < 0; ++k)
      if (coeff(k) != 0.0)
        throw EvaluationError("negative powers cannot be evaluated at 0");
    return coeff(order) * falling(order, order);
  }
  cplx acc = 0.0;
  for (int k = kmin_; k <= kmax(); ++k) {
    const cplx a = coeff(k);
    if (a == 0.0) continue;
    const double f = falling(k, order);
    if (f == 0.0) continue;
    acc += a * f * std::pow(z, k - order);
  }
  return acc;
}

BoundaryFunction LaurentSeries::boundary_values(const DomainSpec& dom) const {
  if (dom.kind() == DomainKind::Disk && kmin_ < 0)
    for (int k = kmin_; k < 0; ++k)
      if (coeff(k) != 0.0)
        throw EvaluationError("negative powers are not analytic on the disk");
  const int band = std::max(std::abs(kmin_), std::abs(kmax()));
  BoundaryFunction f(dom.components(), band);
  for (int k = kmin_; k <= kmax(); ++k) {
    f.at(0, k) += coeff(k);
    if (dom.components() == 2) f.at(1, k) += coeff(k) * std::pow(dom.q(), k);
  }
  return f;
}

LaurentSeries analytic_from_boundary(const DomainSpec& dom,
                                     const BoundaryFunction& f, int band,
                                     double* rel_tail) {
  if (f.components() != dom.components())
    throw ShapeError("component mismatch");
  const int lo = dom.kind() == DomainKind::Disk ? 0 : -band;
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(band - lo + 1);
  for (int k = lo; k <= band; ++k) {
    if (k >= 0 || dom.kind() == DomainKind::Disk)
      c[k - lo] = f.coeff(0, k);
    else
      c[k - lo] = f.coeff(1, k) * std::pow(dom.q(), -k);
  }
  LaurentSeries s(lo, c);
  if (rel_tail) {
    const int n = 4 * std::max(band, f.band()) + 2;
    const BoundaryFunction rec = s.boundary_values(dom);
    double err = 0.0, scale = 0.0;
    for (int comp = 0; comp < dom.components(); ++comp) {
      const Eigen::VectorXcd a = f.sample(comp, n), b = rec.sample(comp, n);
      err = std::max(err, (a - b).cwiseAbs().maxCoeff());
      scale = std::max(scale, a.cwiseAbs().maxCoeff());
    }
    *rel_tail = err / std::max(scale, 1e-300);
  }
  return s;
}

namespace {

LaurentSeries pointwise_analytic_map(const DomainSpec& dom,
                                     const LaurentSeries& g, int band,
                                     double tail_guard, bool is_exp) {
  const int gband = std::max(std::abs(g.kmin()), std::abs(g.kmax()));
  const int n = 4 * std::max(band, gband) + 2;
  const BoundaryFunction gb = g.boundary_values(dom);
  BoundaryFunction mapped(dom.components(), band);
  std::vector<Eigen::VectorXcd> target(dom.components());
  for (int c = 0; c < dom.components(); ++c) {
    Eigen::VectorXcd vals = gb.sample(c, n);
    for (int j = 0; j < n; ++j)
      vals[j] = is_exp ? std::exp(vals[j]) : 1.0 / vals[j];
    target[c] = vals;
    const Eigen::VectorXcd coef = dft_to_band(vals, band);
    for (int k = -band; k <= band; ++k) mapped.at(c, k) = coef[k + band];
  }
  LaurentSeries s = analytic_from_boundary(dom, mapped, band, nullptr);
  const BoundaryFunction rec = s.boundary_values(dom);
  double err = 0.0, scale = 0.0;
  for (int c = 0; c < dom.components(); ++c) {
    const Eigen::VectorXcd b = rec.sample(c, n);
    err = std::max(err, (target[c] - b).cwiseAbs().maxCoeff());
    scale = std::max(scale, target[c].cwiseAbs().maxCoeff());
  }
  if (err > tail_guard * std::max(scale, 1e-300))
    throw TruncationError(
        "series tail above guard in analytic map; raise the band");
  return s;
}

}  // namespace

LaurentSeries exp_analytic(const DomainSpec& dom, const LaurentSeries& g,
                           int band, double tail_guard) {
  return pointwise_analytic_map(dom, g, band, tail_guard, true);
}

LaurentSeries reciprocal_analytic(const DomainSpec& dom, const LaurentSeries& f,
                                  int band, double tail_guard) {
  // a zero anywhere in the closed domain makes 1/f non-analytic; scan the
  // boundary and a radial interior sample first for a clean diagnostic.
  double fmin = std::numeric_limits<double>::infinity(), fmax = 0.0;
  const BoundaryFunction fb = f.boundary_values(dom);
  const int n = 4 * std::max({std::abs(f.kmin()), std::abs(f.kmax()), 1}) + 2;
  for (int c = 0; c < dom.components(); ++c) {
    const Eigen::VectorXcd vals = fb.sample(c, n);
    fmin = std::min(fmin, vals.cwiseAbs().minCoeff());
    fmax = std::max(fmax, vals.cwiseAbs().maxCoeff());
  }
  const double r0 = dom.kind() == DomainKind::Disk ? 0.0 : dom.q();
  if (dom.kind() == DomainKind::Disk) {
    for (int k = f.kmin(); k < 0; ++k)
      if (std::abs(f.coeff(k)) > 0.0)
        throw DomainError("negative powers are not analytic at the center");
    fmin = std::min(fmin, std::abs(f.evaluate(dom, 0.0)));
  }
  for (int i = 1; i <= 8; ++i) {
    const double r = r0 + (1.0 - r0) * i / 9.0;
    for (int j = 0; j < 32; ++j) {
      const cplx z = r * std::polar(1.0, 2.0 * M_PI * j / 32.0);
      if (!dom.is_interior(z)) continue;
      fmin = std::min(fmin, std::abs(f.evaluate(dom, z)));
    }
  }
  if (!(fmin > 1e-12 * std::max(fmax, 1.0)))
    throw DomainError("function vanishes on the closed domain; no reciprocal");
  return pointwise_analytic_map(dom, f, band, tail_guard, false);
}

}  // namespace hardy
