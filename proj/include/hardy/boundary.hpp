#pragma once
#include <vector>

#include <Eigen/Dense>

#include "hardy/domain.hpp"

namespace hardy {

/// Boundary data as truncated Fourier/Laurent coefficients per boundary
/// circle: component c holds coefficients of f(r_c e^{it}) in t over
/// k = -band..band. Bands grow under products; products are exact
/// coefficient convolutions, so no quadrature aliasing ever enters.
class BoundaryFunction {
 public:
  BoundaryFunction() = default;
  BoundaryFunction(int components, int band);
  static BoundaryFunction constant(const DomainSpec& dom, cplx value);

  int components() const { return static_cast<int>(comps_.size()); }
  int band() const { return band_; }

  cplx coeff(int comp, int k) const;  // 0 outside the band
  cplx& at(int comp, int k);          // k must lie inside the band

  BoundaryFunction truncated(int band) const;
  BoundaryFunction conjugated() const;
  BoundaryFunction product(const BoundaryFunction& g) const;
  BoundaryFunction plus(const BoundaryFunction& g) const;
  BoundaryFunction scaled(cplx s) const;

  /// Values at n uniform nodes t_j = 2 pi j / n of component c.
  Eigen::VectorXcd sample(int comp, int n_nodes) const;
  double max_abs(int n_nodes) const;
  double coeff_norm() const;
  bool is_real(double tol = 1e-11) const;

 private:
  std::vector<Eigen::VectorXcd> comps_;
  int band_ = 0;
};

/// Node values (one vector per circle, each of length grid_size) -> band-M
/// coefficients. Throws ShapeError on size mismatches.
BoundaryFunction samples_to_coeffs(const DomainSpec& dom,
                                   const std::vector<Eigen::VectorXcd>& values);
std::vector<Eigen::VectorXcd> coeffs_to_samples(const DomainSpec& dom,
                                                const BoundaryFunction& f);

/// Pointwise log of a strictly positive real boundary function, truncated at
/// the domain band. Throws DomainError if f is not real-positive at the nodes.
BoundaryFunction boundary_log(const DomainSpec& dom, const BoundaryFunction& f);
/// Pointwise exp of a real boundary function, truncated at the domain band.
BoundaryFunction boundary_exp(const DomainSpec& dom, const BoundaryFunction& f);

/// Integral against the representing measure (harmonic measure of x0).
/// Exact for any band: per-mode solves, no quadrature.
cplx pair_with_m(const DomainSpec& dom, const BoundaryFunction& f);

/// Weight for the space inner products: trivial, |Z|^alpha, or exp of an
/// N-combination sum n_i lambda_i.
class WeightSpec {
 public:
  enum class Kind { Trivial, ZPower, ExpN };

  static WeightSpec trivial(const DomainSpec& dom);
  static WeightSpec z_power(const DomainSpec& dom, const Eigen::VectorXd& alpha);
  static WeightSpec exp_n(const DomainSpec& dom, const Eigen::VectorXd& n_coeffs);

  Kind kind() const { return kind_; }
  const Eigen::VectorXd& exponents() const { return exponents_; }
  const BoundaryFunction& density() const { return density_; }

  /// Re-resolve the same weight on another truncation of the same domain
  /// (densities are truncation-dependent for ExpN).
  WeightSpec resolve_on(const DomainSpec& dom) const;

 private:
  Kind kind_ = Kind::Trivial;
  Eigen::VectorXd exponents_;
  BoundaryFunction density_;
};

/// <f, g>_w = integral of f conj(g) * density d m. Exact convolution + pairing.
cplx weighted_inner_product(const DomainSpec& dom, const BoundaryFunction& f,
                            const BoundaryFunction& g, const WeightSpec& w);

/// Table of scaled-monomial pairings against a density: entry (i, j) is the
/// integral of (s_i z^{k_i}) conj(s_j z^{k_j}) g dm. Exact per mode for any
/// band of g.
Eigen::MatrixXcd monomial_pair_table(const DomainSpec& dom,
                                     const BoundaryFunction& g,
                                     const std::vector<int>& exps,
                                     const Eigen::VectorXd& scales);
/// Rectangular variant with separate row and column monomial families.
Eigen::MatrixXcd monomial_pair_table(const DomainSpec& dom,
                                     const BoundaryFunction& g,
                                     const std::vector<int>& row_exps,
                                     const Eigen::VectorXd& row_scales,
                                     const std::vector<int>& col_exps,
                                     const Eigen::VectorXd& col_scales);

/// Analytic function on the domain as a Laurent polynomial
/// sum_{k=kmin}^{kmax} a_k z^k (kmin >= 0 on the disk).
class LaurentSeries {
 public:
  LaurentSeries() : kmin_(0), coeffs_(Eigen::VectorXcd::Zero(1)) {}
  LaurentSeries(int kmin, Eigen::VectorXcd coeffs);
  static LaurentSeries constant(cplx a);
  static LaurentSeries monomial(int k, cplx a = 1.0);

  int kmin() const { return kmin_; }
  int kmax() const { return kmin_ + static_cast<int>(coeffs_.size()) - 1; }
  cplx coeff(int k) const;

  LaurentSeries product(const LaurentSeries& g) const;
  LaurentSeries plus(const LaurentSeries& g) const;
  LaurentSeries scaled(cplx s) const;
  LaurentSeries truncated(int kmin, int kmax) const;
  double coeff_norm() const;

  /// Value of the order-th derivative at a strictly interior point.
  /// Throws EvaluationError if z is on or outside the boundary.
  cplx evaluate(const DomainSpec& dom, cplx z, int order = 0) const;

  BoundaryFunction boundary_values(const DomainSpec& dom) const;

 private:
  int kmin_;
  Eigen::VectorXcd coeffs_;
};

/// Reconstruct an analytic function from boundary data, truncating at `band`.
/// If rel_tail is non-null it receives the relative reconstruction residual
/// (boundary values of the result vs the input, on the nodes).
LaurentSeries analytic_from_boundary(const DomainSpec& dom,
                                     const BoundaryFunction& f, int band,
                                     double* rel_tail = nullptr);

/// exp of an analytic function, truncated at `band`; the relative tail must
/// stay below `tail_guard` or a TruncationError is thrown.
LaurentSeries exp_analytic(const DomainSpec& dom, const LaurentSeries& g,
                           int band, double tail_guard = 1e-8);

/// 1/f for analytic f with no zeros on the closed domain. Guards min |f| on
/// an interior/boundary sample and the reconstruction tail.
LaurentSeries reciprocal_analytic(const DomainSpec& dom, const LaurentSeries& f,
                                  int band, double tail_guard = 1e-8);

}  // namespace hardy
