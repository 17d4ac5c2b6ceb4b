#pragma once
#include <complex>

#include "hardy/errors.hpp"

namespace hardy {

using cplx = std::complex<double>;

class BoundaryFunction;

enum class DomainKind { Disk, Annulus };

/// Planar domain (unit disk or annulus q < |z| < 1) together with the Fourier
/// truncation order and the representing measure of the basepoint x0, which is
/// its harmonic measure. All boundary integrals reduce to per-mode data:
/// integrating the mode-k boundary pair (c_out, c_in) against harmonic measure
/// gives alpha_k c_out + beta_k c_in, where the responses come from matching
/// r^|k| e^{ik t} and r^{-|k|} e^{ik t} (mode 0: 1 and log r) on the circles.
class DomainSpec {
 public:
  /// Unit disk, basepoint 0. Representing measure: normalized arclength.
  static DomainSpec disk(int truncation);

  /// Annulus q < |z| < 1 with basepoint x0 on (q, 1). q is accepted in
  /// [0.05, 0.95]; pass x0 <= 0 to get the default sqrt(q).
  static DomainSpec annulus(double q, double x0, int truncation);

  DomainKind kind() const { return kind_; }
  double q() const { return q_; }
  double x0() const { return x0_; }
  int truncation() const { return truncation_; }
  int components() const { return kind_ == DomainKind::Disk ? 1 : 2; }
  /// Dimension of the lattice side / of N (0 for disk, 1 for annulus).
  int sigma() const { return kind_ == DomainKind::Disk ? 0 : 1; }
  /// Uniform quadrature nodes per circle; >= 4M+1 keeps band-M products
  /// alias-free through degree 2M.
  int grid_size() const { return 4 * truncation_ + 4; }

  DomainSpec with_truncation(int m) const;

  double component_radius(int c) const { return c == 0 ? 1.0 : q_; }
  cplx node(int c, int j) const;
  bool is_interior(cplx z) const;

  void pair_response(int k, double& alpha, double& beta) const;

  /// Harmonic-measure density w.r.t. normalized arclength per circle.
  BoundaryFunction representing_density(int band) const;

  /// lambda_1 = d(m_out - m_in)/dm, the basis density of N (annulus only).
  BoundaryFunction n_basis_density(int band) const;

  /// integral of log|Z_1| d nu_1 with nu_1 = (m_out - m_in)/log(1/q); the
  /// lattice normalization, equal to 1 (annulus only).
  double nu_normalization() const;

 private:
  DomainSpec() = default;
  DomainKind kind_ = DomainKind::Disk;
  double q_ = 0.0;
  double x0_ = 0.0;
  int truncation_ = 0;
};

}  // namespace hardy
