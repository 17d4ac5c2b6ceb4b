#pragma once
#include <vector>

#include <Eigen/Dense>

#include "hardy/boundary.hpp"
#include "hardy/chain.hpp"
#include "hardy/domain.hpp"

namespace hardy {

/// Split of log(rho) into an analytic part, a co-analytic part with vanishing
/// mean against the basepoint measure, and a component along the N basis.
/// The three parts are mutually orthogonal under the basepoint measure and
/// their sum reproduces log(rho) at the quadrature nodes.
struct LogRhoDecomposition {
  LaurentSeries gamma;    // analytic part; gamma(x0) equals c_rho
  BoundaryFunction zeta;  // co-analytic part, mean-free against m
  Eigen::VectorXd n;      // N coefficients (one per annulus handle, none on
                          // the disk)
  double c_rho = 0.0;     // integral of log(rho) dm
  double residual = 0.0;  // sup-node reassembly mismatch
};

/// rho must be real and strictly positive at the quadrature nodes.
/// Disk: Fourier split. Annulus: least squares against the three subspaces
/// under the basepoint-measure metric (exact at the domain band).
LogRhoDecomposition decompose_log_rho(const DomainSpec& dom,
                                      const BoundaryFunction& rho);

/// The unique parameter tuple with e^gamma in the constrained space:
/// t = e^{gamma(a) - gamma(b)} at a two-point stage and
/// t = e^{gamma(c)} / (d^n/dz^n e^gamma)(c) at a derivation stage,
/// stored projectively so a vanishing derivative lands at infinity.
DeltaPoint omega_from_gamma(const DomainSpec& dom, const LaurentSeries& gamma,
                            const GamelinChain& chain);

/// Kernel-side data of the distance identity.
struct SzegoSides {
  double c_rho = 0.0;
  Eigen::VectorXd n;
  DeltaPoint omega;
  double rhs = 0.0;  // exp(c_rho) / K(x0, x0) on the (n, omega) space
};

SzegoSides szego_rhs(const DomainSpec& dom, const BoundaryFunction& rho,
                     const GamelinChain& chain);

/// Extremal side: minimizes the rho-weighted distance from 1 over
/// polynomials (Laurent polynomials on the annulus) of degree <= degree that
/// satisfy the chain at the identity parameter and vanish at the basepoint.
/// Singular normal equations fall back to a 1e-12 ridge; *warned is set.
double szego_lhs_bruteforce(const DomainSpec& dom, const BoundaryFunction& rho,
                            const GamelinChain& chain, int degree,
                            bool* warned = nullptr);

/// Disk-only constants of the degree-one reference formula:
/// lambda = exp(c_rho) * rho_hat(1), sigma = (1, lambda)/sqrt(1 + |lambda|^2).
struct NeilConstants {
  double c_rho = 0.0;
  cplx lambda;
  cplx sigma1, sigma2;
};

NeilConstants neil_constants(const DomainSpec& dom,
                             const BoundaryFunction& rho);

/// Both sides over a strictly increasing degree schedule. The kernel side is
/// computed once at the deepest truncation; the extremal side is rerun per
/// schedule entry with the exact rho pairings.
struct SzegoReport {
  double c_rho = 0.0;
  Eigen::VectorXd n;
  DeltaPoint omega;
  double rhs = 0.0;
  double lhs = 0.0;  // at the deepest degree
  int basis_degree = 0;
  double gap = 0.0;  // |lhs - rhs|
  bool lhs_warned = false;
  std::vector<std::pair<int, double>> trace;  // (degree, |lhs(degree) - rhs|)
};

SzegoReport szego_schedule(const DomainSpec& dom, const BoundaryFunction& rho,
                           const GamelinChain& chain,
                           const std::vector<int>& schedule);

}  // namespace hardy
