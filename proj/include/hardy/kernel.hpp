#pragma once

#include <string>
#include <vector>

#include "hardy/boundary.hpp"
#include "hardy/chain.hpp"
#include "hardy/domain.hpp"

namespace hardy {

/// Coefficient vector of a functional's representer in the current scaled
/// monomial basis, together with its squared norm under the current kernel.
struct Representer {
  Eigen::VectorXcd coeffs;
  double norm2 = 0.0;
  std::string what;
};

/// Reproducing kernel of a weighted Hardy space truncation, or of a
/// subspace obtained from it by rank-one downdates. The basis is the
/// scaled monomial family s_k (z/r0)^k; the kernel matrix starts at
/// gram^{-1} and each downdate subtracts a rank-one piece.
class KernelRep {
 public:
  const DomainSpec& domain() const { return dom_; }
  const std::vector<int>& exponents() const { return exps_; }
  int dim() const { return static_cast<int>(exps_.size()); }
  int rank() const { return dim() - static_cast<int>(applied_.size()); }
  const Eigen::MatrixXcd& gram() const { return gram_; }
  const Eigen::MatrixXcd& kernel_matrix() const { return b_; }
  const std::vector<Representer>& applied() const { return applied_; }

  /// total amplitude of basis function j, i.e. the coefficient a_j in
  /// a_j z^{k_j}; pairs with exponents() for monomial table construction
  Eigen::VectorXd monomial_amplitudes() const;

  /// values (or order-th derivatives) of the basis functions at z
  Eigen::VectorXcd eval_vector(cplx z, int order = 0) const;
  /// K(z, w) = v(z)^T B conj(v(w))
  cplx kernel(cplx z, cplx w) const;
  /// coefficient vector of K(., w), i.e. the representer of f -> f(w)
  Eigen::VectorXcd kernel_column(cplx w) const;
  /// the function a coefficient vector stands for
  LaurentSeries to_series(const Eigen::VectorXcd& coords) const;
  /// weighted inner product of two coefficient vectors: y^H gram x
  cplx inner(const Eigen::VectorXcd& x, const Eigen::VectorXcd& y) const;

  friend KernelRep szego_kernel(const DomainSpec& dom, const WeightSpec& w);
  friend KernelRep downdate(const KernelRep& k, const Representer& w);

 private:
  DomainSpec dom_ = DomainSpec::disk(1);
  std::vector<int> exps_;
  Eigen::VectorXd scales_;
  double r0_ = 1.0;
  Eigen::MatrixXcd gram_, b_;
  std::vector<Representer> applied_;
};

/// Kernel of the full truncated space under the given weight. The Gram
/// matrix is checked Hermitian and its condition number must stay below
/// 1e12, otherwise the truncation is rejected.
KernelRep szego_kernel(const DomainSpec& dom, const WeightSpec& w);

/// representer of f -> f(a)
Representer functional_representer(const KernelRep& k, cplx a);
/// representer of f -> f^(order)(c)
Representer functional_representer(const KernelRep& k, cplx c, int order);
/// representer of the stage condition f -> v L1(f) - u L2(f) at parameter t,
/// where (L1, L2) is the stage's pair of evaluation functionals
Representer functional_representer(const KernelRep& k, const Constraint& stage,
                                   const ProjectiveValue& t);

/// kernel of the orthogonal complement of the representer's span
KernelRep downdate(const KernelRep& k, const Representer& w);

/// Weighted constrained space at a chosen chain parameter: the downdated
/// kernel plus an independently built orthonormal basis (null space of the
/// stage conditions, then Gram-Schmidt under the weighted metric).
class ConstrainedSpace {
 public:
  const DomainSpec& domain() const { return dom_; }
  const GamelinChain& chain() const { return chain_; }
  const DeltaPoint& at() const { return at_; }
  const WeightSpec& weight() const { return weight_; }
  const KernelRep& kernel() const { return kernel_; }
  const Eigen::MatrixXcd& on_basis() const { return on_; }
  int dim() const { return static_cast<int>(on_.cols()); }
  LaurentSeries column_series(int j) const;
  /// kernel at (z, w) via the second route: sum_j e_j(z) conj(e_j(w))
  cplx kernel_via_basis(cplx z, cplx w) const;

  friend ConstrainedSpace build_constrained_space(const DomainSpec& dom,
                                                  const WeightSpec& w,
                                                  const GamelinChain& chain,
                                                  const DeltaPoint& at);

 private:
  DomainSpec dom_ = DomainSpec::disk(1);
  GamelinChain chain_;
  DeltaPoint at_;
  WeightSpec weight_;
  KernelRep kernel_;
  Eigen::MatrixXcd on_;
};

/// Downdates the full-space kernel once per stage, in chain order, by the
/// stage representer at the given parameter; also builds the ON basis.
/// The chain is re-validated; degenerate stages raise ConstraintError.
ConstrainedSpace build_constrained_space(const DomainSpec& dom,
                                         const WeightSpec& w,
                                         const GamelinChain& chain,
                                         const DeltaPoint& at);

/// K(x0, x0) of the constrained space (x0 = 0 on the disk)
double kernel_norm_at_basepoint(const ConstrainedSpace& space);

/// Finite Blaschke product vanishing at every chain point, to order n+1 at
/// an order-n derivation stage and simply at two-point stages; unimodular
/// on the unit circle. Disk only.
LaurentSeries blaschke_with_gamma_zeros(const GamelinChain& chain,
                                        const DomainSpec& dom);

}  // namespace hardy
