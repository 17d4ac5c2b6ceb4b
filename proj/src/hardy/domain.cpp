#include "hardy/domain.hpp"

#include <cmath>

#include "hardy/boundary.hpp"

namespace hardy {

DomainSpec DomainSpec::disk(int truncation) {
  if (truncation < 1) throw ConfigError("truncation must be >= 1");
  DomainSpec d;
  d.kind_ = DomainKind::Disk;
  d.truncation_ = truncation;
  return d;
}

DomainSpec DomainSpec::annulus(double q, double x0, int truncation) {
  if (truncation < 1) throw ConfigError("truncation must be >= 1");
  if (!(q >= 0.05 && q <= 0.95))
    throw ConfigError("annulus modulus q must lie in [0.05, 0.95]");
  if (x0 <= 0.0) x0 = std::sqrt(q);
  if (!(x0 > q && x0 < 1.0))
    throw ConfigError("basepoint x0 must lie on (q, 1)");
  DomainSpec d;
  d.kind_ = DomainKind::Annulus;
  d.q_ = q;
  d.x0_ = x0;
  d.truncation_ = truncation;
  return d;
}

DomainSpec DomainSpec::with_truncation(int m) const {
  DomainSpec d = *this;
  if (m < 1) throw ConfigError("truncation must be >= 1");
  d.truncation_ = m;
  return d;
}

cplx DomainSpec::node(int c, int j) const {
  const double t = 2.0 * M_PI * j / grid_size();
  return component_radius(c) * std::polar(1.0, t);
}

bool DomainSpec::is_interior(cplx z) const {
  const double r = std::abs(z);
  if (kind_ == DomainKind::Disk) return r < 1.0;
  return r > q_ && r < 1.0;
}

void DomainSpec::pair_response(int k, double& alpha, double& beta) const {
  if (kind_ == DomainKind::Disk) {
    alpha = (k == 0) ? 1.0 : 0.0;
    beta = 0.0;
    return;
  }
  if (k == 0) {
    beta = std::log(x0_) / std::log(q_);
    alpha = 1.0 - beta;
    return;
  }
  const double a = std::abs(k);
  const double s = std::pow(q_, a);        // q^|k|
  const double t = std::pow(x0_, a);       // x0^|k|
  const double u = std::pow(q_ / x0_, a);  // q^|k| / x0^|k|, in (0,1)
  const double denom = 1.0 - s * s;
  alpha = t * (1.0 - u * u) / denom;
  beta = u * (1.0 - t * t) / denom;
}

BoundaryFunction DomainSpec::representing_density(int band) const {
  BoundaryFunction w(components(), band);
  for (int k = -band; k <= band; ++k) {
    double a, b;
    pair_response(k, a, b);
    w.at(0, k) = a;
    if (components() == 2) w.at(1, k) = b;
  }
  return w;
}

BoundaryFunction DomainSpec::n_basis_density(int band) const {
  if (kind_ != DomainKind::Annulus)
    throw UnsupportedError("N is trivial on the disk: no n_basis_density");
  const int n = 4 * band + 2;
  BoundaryFunction lam(2, band);
  for (int c = 0; c < 2; ++c) {
    // The density dips to ~rate^M near its minimum, so a band-limited copy is
    // useless for 1/w there; sum the exact mode responses to convergence.
    Eigen::VectorXd vals = Eigen::VectorXd::Zero(n);
    {
      double a0, b0;
      pair_response(0, a0, b0);
      vals.array() += (c == 0 ? a0 : b0);
      int quiet = 0;
      for (int k = 1; k <= 500000 && quiet < 4; ++k) {
        double a, b;
        pair_response(k, a, b);
        const double r = (c == 0 ? a : b);
        quiet = (std::abs(r) < 1e-19) ? quiet + 1 : 0;
        for (int j = 0; j < n; ++j)
          vals[j] += 2.0 * r * std::cos(2.0 * M_PI * j * k / n);
      }
    }
    Eigen::VectorXcd rec(n);
    for (int j = 0; j < n; ++j) {
      const double v = vals[j];
      if (!(v > 1e-250))
        throw TruncationError(
            "harmonic-measure density not resolvably positive at this "
            "truncation; raise M or move q away from 1");
      rec[j] = (c == 0 ? 1.0 : -1.0) / v;
    }
    // direct DFT back to the band
    for (int k = -band; k <= band; ++k) {
      cplx s = 0.0;
      for (int j = 0; j < n; ++j)
        s += rec[j] * std::polar(1.0, -2.0 * M_PI * j * k / n);
      lam.at(c, k) = s / static_cast<double>(n);
    }
  }
  return lam;
}

double DomainSpec::nu_normalization() const {
  if (kind_ != DomainKind::Annulus)
    throw UnsupportedError("nu is defined on the annulus only");
  const int n = grid_size();
  double m0 = 0.0, m1 = 0.0;
  for (int j = 0; j < n; ++j) {
    m0 += std::log(std::abs(node(0, j)));
    m1 += std::log(std::abs(node(1, j)));
  }
  return (m0 / n - m1 / n) / std::log(1.0 / q_);
}

}  // namespace hardy
