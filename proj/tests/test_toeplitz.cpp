#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "hardy/boundary.hpp"
#include "hardy/chain.hpp"
#include "hardy/domain.hpp"
#include "hardy/errors.hpp"
#include "hardy/kernel.hpp"
#include "hardy/toeplitz.hpp"

using namespace hardy;

namespace {

GamelinChain neil_chain() {
  return GamelinChain({Constraint::derivation(cplx(0.0), 1)});
}

DomainSpec test_annulus(int m) { return DomainSpec::annulus(0.5, std::sqrt(0.5), m); }

// basis column j of the space as an explicit Laurent polynomial
LaurentSeries column_series(const ConstrainedSpace& sp, int j) {
  const auto& exps = sp.kernel().exponents();
  const Eigen::VectorXd amps = sp.kernel().monomial_amplitudes();
  int lo = exps[0], hi = exps[0];
  for (int k : exps) {
    lo = std::min(lo, k);
    hi = std::max(hi, k);
  }
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(hi - lo + 1);
  for (int p = 0; p < static_cast<int>(exps.size()); ++p)
    c[exps[p] - lo] += sp.on_basis()(p, j) * amps[p];
  return LaurentSeries(lo, c);
}

BoundaryFunction random_symbol(const DomainSpec& dom, std::mt19937_64& rng,
                               int band, bool real = false) {
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  BoundaryFunction f(dom.components(), band);
  for (int c = 0; c < dom.components(); ++c)
    for (int k = -band; k <= band; ++k) f.at(c, k) = cplx(u(rng), u(rng));
  if (real) f = f.plus(f.conjugated()).scaled(0.5);
  return f;
}

// e^{i a cos t} on every boundary circle; unimodular with rapidly decaying
// coefficients, so the band-M truncation is unimodular to machine precision
BoundaryFunction oscillating_symbol(const DomainSpec& dom, double a) {
  const int nq = dom.grid_size();
  std::vector<Eigen::VectorXcd> vals(dom.components(), Eigen::VectorXcd(nq));
  for (int c = 0; c < dom.components(); ++c)
    for (int j = 0; j < nq; ++j)
      vals[c][j] = std::exp(cplx(0, a * std::cos(2 * M_PI * j / nq)));
  return samples_to_coeffs(dom, vals);
}

}  // namespace

TEST_CASE("compression entries match direct weighted pairings") {
  std::mt19937_64 rng(41);

  auto dom = DomainSpec::disk(8);
  auto w = WeightSpec::trivial(dom);
  auto sp = build_constrained_space(dom, w, neil_chain(), delta_gamma(neil_chain()));
  auto phi = random_symbol(dom, rng, 3);
  auto t = toeplitz_matrix(phi, sp);
  CHECK(t.dim() == sp.dim());
  CHECK(t.truncation == 8);
  double worst = 0;
  for (int i = 0; i < sp.dim(); ++i)
    for (int j = 0; j < sp.dim(); ++j) {
      const cplx direct = weighted_inner_product(
          dom, phi.product(column_series(sp, j).boundary_values(dom)),
          column_series(sp, i).boundary_values(dom), w);
      worst = std::max(worst, std::abs(direct - t.mat(i, j)));
    }
  CHECK(worst < 1e-10);

  // same check by plain trapezoid quadrature, which is exact here because
  // the node count beats the total band of the integrand
  const int nq = dom.grid_size();
  worst = 0;
  for (int i = 0; i < sp.dim(); ++i)
    for (int j = 0; j < sp.dim(); ++j) {
      const Eigen::VectorXcd pv = phi.sample(0, nq);
      const Eigen::VectorXcd ev =
          column_series(sp, j).boundary_values(dom).sample(0, nq);
      const Eigen::VectorXcd fv =
          column_series(sp, i).boundary_values(dom).sample(0, nq);
      cplx acc = 0;
      for (int n = 0; n < nq; ++n) acc += pv[n] * ev[n] * std::conj(fv[n]);
      worst = std::max(worst, std::abs(acc / double(nq) - t.mat(i, j)));
    }
  CHECK(worst < 1e-10);

  auto doma = test_annulus(8);
  GamelinChain tp({Constraint::two_point(cplx(0.55), cplx(-0.55))});
  auto wa = WeightSpec::z_power(doma, Eigen::VectorXd::Constant(1, 0.3));
  auto spa = build_constrained_space(doma, wa, tp,
                                     {ProjectiveValue::finite(cplx(0.4, 0.2))});
  auto phia = random_symbol(doma, rng, 3);
  auto ta = toeplitz_matrix(phia, spa);
  worst = 0;
  for (int i = 0; i < spa.dim(); ++i)
    for (int j = 0; j < spa.dim(); ++j) {
      const cplx direct = weighted_inner_product(
          doma, phia.product(column_series(spa, j).boundary_values(doma)),
          column_series(spa, i).boundary_values(doma), wa);
      worst = std::max(worst, std::abs(direct - ta.mat(i, j)));
    }
  CHECK(worst < 1e-10);
}

TEST_CASE("identity shift and adjoint structure") {
  auto dom = DomainSpec::disk(12);
  auto sp = build_constrained_space(dom, WeightSpec::trivial(dom), {}, {});
  const int n = sp.dim();

  auto ti = toeplitz_matrix(BoundaryFunction::constant(dom, 1.0), sp);
  CHECK((ti.mat - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff() <
        1e-13);
  CHECK(min_singular_value(ti) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(operator_norm(ti) == doctest::Approx(1.0).epsilon(1e-12));

  // with no constraints the basis is the monomials in degree order, so
  // multiplication by z is the lower shift; the top degree falls off the
  // truncation, which costs one zero singular value
  auto tz = toeplitz_matrix(LaurentSeries::monomial(1).boundary_values(dom), sp);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double want = (i == j + 1) ? 1.0 : 0.0;
      CHECK(std::abs(tz.mat(i, j) - want) < 1e-13);
    }
  CHECK(min_singular_value(tz) < 1e-14);
  CHECK(operator_norm(tz) == doctest::Approx(1.0).epsilon(1e-12));

  auto tzbar = toeplitz_matrix(
      LaurentSeries::monomial(1).boundary_values(dom).conjugated(), sp);
  CHECK((tzbar.mat - tz.mat.adjoint()).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("conjugate symbols compress to adjoint matrices") {
  std::mt19937_64 rng(42);

  auto disk = DomainSpec::disk(12);
  auto spd = build_constrained_space(disk, WeightSpec::trivial(disk),
                                     neil_chain(), delta_gamma(neil_chain()));
  for (int trial = 0; trial < 3; ++trial) {
    auto phi = random_symbol(disk, rng, 4);
    auto t = toeplitz_matrix(phi, spd);
    auto tc = toeplitz_matrix(phi.conjugated(), spd);
    CHECK((tc.mat - t.mat.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
  }

  // weighted annulus: the pairing tables pass through factors of q^{-|k|},
  // which raises the roundoff floor a little above the disk case
  auto dom = test_annulus(10);
  GamelinChain tp({Constraint::two_point(cplx(0.55), cplx(-0.55))});
  auto w = WeightSpec::z_power(dom, Eigen::VectorXd::Constant(1, 0.6));
  auto sp = build_constrained_space(dom, w, tp,
                                    {ProjectiveValue::finite(cplx(-0.2, 0.5))});
  for (int trial = 0; trial < 3; ++trial) {
    auto phi = random_symbol(dom, rng, 4);
    auto t = toeplitz_matrix(phi, sp);
    auto tc = toeplitz_matrix(phi.conjugated(), sp);
    CHECK((tc.mat - t.mat.adjoint()).cwiseAbs().maxCoeff() < 5e-12);
  }
  // real symbols give Hermitian compressions
  auto real_phi = random_symbol(dom, rng, 4, true);
  auto tr = toeplitz_matrix(real_phi, sp);
  CHECK((tr.mat - tr.mat.adjoint()).cwiseAbs().maxCoeff() < 5e-12);
}

TEST_CASE("operator norm approaches the symbol sup at large truncation") {
  auto dom = DomainSpec::disk(64);
  auto sp = build_constrained_space(dom, WeightSpec::trivial(dom), {}, {});
  Eigen::VectorXcd c(2);
  c << 0.5, 1.0;  // sup |0.5 + e^{it}| = 1.5
  auto t = toeplitz_matrix(LaurentSeries(0, c).boundary_values(dom), sp);
  const double norm = operator_norm(t);
  CHECK(norm <= 1.5 + 1e-10);  // compressions never exceed the sup
  CHECK(norm > 1.5 * 0.98);
}

TEST_CASE("distance to the constrained algebra") {
  auto dom = DomainSpec::disk(24);
  bool stalled = true;

  // anti-analytic unimodular symbol sits at distance exactly 1, with or
  // without constraints; on a uniform grid even the discrete problem gives 1
  auto zbar = LaurentSeries::monomial(1).boundary_values(dom).conjugated();
  CHECK(distance_to_algebra(dom, zbar, {}, 24, &stalled) ==
        doctest::Approx(1.0).epsilon(1e-8));
  CHECK(!stalled);
  CHECK(distance_to_algebra(dom, zbar, neil_chain(), 24) ==
        doctest::Approx(1.0).epsilon(1e-8));

  // members of the algebra are at distance zero
  auto z2 = LaurentSeries::monomial(2).boundary_values(dom);
  CHECK(distance_to_algebra(dom, z2, neil_chain(), 24, &stalled) < 1e-10);

  // e^{i a cos t} stays within |e^{ia} - 1| of the constants, which already
  // satisfy every chain condition at the identity parameter
  auto osc = oscillating_symbol(dom, 0.3);
  const double d = distance_to_algebra(dom, osc, neil_chain(), 24, &stalled);
  CHECK(!stalled);
  CHECK(d > 0.1);
  CHECK(d <= std::abs(std::exp(cplx(0, 0.3)) - 1.0) + 1e-8);

  CHECK_THROWS_AS(distance_to_algebra(dom, zbar, {}, -1), ConfigError);
}

TEST_CASE("sphere net hits the poles and spreads over rings") {
  CHECK_THROWS_AS(sphere_net(1), ConfigError);

  auto poles = sphere_net(2);
  REQUIRE(poles.size() == 2);
  CHECK(poles[0].value() == cplx(0.0));
  CHECK(poles[1].is_infinite());

  for (int n : {5, 8, 12, 13}) {
    auto net = sphere_net(n);
    REQUIRE(static_cast<int>(net.size()) == n);
    int infs = 0, zeros = 0;
    for (const auto& p : net) {
      if (p.is_infinite()) ++infs;
      else if (p.value() == cplx(0.0)) ++zeros;
    }
    CHECK(infs == 1);
    CHECK(zeros == 1);
    // all points distinct on the sphere
    for (size_t i = 0; i < net.size(); ++i)
      for (size_t j = i + 1; j < net.size(); ++j)
        CHECK(ProjectiveValue::distance(net[i], net[j]) > 0.05);
  }
}

TEST_CASE("scan verdict separates invertible from noninvertible symbols") {
  auto dom = DomainSpec::disk(12);
  WidomGridSpec gs;
  gs.sigma_points = 4;
  gs.delta_points = 6;

  auto one = BoundaryFunction::constant(dom, 1.0);
  auto scan = widom_scan(dom, one, neil_chain(), gs);
  CHECK(scan.verdict == WidomVerdict::ConsistentInvertible);
  CHECK(scan.grid.size() == 6);  // one trivial weight, six sphere points
  CHECK(scan.min_sigma == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(scan.distance < 1e-8);
  CHECK(!scan.distance_stalled);
  CHECK(scan.margin == doctest::Approx(0.95).epsilon(1e-8));
  for (const auto& pt : scan.grid) CHECK(pt.norm <= 1.0 + 1e-10);

  auto zbar2 =
      LaurentSeries::monomial(2).boundary_values(dom).conjugated();
  auto scan2 = widom_scan(dom, zbar2, {}, gs);
  CHECK(scan2.verdict == WidomVerdict::ConsistentNoninvertible);
  CHECK(scan2.min_sigma < 1e-12);
  CHECK(scan2.distance > 1.0 - 1e-8);

  auto osc = oscillating_symbol(dom, 0.3);
  auto scan3 = widom_scan(dom, osc, neil_chain(), gs);
  CHECK(scan3.verdict == WidomVerdict::ConsistentInvertible);
  CHECK(scan3.min_sigma > 0.9);
  CHECK(scan3.distance < 0.3);
}

TEST_CASE("scan covers the sigma lattice on the annulus") {
  auto dom = test_annulus(10);
  GamelinChain tp({Constraint::two_point(cplx(0.55), cplx(-0.55))});
  WidomGridSpec gs;
  gs.sigma_points = 4;
  gs.delta_points = 6;
  auto scan = widom_scan(dom, BoundaryFunction::constant(dom, 1.0), tp, gs);
  CHECK(scan.grid.size() == 24);  // 4 weight exponents x 6 sphere points
  CHECK(scan.verdict == WidomVerdict::ConsistentInvertible);
  CHECK(scan.min_sigma == doctest::Approx(1.0).epsilon(1e-10));
  // every lattice exponent appears
  std::set<double> seen;
  for (const auto& pt : scan.grid) {
    REQUIRE(pt.alpha.size() == 1);
    seen.insert(pt.alpha[0]);
  }
  CHECK(seen == std::set<double>{0.0, 0.25, 0.5, 0.75});
}

TEST_CASE("scan rejects bad symbols and bad grids") {
  auto dom = DomainSpec::disk(8);
  Eigen::VectorXcd c(2);
  c << 1.0, 1.0;
  auto not_unimodular = LaurentSeries(0, c).boundary_values(dom);
  CHECK_THROWS_AS(widom_scan(dom, not_unimodular, neil_chain(), {}),
                  ConfigError);

  auto one = BoundaryFunction::constant(dom, 1.0);
  WidomGridSpec bad;
  bad.delta_points = 1;
  CHECK_THROWS_AS(widom_scan(dom, one, neil_chain(), bad), ConfigError);
  WidomGridSpec bad2;
  bad2.margin = 0.6;
  CHECK_THROWS_AS(widom_scan(dom, one, neil_chain(), bad2), ConfigError);
}

TEST_CASE("grid refinement keeps the scan stable") {
  auto dom = DomainSpec::disk(10);
  auto osc = oscillating_symbol(dom, 0.7);
  double coarse = -1;
  for (int np : {4, 8, 16}) {
    WidomGridSpec gs;
    gs.sigma_points = 2;
    gs.delta_points = np;
    auto scan = widom_scan(dom, osc, neil_chain(), gs);
    CHECK(scan.verdict == WidomVerdict::ConsistentInvertible);
    if (coarse >= 0) CHECK(std::abs(scan.min_sigma - coarse) < 0.02);
    coarse = scan.min_sigma;
  }
}

TEST_CASE("sigma_min moves continuously along parameter paths") {
  // doubling the sampling rate of a path should roughly halve the largest
  // adjacent jump; that is the discrete shadow of continuity in the data
  auto dom = DomainSpec::disk(10);
  auto osc = oscillating_symbol(dom, 0.7);
  auto w = WeightSpec::trivial(dom);
  double prev_jump = -1;
  for (int n : {8, 16, 32}) {
    double prev = -1, maxjump = 0;
    for (int k = 0; k <= n; ++k) {
      DeltaPoint at{ProjectiveValue::finite(cplx(1.2, 0.6) * (double(k) / n))};
      auto sp = build_constrained_space(dom, w, neil_chain(), at);
      const double s = min_singular_value(toeplitz_matrix(osc, sp));
      if (prev >= 0) maxjump = std::max(maxjump, std::abs(s - prev));
      prev = s;
    }
    if (prev_jump >= 0) CHECK(maxjump < 0.65 * prev_jump + 1e-9);
    prev_jump = maxjump;
  }

  auto doma = test_annulus(10);
  GamelinChain tp({Constraint::two_point(cplx(0.55), cplx(-0.55))});
  auto zbar = LaurentSeries::monomial(1).boundary_values(doma).conjugated();
  prev_jump = -1;
  for (int n : {8, 16, 32}) {
    double prev = -1, maxjump = 0;
    for (int k = 0; k <= n; ++k) {
      auto w2 = WeightSpec::z_power(doma,
                                    Eigen::VectorXd::Constant(1, double(k) / n));
      auto sp = build_constrained_space(doma, w2, tp, delta_gamma(tp));
      const double s = min_singular_value(toeplitz_matrix(zbar, sp));
      if (prev >= 0) maxjump = std::max(maxjump, std::abs(s - prev));
      prev = s;
    }
    if (prev_jump >= 0) CHECK(maxjump < 0.65 * prev_jump + 1e-9);
    prev_jump = maxjump;
  }
}

TEST_CASE("multiplication law holds through a padded middle space") {
  std::mt19937_64 rng(43);

  // disk: psi = 2 + z^2 preserves the derivation condition, so conj(psi)
  // times any bounded symbol factors exactly through the doubled truncation
  {
    auto dom = DomainSpec::disk(16);
    auto dom2 = dom.with_truncation(32);
    auto chain = neil_chain();
    auto sM = build_constrained_space(dom, WeightSpec::trivial(dom), chain,
                                      delta_gamma(chain));
    auto s2M = build_constrained_space(dom2, WeightSpec::trivial(dom2), chain,
                                       delta_gamma(chain));
    Eigen::VectorXcd pc(3);
    pc << 2.0, 0.0, 1.0;
    auto psib = LaurentSeries(0, pc).boundary_values(dom);
    for (int trial = 0; trial < 3; ++trial) {
      auto phi = random_symbol(dom, rng, 3);
      auto whole = toeplitz_matrix(psib.conjugated().product(phi), sM);
      auto left = toeplitz_block(psib.conjugated(), sM, s2M);
      auto right = toeplitz_block(phi, s2M, sM);
      CHECK((left * right - whole.mat).cwiseAbs().maxCoeff() < 1e-8);
    }
  }

  // annulus with a power weight: psi = 2 + z^2 + q^2 z^{-2} takes equal
  // values at the two chain points, so it multiplies the space into itself
  {
    auto dom = test_annulus(12);
    auto dom2 = dom.with_truncation(24);
    GamelinChain tp({Constraint::two_point(cplx(0.55), cplx(-0.55))});
    auto alpha = Eigen::VectorXd::Constant(1, 0.4);
    DeltaPoint at{ProjectiveValue::finite(cplx(0.3, -0.1))};
    auto sM = build_constrained_space(dom, WeightSpec::z_power(dom, alpha), tp, at);
    auto s2M =
        build_constrained_space(dom2, WeightSpec::z_power(dom2, alpha), tp, at);
    Eigen::VectorXcd pc(5);
    pc << 0.25, 0.0, 2.0, 0.0, 1.0;
    auto psib = LaurentSeries(-2, pc).boundary_values(dom);
    auto phi = random_symbol(dom, rng, 3);
    auto whole = toeplitz_matrix(psib.conjugated().product(phi), sM);
    auto left = toeplitz_block(psib.conjugated(), sM, s2M);
    auto right = toeplitz_block(phi, s2M, sM);
    CHECK((left * right - whole.mat).cwiseAbs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("blocks demand matching geometry and weights") {
  auto dom = test_annulus(8);
  GamelinChain tp({Constraint::two_point(cplx(0.55), cplx(-0.55))});
  auto s1 = build_constrained_space(
      dom, WeightSpec::z_power(dom, Eigen::VectorXd::Constant(1, 0.3)), tp,
      delta_gamma(tp));
  auto s2 = build_constrained_space(
      dom, WeightSpec::z_power(dom, Eigen::VectorXd::Constant(1, 0.4)), tp,
      delta_gamma(tp));
  auto phi = BoundaryFunction::constant(dom, 1.0);
  CHECK_THROWS_AS(toeplitz_block(phi, s1, s2), ShapeError);

  auto disk = DomainSpec::disk(8);
  auto s3 = build_constrained_space(disk, WeightSpec::trivial(disk),
                                    neil_chain(), delta_gamma(neil_chain()));
  auto phid = BoundaryFunction::constant(disk, 1.0);
  CHECK_THROWS_AS(toeplitz_block(phid, s3, s1), ShapeError);
}

TEST_CASE("invertible symbols pass the inverse product test") {
  auto dom = DomainSpec::disk(16);
  Eigen::VectorXcd pc(3);
  pc << 2.0, 0.0, 1.0;
  LaurentSeries psi(0, pc);
  auto rep = symbol_invertibility_check(dom, psi, neil_chain());
  CHECK(rep.invertible);
  CHECK(rep.min_abs == doctest::Approx(1.0).epsilon(1e-9));  // at z = +-i
  CHECK(rep.product_residual < 1e-6);
  REQUIRE(rep.sigma_trace.size() == 2);
  CHECK(rep.sigma_trace[0].first == 16);
  CHECK(rep.sigma_trace[1].first == 32);
  for (const auto& [m, s] : rep.sigma_trace) CHECK(s > 0.5);

  auto doma = test_annulus(12);
  GamelinChain tp({Constraint::two_point(cplx(0.55), cplx(-0.55))});
  Eigen::VectorXcd ac(5);
  ac << 0.25, 0.0, 2.0, 0.0, 1.0;
  LaurentSeries psia(-2, ac);
  auto repa = symbol_invertibility_check(doma, psia, tp);
  CHECK(repa.invertible);
  CHECK(repa.min_abs == doctest::Approx(0.75).epsilon(1e-9));
  CHECK(repa.product_residual < 1e-6);
  for (const auto& [m, s] : repa.sigma_trace) CHECK(s > 0.5);
}

TEST_CASE("vanishing symbols fail the invertibility check") {
  auto dom = DomainSpec::disk(16);
  auto rep = symbol_invertibility_check(dom, LaurentSeries::monomial(2),
                                        neil_chain());
  CHECK(!rep.invertible);
  CHECK(rep.min_abs < 1e-12);
  for (const auto& [m, s] : rep.sigma_trace) CHECK(s < 1e-10);

  // symbol off the chain: z has a nonzero derivative at the origin
  CHECK_THROWS_AS(
      symbol_invertibility_check(dom, LaurentSeries::monomial(1), neil_chain()),
      ConfigError);
  // degree beyond the truncation
  CHECK_THROWS_AS(
      symbol_invertibility_check(dom, LaurentSeries::monomial(17), neil_chain()),
      ShapeError);
}

TEST_CASE("plain pairing is dominated by dual weighted norms") {
  std::mt19937_64 rng(44);
  auto dom = test_annulus(10);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 5; ++trial) {
    auto f = random_symbol(dom, rng, 4);
    auto g = random_symbol(dom, rng, 4);
    const Eigen::VectorXd a = Eigen::VectorXd::Constant(1, u(rng));
    const double nf = std::sqrt(std::abs(weighted_inner_product(
        dom, f, f, WeightSpec::z_power(dom, (-a).eval()))));
    const double ng = std::sqrt(std::abs(
        weighted_inner_product(dom, g, g, WeightSpec::z_power(dom, a))));
    const cplx ip =
        weighted_inner_product(dom, f, g, WeightSpec::trivial(dom));
    CHECK(std::abs(ip) <= nf * ng + 1e-12 * (1.0 + nf * ng));
  }
}

TEST_CASE("unimodular symbols split norm between range and complement") {
  // for |phi| = 1 and a unit vector v in the space, |T v|^2 plus the part of
  // phi v outside the space must add back to 1
  auto check_space = [](const DomainSpec& dom, const ConstrainedSpace& sp,
                        const BoundaryFunction& phi, const WeightSpec& w) {
    auto t = toeplitz_matrix(phi, sp);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(t.mat, Eigen::ComputeFullV);
    for (int which : {0, t.dim() - 1}) {
      const Eigen::VectorXcd v = svd.matrixV().col(which);
      LaurentSeries vs(0, Eigen::VectorXcd::Zero(1));
      for (int j = 0; j < t.dim(); ++j)
        vs = vs.plus(column_series(sp, j).scaled(v[j]));
      auto phiv = phi.product(vs.boundary_values(dom));
      Eigen::VectorXcd proj(t.dim());
      for (int i = 0; i < t.dim(); ++i)
        proj[i] = weighted_inner_product(
            dom, phiv, column_series(sp, i).boundary_values(dom), w);
      // the matrix really is the compression of multiplication
      CHECK((proj - t.mat * v).cwiseAbs().maxCoeff() < 1e-10);
      const double total = std::abs(weighted_inner_product(dom, phiv, phiv, w));
      const double sigma = svd.singularValues()(which);
      CHECK(sigma * sigma + (total - proj.squaredNorm()) ==
            doctest::Approx(1.0).epsilon(1e-8));
    }
  };

  auto dom = DomainSpec::disk(16);
  auto w = WeightSpec::trivial(dom);
  check_space(dom, build_constrained_space(dom, w, neil_chain(),
                                           delta_gamma(neil_chain())),
              oscillating_symbol(dom, 0.3), w);

  auto doma = test_annulus(12);
  GamelinChain tp({Constraint::two_point(cplx(0.55), cplx(-0.55))});
  auto wa = WeightSpec::z_power(doma, Eigen::VectorXd::Constant(1, 0.5));
  check_space(doma, build_constrained_space(doma, wa, tp, delta_gamma(tp)),
              oscillating_symbol(doma, 0.3), wa);
}
