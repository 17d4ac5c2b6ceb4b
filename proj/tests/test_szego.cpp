#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "hardy/errors.hpp"
#include "hardy/szego.hpp"

using namespace hardy;

namespace {

BoundaryFunction cos_theta(const DomainSpec& dom) {
  BoundaryFunction f(1, dom.truncation());
  f.at(0, 1) = 0.5;
  f.at(0, -1) = 0.5;
  return f;
}

// e^{cos theta} with exact Fourier data from the pointwise exponential
BoundaryFunction rho_exp_cos(const DomainSpec& dom) {
  return boundary_exp(dom, cos_theta(dom));
}

// |1 + 0.4 z|^2 on the unit circle: 1.16 + 0.4 e^{i t} + 0.4 e^{-i t}
BoundaryFunction rho_poly(const DomainSpec& dom) {
  BoundaryFunction f(1, dom.truncation());
  f.at(0, 0) = 1.16;
  f.at(0, 1) = 0.4;
  f.at(0, -1) = 0.4;
  return f;
}

// random smooth strictly positive density: exp of a small random real
// trigonometric polynomial on each circle
BoundaryFunction random_rho(const DomainSpec& dom, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  BoundaryFunction h(dom.components(), dom.truncation());
  for (int c = 0; c < dom.components(); ++c) {
    h.at(c, 0) = 0.3 * gauss(rng);
    for (int k = 1; k <= 4; ++k) {
      const cplx a = 0.25 * std::pow(0.5, k) * cplx(gauss(rng), gauss(rng));
      h.at(c, k) = a;
      h.at(c, -k) = std::conj(a);
    }
  }
  return boundary_exp(dom, h);
}

const GamelinChain& neil_chain() {
  static const GamelinChain chain({Constraint::derivation(cplx(0.0), 1)});
  return chain;
}

}  // namespace

TEST_CASE("constant density decomposes to nothing") {
  for (const auto& dom :
       {DomainSpec::disk(16), DomainSpec::annulus(0.5, -1, 16)}) {
    const auto dec =
        decompose_log_rho(dom, BoundaryFunction::constant(dom, 1.0));
    CHECK(dec.c_rho == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(dec.gamma.coeff_norm() < 1e-12);
    CHECK(dec.zeta.coeff_norm() < 1e-12);
    for (int i = 0; i < dec.n.size(); ++i) CHECK(std::abs(dec.n[i]) < 1e-12);
    CHECK(dec.residual < 1e-12);
  }
}

TEST_CASE("disk split of e^{cos theta} is the cosine's Fourier split") {
  const auto dom = DomainSpec::disk(24);
  const auto dec = decompose_log_rho(dom, rho_exp_cos(dom));
  CHECK(std::abs(dec.c_rho) < 1e-12);
  CHECK(std::abs(dec.gamma.coeff(1) - cplx(0.5)) < 1e-12);
  CHECK(std::abs(dec.gamma.coeff(0)) < 1e-12);
  for (int k = 2; k <= 24; ++k) CHECK(std::abs(dec.gamma.coeff(k)) < 1e-12);
  CHECK(std::abs(dec.zeta.coeff(0, -1) - cplx(0.5)) < 1e-12);
  CHECK(dec.n.size() == 0);
  CHECK(dec.residual < 1e-12);
}

TEST_CASE("per-circle-constant annulus density has genuine N content") {
  const auto dom = DomainSpec::annulus(0.5, -1, 32);
  const double s = 0.3;
  const double c = 2.0 * s * std::log(dom.q());  // log rho on the inner circle
  BoundaryFunction rho(2, dom.truncation());
  rho.at(0, 0) = 1.0;
  rho.at(1, 0) = std::exp(c);
  const auto dec = decompose_log_rho(dom, rho);

  // c_rho is the harmonic measure of the inner circle times c; at x0 =
  // sqrt(q) that measure is exactly 1/2
  CHECK(dec.c_rho == doctest::Approx(0.5 * c).epsilon(1e-10));
  CHECK(std::abs(dec.gamma.evaluate(dom, cplx(dom.x0())) - dec.c_rho) < 1e-8);
  CHECK(dec.residual < 1e-8);

  // oracle for the N coefficient: <log rho, lam> = -c exactly (lam pairs a
  // function against the difference of the two circle means), so the
  // orthogonal projection gives n1 = -c / ||lam||^2
  const auto lam = dom.n_basis_density(3 * dom.truncation());
  const double lam2 = pair_with_m(dom, lam.product(lam)).real();
  CHECK(dec.n.size() == 1);
  CHECK(dec.n[0] != 0.0);
  CHECK(dec.n[0] == doctest::Approx(-c / lam2).epsilon(1e-2));
}

TEST_CASE("decomposition parts are mutually orthogonal under the basepoint measure") {
  std::mt19937_64 rng(7);
  const auto w_of = [](const DomainSpec& d) { return WeightSpec::trivial(d); };
  for (const auto& dom :
       {DomainSpec::disk(32), DomainSpec::annulus(0.5, -1, 32)}) {
    for (int trial = 0; trial < 3; ++trial) {
      const auto rho = random_rho(dom, rng);
      const auto dec = decompose_log_rho(dom, rho);
      const auto gb = dec.gamma.boundary_values(dom);
      CHECK(std::abs(weighted_inner_product(dom, gb, dec.zeta, w_of(dom))) <
            1e-8);
      if (dom.sigma() == 1) {
        const auto nl = dom.n_basis_density(dom.truncation()).scaled(dec.n[0]);
        CHECK(std::abs(weighted_inner_product(dom, gb, nl, w_of(dom))) < 1e-8);
        CHECK(std::abs(weighted_inner_product(dom, dec.zeta, nl, w_of(dom))) <
              1e-8);
      }
      CHECK(dec.residual < 1e-8);
    }
  }
}

TEST_CASE("mean-free densities split conjugate-symmetrically") {
  std::mt19937_64 rng(11);
  for (const auto& dom :
       {DomainSpec::disk(24), DomainSpec::annulus(0.5, -1, 24)}) {
    const auto rho = random_rho(dom, rng);
    const auto dec0 = decompose_log_rho(dom, rho);
    // remove the mean and redo: now zeta must be the conjugate of gamma
    // with the basepoint value subtracted
    const auto rho1 = rho.scaled(std::exp(-dec0.c_rho));
    const auto dec = decompose_log_rho(dom, rho1);
    CHECK(std::abs(dec.c_rho) < 1e-10);
    CHECK(std::abs(dec.gamma.evaluate(dom, dom.kind() == DomainKind::Disk
                                               ? cplx(0.0)
                                               : cplx(dom.x0()))) < 1e-8);
    const auto gstar = dec.gamma.boundary_values(dom).conjugated().plus(
        BoundaryFunction::constant(
            dom, -std::conj(dec.gamma.evaluate(
                     dom, dom.kind() == DomainKind::Disk ? cplx(0.0)
                                                         : cplx(dom.x0())))));
    for (int c = 0; c < dom.components(); ++c) {
      const auto a = gstar.sample(c, dom.grid_size());
      const auto b = dec.zeta.sample(c, dom.grid_size());
      CHECK((a - b).cwiseAbs().maxCoeff() < 1e-8);
    }
  }
}

TEST_CASE("nonpositive densities are rejected") {
  const auto dom = DomainSpec::disk(12);
  BoundaryFunction bad(1, 12);
  bad.at(0, 0) = 0.4;
  bad.at(0, 1) = 0.5;
  bad.at(0, -1) = 0.5;  // 0.4 + cos: dips negative
  CHECK_THROWS_AS(decompose_log_rho(dom, bad), DomainError);
}

TEST_CASE("omega from the analytic part") {
  const auto dom = DomainSpec::disk(24);

  SUBCASE("zero gamma lands on the identity parameters") {
    const GamelinChain chain({Constraint::two_point(cplx(0.3), cplx(-0.1)),
                              Constraint::derivation(cplx(0.2), 1)});
    const auto d = omega_from_gamma(dom, LaurentSeries::constant(0.0), chain);
    const auto id = delta_gamma(chain);
    REQUIRE(d.size() == 2);
    CHECK(ProjectiveValue::approx_eq(d[0], id[0], 1e-12));
    CHECK(ProjectiveValue::approx_eq(d[1], id[1], 1e-12));
  }

  SUBCASE("gamma = z/2 on the derivation chain gives t = 2") {
    const auto d = omega_from_gamma(
        dom, LaurentSeries::monomial(1, 0.5), neil_chain());
    REQUIRE(d.size() == 1);
    REQUIRE(!d[0].is_infinite());
    CHECK(std::abs(d[0].value() - cplx(2.0)) < 1e-12);
  }

  SUBCASE("gamma = z on a two-point chain gives e^{a-b}") {
    const GamelinChain chain({Constraint::two_point(cplx(0.3), cplx(-0.3))});
    const auto d = omega_from_gamma(dom, LaurentSeries::monomial(1), chain);
    REQUIRE(d.size() == 1);
    CHECK(std::abs(d[0].value() - std::exp(cplx(0.6))) < 1e-12);
  }
}

TEST_CASE("kernel side on reference densities") {
  const auto dom = DomainSpec::disk(24);

  SUBCASE("trivial density, derivation chain") {
    const auto sides =
        szego_rhs(dom, BoundaryFunction::constant(dom, 1.0), neil_chain());
    CHECK(sides.rhs == doctest::Approx(1.0).epsilon(1e-10));
    REQUIRE(sides.omega.size() == 1);
    CHECK(sides.omega[0].is_infinite());
  }

  SUBCASE("e^{cos theta} and the derivation chain meet at 1.25") {
    const auto sides = szego_rhs(dom, rho_exp_cos(dom), neil_chain());
    CHECK(std::abs(sides.c_rho) < 1e-12);
    CHECK(std::abs(sides.omega[0].value() - cplx(2.0)) < 1e-10);
    CHECK(sides.rhs == doctest::Approx(1.25).epsilon(1e-9));
  }

  SUBCASE("|1 + 0.4 z|^2 gives 1.16") {
    const auto sides = szego_rhs(dom, rho_poly(dom), neil_chain());
    CHECK(std::abs(sides.omega[0].value() - cplx(2.5)) < 1e-10);
    CHECK(sides.rhs == doctest::Approx(1.16).epsilon(1e-9));
  }
}

TEST_CASE("extremal side on reference densities") {
  const auto dom = DomainSpec::disk(24);
  const auto one = BoundaryFunction::constant(dom, 1.0);

  SUBCASE("trivial density, no chain: the best correction is zero") {
    CHECK(szego_lhs_bruteforce(dom, one, GamelinChain(), 16) ==
          doctest::Approx(1.0).epsilon(1e-12));
  }

  SUBCASE("trivial density survives the derivation constraint unchanged") {
    CHECK(szego_lhs_bruteforce(dom, one, neil_chain(), 16) ==
          doctest::Approx(1.0).epsilon(1e-12));
  }

  SUBCASE("e^{cos theta} converges to 1.25 from above") {
    double prev = 1e300;
    for (int d : {6, 10, 16, 24}) {
      const double lhs = szego_lhs_bruteforce(dom, rho_exp_cos(dom),
                                              neil_chain(), d);
      CHECK(lhs <= prev + 1e-12);
      prev = lhs;
    }
    CHECK(prev == doctest::Approx(1.25).epsilon(1e-9));
  }

  SUBCASE("empty chain reproduces the classical geometric-mean value") {
    // exp(int log rho dm) = 1 for both reference densities
    CHECK(szego_lhs_bruteforce(dom, rho_exp_cos(dom), GamelinChain(), 24) ==
          doctest::Approx(1.0).epsilon(1e-6));
    CHECK(szego_lhs_bruteforce(dom, rho_poly(dom), GamelinChain(), 24) ==
          doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("degree-one reference constants") {
  const auto dom = DomainSpec::disk(24);

  SUBCASE("trivial density") {
    const auto nc = neil_constants(dom, BoundaryFunction::constant(dom, 1.0));
    CHECK(nc.c_rho == doctest::Approx(0.0));
    CHECK(std::abs(nc.lambda) < 1e-14);
    CHECK(std::abs(nc.sigma1 - cplx(1.0)) < 1e-14);
    CHECK(std::abs(nc.sigma2) < 1e-14);
  }

  SUBCASE("polynomial density: lambda agrees with the analytic route") {
    const auto nc = neil_constants(dom, rho_poly(dom));
    CHECK(std::abs(nc.lambda - cplx(0.4)) < 1e-12);
  }

  SUBCASE("e^{cos theta}: lambda is the first modified Bessel value") {
    const auto nc = neil_constants(dom, rho_exp_cos(dom));
    // independent quadrature oracle for (1/2pi) int e^{cos t} e^{-it} dt
    cplx acc = 0.0;
    const int nq = 4096;
    for (int j = 0; j < nq; ++j) {
      const double t = 2.0 * M_PI * j / nq;
      acc += std::exp(std::cos(t)) * std::exp(cplx(0.0, -t));
    }
    acc /= nq;
    CHECK(std::abs(nc.lambda - acc) < 1e-12);
    CHECK(nc.lambda.real() == doctest::Approx(0.5651591039924851).epsilon(1e-12));

    // the reference formula's kernel value disagrees with the extremal
    // side for this density, while the analytic-part route matches it
    const double rhs_reference =
        std::exp(nc.c_rho) * (1.0 + std::norm(nc.lambda));
    const double lhs =
        szego_lhs_bruteforce(dom, rho_exp_cos(dom), neil_chain(), 24);
    CHECK(std::abs(rhs_reference - lhs) > 0.05);
    const auto sides = szego_rhs(dom, rho_exp_cos(dom), neil_chain());
    CHECK(std::abs(sides.rhs - lhs) < 1e-9);
  }

  SUBCASE("only the disk is supported") {
    const auto ann = DomainSpec::annulus(0.5, -1, 16);
    CHECK_THROWS_AS(
        neil_constants(ann, BoundaryFunction::constant(ann, 1.0)),
        UnsupportedError);
  }
}

TEST_CASE("scaling a density moves only the total mass") {
  std::mt19937_64 rng(23);
  for (const auto& dom :
       {DomainSpec::disk(24), DomainSpec::annulus(0.5, -1, 24)}) {
    const GamelinChain chain =
        dom.kind() == DomainKind::Disk
            ? neil_chain()
            : GamelinChain({Constraint::two_point(cplx(0.8), cplx(-0.8))});
    for (int trial = 0; trial < 3; ++trial) {
      const auto rho = random_rho(dom, rng);
      const double c = 0.7 * (trial + 1);
      const auto a = szego_rhs(dom, rho, chain);
      const auto b = szego_rhs(dom, rho.scaled(std::exp(c)), chain);
      REQUIRE(a.omega.size() == b.omega.size());
      for (size_t i = 0; i < a.omega.size(); ++i)
        CHECK(ProjectiveValue::distance(a.omega[i], b.omega[i]) < 1e-10);
      if (a.n.size() > 0)
        CHECK(std::abs(a.n[0] - b.n[0]) < 1e-10);
      CHECK(b.rhs == doctest::Approx(a.rhs * std::exp(c)).epsilon(1e-8));
      const double la = szego_lhs_bruteforce(dom, rho, chain, 12);
      const double lb =
          szego_lhs_bruteforce(dom, rho.scaled(std::exp(c)), chain, 12);
      CHECK(lb == doctest::Approx(la * std::exp(c)).epsilon(1e-8));
    }
  }
}

TEST_CASE("both sides meet: disk chains") {
  const auto dom = DomainSpec::disk(32);
  std::mt19937_64 rng(31);
  const GamelinChain mixed({Constraint::two_point(cplx(0.3), cplx(-0.3)),
                            Constraint::derivation(cplx(0.0), 1)});
  for (int trial = 0; trial < 3; ++trial) {
    const auto rho = random_rho(dom, rng);
    const auto sides = szego_rhs(dom, rho, mixed);
    const double lhs = szego_lhs_bruteforce(dom, rho, mixed, 32);
    CHECK(std::abs(lhs - sides.rhs) < 1e-3 * std::max(1.0, sides.rhs));
  }
}

TEST_CASE("both sides meet: annulus with N content") {
  const auto dom = DomainSpec::annulus(0.5, -1, 48);
  const GamelinChain chain({Constraint::two_point(cplx(0.8), cplx(-0.8))});
  // oscillating outer factor times a per-circle-constant part
  BoundaryFunction h(2, dom.truncation());
  h.at(0, 1) = 0.2;
  h.at(0, -1) = 0.2;
  h.at(1, 1) = 0.2 * dom.q();
  h.at(1, -1) = 0.2 * dom.q();
  h.at(1, 0) = -0.05;
  const auto rho = boundary_exp(dom, h);

  const auto dec = decompose_log_rho(dom, rho);
  CHECK(dec.residual < 1e-8);
  CHECK(dec.n[0] != 0.0);

  const auto sides = szego_rhs(dom, rho, chain);
  const double l24 = szego_lhs_bruteforce(dom, rho, chain, 24);
  const double l48 = szego_lhs_bruteforce(dom, rho, chain, 48);
  CHECK(std::abs(l48 - sides.rhs) <= std::abs(l24 - sides.rhs) + 1e-12);
  CHECK(std::abs(l48 - sides.rhs) < 1e-2);
}

TEST_CASE("schedule report") {
  const auto dom = DomainSpec::disk(24);
  const auto rep = szego_schedule(dom, rho_exp_cos(dom), neil_chain(),
                                  {8, 16, 24});
  CHECK(rep.basis_degree == 24);
  CHECK(rep.rhs == doctest::Approx(1.25).epsilon(1e-9));
  CHECK(rep.lhs == doctest::Approx(1.25).epsilon(1e-9));
  CHECK(rep.gap < 1e-8);
  CHECK(!rep.lhs_warned);
  REQUIRE(rep.trace.size() == 3);
  for (size_t i = 1; i < rep.trace.size(); ++i)
    CHECK(rep.trace[i].second <= rep.trace[i - 1].second + 1e-9);
  CHECK_THROWS_AS(
      szego_schedule(dom, rho_exp_cos(dom), neil_chain(), {16, 16}),
      ConfigError);
  CHECK_THROWS_AS(szego_schedule(dom, rho_exp_cos(dom), neil_chain(), {}),
                  ConfigError);
}
