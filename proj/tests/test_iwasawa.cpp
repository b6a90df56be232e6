#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "minkcmc/iwasawa.hpp"
#include "minkcmc/potentials.hpp"
#include "support.hpp"

using namespace minkcmc;
using namespace minkcmc::testing;

namespace {

LoopMatrix diag_const(double rho, int trunc) {
  LoopMatrix b(trunc);
  Mat2 d = Mat2::Zero();
  d(0, 0) = rho;
  d(1, 1) = 1.0 / rho;
  b.set_coeff(0, d);
  return b;
}

PlusFactor as_plus(const LoopMatrix& b) { return plus_factor_from_loop(b); }

// Multiply B on the right by I + c E12 lambda, shifting mu by c*rho while
// keeping the determinant and rho exact.
LoopMatrix shift_mu(const LoopMatrix& b, cplx c) {
  LoopMatrix u = LoopMatrix::identity(b.trunc());
  Mat2 e = Mat2::Zero();
  e(0, 1) = c;
  u.set_coeff(1, e);
  return loop_mul(b, u);
}

}  // namespace

TEST_CASE("h_probe reference values") {
  const int n = 8;
  CHECK(h_probe(as_plus(LoopMatrix::identity(n))) == 0.0);

  LoopMatrix b1 = LoopMatrix::identity(n);
  Mat2 e = Mat2::Zero();
  e(0, 1) = 1.0;
  b1.set_coeff(1, e);  // rho = 1, mu = 1
  CHECK(h_probe(as_plus(b1)) == doctest::Approx(3.0));

  CHECK(h_probe(as_plus(diag_const(0.5, n))) == doctest::Approx(-15.0 / 16.0));
}

TEST_CASE("plus factor extraction validates shape") {
  CHECK_THROWS_AS(plus_factor_from_loop(make_omega(1, 4)), std::invalid_argument);
  LoopMatrix neg(4);
  Mat2 d = Mat2::Zero();
  d(0, 0) = -1.0;
  d(1, 1) = -1.0;
  neg.set_coeff(0, d);
  CHECK_THROWS_AS(plus_factor_from_loop(neg), std::invalid_argument);
  PlusFactor p = as_plus(diag_const(2.0, 4));
  CHECK(p.rho == doctest::Approx(2.0));
  CHECK(p.mu == cplx(0.0));
}

TEST_CASE("factoring an element of the real form returns it unchanged") {
  Rng rng(41);
  for (int trial = 0; trial < 5; ++trial) {
    LoopMatrix f = random_unitary_loop(rng, 3, 0.5, 16);
    IwasawaResult r = iwasawa_factor(f);
    REQUIRE(r.ok);
    CHECK(r.eps == 1);
    CHECK(r.b.rho == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(max_coeff_diff(r.f, f) < 1e-9);
    CHECK(max_coeff_diff(r.b.b, LoopMatrix::identity(16)) < 1e-9);
  }
  LoopMatrix g = loop_mul(branch_swap_loop(16), random_unitary_loop(rng, 2, 0.5, 16));
  IwasawaResult r2 = iwasawa_factor(g);
  REQUIRE(r2.ok);
  CHECK(r2.eps == -1);
  CHECK(max_coeff_diff(r2.f, g) < 1e-9);
}

TEST_CASE("factoring a plus loop returns the identity frame") {
  Rng rng(42);
  double rho = 0.0;
  LoopMatrix b = random_plus_loop(rng, 4, 0.5, 16, &rho);
  IwasawaResult r = iwasawa_factor(b);
  REQUIRE(r.ok);
  CHECK(r.eps == 1);
  CHECK(max_coeff_diff(r.f, LoopMatrix::identity(16)) < 1e-9);
  CHECK(r.b.rho == doctest::Approx(rho).epsilon(1e-9));
}

TEST_CASE("generate-then-factor recovers both factors") {
  Rng rng(43);
  for (int trial = 0; trial < 15; ++trial) {
    LoopMatrix f0 = random_unitary_loop(rng, 3, 0.6, 24, trial % 3 == 0);
    LoopMatrix b0 = random_plus_loop(rng, 4, 0.6, 24);
    LoopMatrix phi = loop_mul(f0, b0);
    IwasawaResult r = iwasawa_factor(phi);
    REQUIRE(r.ok);
    CHECK(r.residual < 1e-9);
    CHECK(max_coeff_diff(r.f, f0) < 1e-8);
    CHECK(max_coeff_diff(r.b.b, b0) < 1e-8);
    CHECK(r.eps == 1);
  }
}

TEST_CASE("factorization is idempotent") {
  Rng rng(44);
  LoopMatrix f0 = random_unitary_loop(rng, 3, 0.5, 20);
  LoopMatrix b0 = random_plus_loop(rng, 3, 0.5, 20);
  IwasawaResult r = iwasawa_factor(loop_mul(f0, b0));
  REQUIRE(r.ok);
  IwasawaResult rf = iwasawa_factor(r.f);
  REQUIRE(rf.ok);
  CHECK(max_coeff_diff(rf.f, r.f) < 1e-9);
  CHECK(max_coeff_diff(rf.b.b, LoopMatrix::identity(20)) < 1e-9);
  IwasawaResult rb = iwasawa_factor(r.b.b);
  REQUIRE(rb.ok);
  CHECK(max_coeff_diff(rb.f, LoopMatrix::identity(20)) < 1e-9);
}

TEST_CASE("right diagonal gauge moves into the unitary factor") {
  Rng rng(45);
  LoopMatrix f0 = random_unitary_loop(rng, 2, 0.5, 16);
  LoopMatrix b0 = random_plus_loop(rng, 3, 0.5, 16);
  LoopMatrix phi = loop_mul(f0, b0);
  IwasawaResult base = iwasawa_factor(phi);
  REQUIRE(base.ok);

  const double beta = 0.77;
  LoopMatrix d(16);
  Mat2 dm = Mat2::Zero();
  dm(0, 0) = std::exp(kI * (beta / 2));
  dm(1, 1) = std::exp(-kI * (beta / 2));
  d.set_coeff(0, dm);
  IwasawaResult gauged = iwasawa_factor(loop_mul(phi, d));
  REQUIRE(gauged.ok);
  CHECK(max_coeff_diff(gauged.f, loop_mul(base.f, d)) < 1e-8);
  CHECK(gauged.b.rho == doctest::Approx(base.b.rho).epsilon(1e-9));
  CHECK(h_probe(gauged.b) == doctest::Approx(h_probe(base.b)).epsilon(1e-8));
}

TEST_CASE("loops in the small cells are rejected and classified") {
  IwasawaOptions opt;
  CHECK_FALSE(iwasawa_factor(make_omega(1, 12), opt).ok);
  CHECK_FALSE(iwasawa_factor(make_omega(2, 12), opt).ok);

  CHECK(cell_classify(LoopMatrix::identity(12)) == CellTag::BigCellPlus);
  Rng rng(46);
  LoopMatrix minus = loop_mul(branch_swap_loop(12), random_unitary_loop(rng, 2, 0.4, 12));
  CHECK(cell_classify(minus) == CellTag::BigCellMinus);
  CHECK(cell_classify(make_omega(1, 12)) == CellTag::P1);
  CHECK(cell_classify(make_omega(2, 12)) == CellTag::P2);
  CHECK(cell_classify(make_omega(3, 12)) == CellTag::Higher);
  CHECK(cell_classify(make_omega(4, 12)) == CellTag::Higher);
}

TEST_CASE("products with omega_1 land where the switch analysis says") {
  // B = I: B omega_1 = omega_1 sits on the first boundary stratum.
  CHECK(cell_classify(make_omega(1, 12)) == CellTag::P1);
  // rho = 1, mu = 1 has h = 3 > 0: B omega_1 stays in the big cell.
  LoopMatrix b1 = LoopMatrix::identity(12);
  Mat2 e = Mat2::Zero();
  e(0, 1) = 1.0;
  b1.set_coeff(1, e);
  CHECK(cell_classify(loop_mul(b1, make_omega(1, 12))) == CellTag::BigCellPlus);
  // rho = 1/2, mu = 0 has h < 0: the product crosses to the minus branch.
  CHECK(cell_classify(loop_mul(diag_const(0.5, 12), make_omega(1, 12))) ==
        CellTag::BigCellMinus);
}

TEST_CASE("switch factorization reference cases") {
  const int n = 10;
  SUBCASE("identity goes through the boundary case") {
    SwitchResult s = switch_factor(as_plus(LoopMatrix::identity(n)));
    CHECK(s.kase == SwitchResult::Case::Boundary);
    CHECK(s.theta == doctest::Approx(0.0));
    CHECK(max_coeff_diff(s.x, make_omega(1, n)) < 1e-15);
    CHECK(max_coeff_diff(s.b_prime, LoopMatrix::identity(n)) < 1e-15);
  }
  SUBCASE("rho = 1, mu = 1: positive h") {
    LoopMatrix b1 = LoopMatrix::identity(n);
    Mat2 e = Mat2::Zero();
    e(0, 1) = 1.0;
    b1.set_coeff(1, e);
    SwitchResult s = switch_factor(as_plus(b1));
    CHECK(s.kase == SwitchResult::Case::HPositive);
    CHECK(std::abs(s.v - cplx(1.0 / std::sqrt(3.0))) < 1e-15);
    CHECK(std::abs(s.u - cplx(2.0 / std::sqrt(3.0))) < 1e-15);
  }
  SUBCASE("rho = 1/2, mu = 0: negative h") {
    SwitchResult s = switch_factor(as_plus(diag_const(0.5, n)));
    CHECK(s.kase == SwitchResult::Case::HNegative);
    CHECK(std::abs(s.u) / std::abs(s.v) == doctest::Approx(0.25));
    CHECK(std::abs(s.u) * std::abs(s.u) - std::abs(s.v) * std::abs(s.v) ==
          doctest::Approx(-1.0));
  }
}

TEST_CASE("switch factorization reconstructs B omega_1 exactly") {
  Rng rng(47);
  const int n = 16;
  int seen_pos = 0, seen_neg = 0;
  for (int trial = 0; trial < 40; ++trial) {
    LoopMatrix b = random_plus_loop(rng, 4, 0.7, n);
    PlusFactor p = as_plus(b);
    SwitchResult s = switch_factor(p);
    LoopMatrix lhs = loop_mul(s.x, s.b_prime);
    LoopMatrix rhs = loop_mul(b, make_omega(1, n));
    CHECK(max_coeff_diff(lhs, rhs) < 1e-11);
    // The new factor must be a plus loop.
    CHECK(s.b_prime.mass_outside(0, n) < 1e-11);
    if (s.kase == SwitchResult::Case::HPositive) {
      ++seen_pos;
      CHECK(std::abs(s.u) / std::abs(s.v) ==
            doctest::Approx(std::abs(p.mu + p.rho) * p.rho).epsilon(1e-12));
      CHECK(static_cast<double>(s.eps) * (std::norm(s.u) - std::norm(s.v)) ==
            doctest::Approx(1.0));
    }
    if (s.kase == SwitchResult::Case::HNegative) ++seen_neg;
  }
  CHECK(seen_pos > 0);
  CHECK(seen_neg > 0);
}

TEST_CASE("switch factorization boundary case on constructed loops") {
  Rng rng(48);
  const int n = 16;
  for (int trial = 0; trial < 10; ++trial) {
    LoopMatrix b = random_plus_loop(rng, 3, 0.6, n);
    PlusFactor p = as_plus(b);
    // Move mu to the exact boundary |(mu + rho) rho| = 1.
    double alpha = 2.0 * std::numbers::pi * trial / 10.0;
    cplx mu_target = std::exp(kI * alpha) / p.rho - p.rho;
    LoopMatrix bb = shift_mu(b, (mu_target - p.mu) / p.rho);
    PlusFactor pb = as_plus(bb);
    CHECK(std::abs(std::abs((pb.mu + pb.rho) * pb.rho) - 1.0) < 1e-13);
    SwitchResult s = switch_factor(pb);
    CHECK(s.kase == SwitchResult::Case::Boundary);
    LoopMatrix lhs = loop_mul(s.x, s.b_prime);
    LoopMatrix rhs = loop_mul(bb, make_omega(1, n));
    CHECK(max_coeff_diff(lhs, rhs) < 1e-12);
    CHECK(s.b_prime.mass_outside(0, n) < 1e-12);
    // And the boundary product really is on the first stratum.
    if (trial < 3) CHECK(cell_classify(rhs) == CellTag::P1);
  }
}

TEST_CASE("factorization along the singular curve of the helix potential") {
  // On the real axis the frame is unitary: factorization must succeed with
  // B = I and h = 0 within integration accuracy, and just off the axis h
  // moves linearly with -2y.
  SingularPotential p = SingularPotential::make(
      AnalyticFunction({cplx(-0.25, 0.25)}), AnalyticFunction({cplx(0.0, 0.5)}),
      AnalyticFunction({cplx(1.0)}));
  LoopPotentialFn xi = potential_fn(p, 20);
  FrameIntegrationOptions fopt;
  fopt.trunc = 20;
  fopt.h_step = 0.005;

  FrameResult on_axis = integrate_frame(xi, 0.0, LoopMatrix::identity(20), 0.5, fopt);
  IwasawaResult r = iwasawa_factor(on_axis.phi);
  REQUIRE(r.ok);
  CHECK(r.eps == 1);
  CHECK(std::abs(h_probe(r.b)) < 1e-8);

  for (double y : {0.01, -0.01, 0.05}) {
    FrameResult off = integrate_frame(xi, 0.0, LoopMatrix::identity(20), cplx(0.5, y), fopt);
    IwasawaResult ry = iwasawa_factor(off.phi);
    REQUIRE(ry.ok);
    CHECK(h_probe(ry.b) == doctest::Approx(-2.0 * y).epsilon(0.15));
  }
}
