#include <catch2/catch_amalgamated.hpp>

#include "angelesco/ode_solutions.hpp"
#include "angelesco/verify.hpp"

using namespace angelesco;

namespace {

const PrecisionContext &ctx() {
  static PrecisionContext c(256, 1e-20);
  return c;
}
double dd(const Real &x) { return x.to_double(); }

} // namespace

TEST_CASE("q_j solve the third order equation, with q''' from the Cauchy oracle", "[ode]") {
  PrecisionGuard g(256);
  KernelParams p{0.5, 0.3};
  const Complex z(Real(1), Real(1));
  PrecisionContext inner(256, 1e-26), outer(256, 1e-16);
  for (int j = 1; j <= 3; ++j) {
    INFO("j=" << j);
    auto q = q_j(j, z, p, ctx(), CutSide::Upper, true);
    CHECK(dd(ode_residual_q(q, z, p).relative()) < 1e-12);
    // third derivative from the d2 entry by a Cauchy circle, independent of the t^3 moment
    SolutionTriple o = q;
    o.d3 = differentiate([&](const Complex &w) { return q_j(j, w, p, inner).d2; }, z, 1, outer, 0.2);
    CHECK(dd(ode_residual_q(o, z, p).relative()) < 1e-12);
  }
}

TEST_CASE("r_k solve the adjoint equation", "[ode]") {
  PrecisionGuard g(256);
  KernelParams p{0.5, 0.3};
  for (int k = 1; k <= 3; ++k) {
    INFO("k=" << k);
    auto r = r_k(k, Complex(1), p, ctx(), CutSide::Upper, true);
    CHECK(dd(ode_residual_r(r, Complex(1), p).relative()) < 1e-12);
  }
}

TEST_CASE("residuals stay small on a grid of points and parameters", "[ode]") {
  PrecisionGuard g(256);
  for (double beta : {-0.5, 2.5})
    for (double tau : {-1.0, 1.0}) {
      KernelParams p{beta, tau};
      for (const Complex &z : {Complex(Real(0.3), Real(0.2)), Complex(Real(3), Real(-1.5))}) {
        auto s = solution_set(z, p, ctx(), true);
        auto o = ode_residuals(s, z, p);
        for (int j = 0; j < 3; ++j) {
          INFO("beta=" << beta << " tau=" << tau << " j=" << j + 1);
          CHECK(o.q[j] < 1e-10);
          CHECK(o.r[j] < 1e-10);
        }
      }
    }
}

TEST_CASE("concomitant of q_j and r_k is the identity at z = 1", "[ode]") {
  PrecisionGuard g(256);
  KernelParams p{0.5, 0.3};
  auto s = solution_set(Complex(1), p, ctx(), false);
  auto d = kronecker_deviation(s, Complex(1), p);
  for (int j = 0; j < 3; ++j)
    for (int k = 0; k < 3; ++k) {
      INFO("j=" << j + 1 << " k=" << k + 1);
      CHECK(d[j][k] < 1e-10);
    }
}

TEST_CASE("diagonal concomitant is constant in z", "[ode]") {
  PrecisionGuard g(256);
  KernelParams p{0.3, -0.7};
  auto a = solution_set(Complex(1), p, ctx(), false);
  auto b = solution_set(Complex(2), p, ctx(), false);
  for (int j = 0; j < 3; ++j)
    for (int k = 0; k < 3; ++k) {
      Complex ca = concomitant(a.q[j], a.r[k], Complex(1), Complex(1), p);
      Complex cb = concomitant(b.q[j], b.r[k], Complex(2), Complex(2), p);
      CHECK(dd(abs(ca - cb)) < 1e-12);
    }
}

TEST_CASE("B[q2, r2] = 1 off the real axis", "[ode]") {
  PrecisionGuard g(256);
  KernelParams p{0.3, 0.2};
  const Complex z(Real(1), Real(0.5));
  auto q = q_j(2, z, p, ctx());
  auto r = r_k(2, z, p, ctx());
  CHECK(dd(abs(concomitant(q, r, z, z, p) - Complex(1))) < 1e-12);
}

TEST_CASE("conjugate points relate q1 to q2 and q3 to itself", "[ode]") {
  PrecisionGuard g(256);
  KernelParams p{0.5, 0.3};
  const Complex z(Real(1), Real(0.5));
  const Complex zb = conj(z);
  const Complex ph = expi(-2 * pi() * Real(p.beta));
  // Gamma1 is the reversed mirror image of Gamma2; Gamma3 is its own mirror image
  auto q1b = q_j(1, zb, p, ctx()), q2 = q_j(2, z, p, ctx());
  auto q3b = q_j(3, zb, p, ctx()), q3 = q_j(3, z, p, ctx());
  CHECK(dd(abs(q1b.value + ph * conj(q2.value)) / abs(q2.value)) < 1e-18);
  CHECK(dd(abs(q3b.value - ph * conj(q3.value)) / abs(q3.value)) < 1e-18);
}

TEST_CASE("q3 is real for real z when beta = tau = 0", "[ode]") {
  PrecisionGuard g(256);
  auto q = q_j(3, Complex(Real(1.7)), KernelParams{0, 0}, ctx());
  CHECK(dd(abs(q.value.im)) < 1e-60);
  CHECK(dd(abs(q.value.re)) > 1e-3);
}

TEST_CASE("B operators on simple inputs", "[ode]") {
  PrecisionGuard g(256);
  KernelParams p{0.4, 0.9};
  const Complex z(Real(1.5), Real(-0.5)), c(Real(2), Real(1));
  SolutionTriple konst{c, Complex(0), Complex(0), Complex(0), Real(0)};
  auto b = apply_B_operators(konst, z, p);
  CHECK(dd(abs(b.b2 - z * c)) < 1e-70);
  CHECK(dd(abs(b.b1 + c * (Real(p.beta) + 1))) < 1e-70);
  CHECK(dd(abs(b.b0 + c * Real(p.tau))) < 1e-70);
  SolutionTriple ident{z, Complex(1), Complex(0), Complex(0), Real(0)};
  CHECK(dd(abs(apply_B_operators(ident, z, p).b1 + z * (Real(p.beta) + 2))) < 1e-70);
}

TEST_CASE("concomitant regrouped through the B operators is bit-identical", "[ode]") {
  PrecisionGuard g(256);
  KernelParams p{0.5, 0.3};
  const Complex z(Real(0.8), Real(0.3));
  auto q = q_j(1, z, p, ctx());
  auto r = r_k(1, z, p, ctx());
  auto b = apply_B_operators(r, z, p);
  Complex direct = concomitant(q, r, z, z, p);
  Complex regrouped = b.b2 * q.d2 + b.b1 * q.d1 + b.b0 * q.value;
  CHECK(direct.re == regrouped.re);
  CHECK(direct.im == regrouped.im);
}

TEST_CASE("concomitant is bilinear", "[ode]") {
  PrecisionGuard g(256);
  KernelParams p{0.5, 0.3};
  const Complex z(1);
  auto q = q_j(2, z, p, ctx());
  auto r = r_k(3, z, p, ctx());
  const Complex c(Real(-1.25), Real(3));
  SolutionTriple rc{r.value * c, r.d1 * c, r.d2 * c, Complex(0), r.abs_error};
  CHECK(dd(abs(concomitant(q, rc, z, z, p) - c * concomitant(q, r, z, z, p))) < 1e-70);
  SolutionTriple zero{Complex(0), Complex(0), Complex(0), Complex(0), Real(0)};
  CHECK(dd(abs(concomitant(zero, zero, z, z, p))) == 0);
}

TEST_CASE("r2 derivative matches the Cauchy-circle oracle", "[ode]") {
  PrecisionGuard g(256);
  KernelParams p{0.5, 0.3};
  const Complex z(Real(1.2), Real(0.4));
  PrecisionContext inner(256, 1e-24), outer(256, 1e-14);
  auto r = r_k(2, z, p, inner);
  Complex o = differentiate([&](const Complex &w) { return r_k(2, w, p, inner).value; }, z, 1, outer);
  CHECK(dd(abs(o - r.d1) / abs(r.d1)) < 1e-12);
}

TEST_CASE("invalid solution requests", "[ode]") {
  PrecisionGuard g(256);
  CHECK_THROWS_AS(q_j(4, Complex(1), KernelParams{0, 0}, ctx()), DomainError);
  CHECK_THROWS_AS(r_k(0, Complex(1), KernelParams{0, 0}, ctx()), DomainError);
  CHECK_THROWS_AS(q_j(1, Complex(0), KernelParams{0, 0}, ctx()), DomainError);
  CHECK_THROWS_AS(q_j(1, Complex(1), KernelParams{-1, 0}, ctx()), DomainError);
}
