#include <catch2/catch_amalgamated.hpp>

#include <thread>

#include "angelesco/contours.hpp"
#include "angelesco/linalg.hpp"
#include "angelesco/ode_solutions.hpp"
#include "angelesco/quadrature.hpp"

using namespace angelesco;

namespace {

double d(const Real &x) { return x.to_double(); }
double dist(const Complex &a, const Complex &b) { return abs(a - b).to_double(); }

const PrecisionContext &ctx() {
  static PrecisionContext c(256, 1e-20);
  return c;
}

} // namespace

TEST_CASE("Real carries the working precision of its scope", "[precision]") {
  PrecisionGuard g(200);
  Real a(1);
  CHECK(a.precision() == 200);
  {
    PrecisionGuard inner(512);
    Real b(2);
    CHECK(b.precision() == 512);
    Real c = a; // copies keep their source precision
    CHECK(c.precision() == 200);
  }
  CHECK(working_bits() == 200);
  CHECK(Real("0.1").str(10) == "1.000000000e-01");
  CHECK(abs(sqrt(Real(2)) * sqrt(Real(2)) - 2) < exp2i(-190));
}

TEST_CASE("precision is per thread", "[precision][concurrency]") {
  PrecisionGuard g(300);
  long seen = 0;
  std::thread t([&] {
    PrecisionGuard g2(100);
    Real x(1);
    seen = x.precision();
  });
  t.join();
  CHECK(seen == 100);
  CHECK(Real(1).precision() == 300);
}

TEST_CASE("complex elementary functions", "[precision]") {
  PrecisionGuard g(256);
  Complex z(Real(0.3), Real(-1.2));
  CHECK(dist(exp(log(z)), z) < 1e-70);
  CHECK(dist(pow(z, long(3)), z * z * z) < 1e-70);
  CHECK(dist(sqrt(z) * sqrt(z), z) < 1e-70);
  CHECK(abs(abs(expi(Real(0.7))) - 1) < exp2i(-250));
  // lifted powers differ from principal ones by the sheet factor
  Complex p = pow_lifted(Real(2), 3 * pi() / 2, Real(0.5));
  Complex q = pow(Complex(Real(0), Real(-2)), Real(0.5));
  CHECK(dist(p, -q) < 1e-70);
}

TEST_CASE("PrecisionContext validation", "[precision]") {
  CHECK_THROWS_AS(PrecisionContext(32, 1e-5), DomainError);
  CHECK_THROWS_AS(PrecisionContext(64, 1e-20), DomainError); // below 2^(1-bits) * 1000
  CHECK_NOTHROW(PrecisionContext(64, 1e-14));
  CHECK_THROWS_AS(PrecisionContext(256, -1.0), DomainError);
  CHECK_THROWS_AS(PrecisionContext(256, 1e-20, 0), DomainError);
}

TEST_CASE("Gauss-Jacobi rules integrate their weight exactly", "[quadrature]") {
  PrecisionGuard g(256);
  const Real a(0.5), b(-0.25);
  GaussRule r = gauss_jacobi(12, a, b);
  // int_{-1}^{1} (1-x)^a (1+x)^b dx = 2^{a+b+1} B(a+1, b+1)
  Real sum(0), first(0);
  for (std::size_t i = 0; i < r.x.size(); ++i) {
    sum += r.w[i];
    first += r.w[i] * r.x[i];
  }
  Real exact = pow(Real(2), a + b + 1) * beta_fn(a + 1, b + 1);
  CHECK(d(abs(sum - exact)) < 1e-70);
  // first moment: (b - a)/(a + b + 2) times the zeroth
  CHECK(d(abs(first - exact * (b - a) / (a + b + 2))) < 1e-70);
}

TEST_CASE("Kronrod extension is exact to degree 31", "[quadrature]") {
  PrecisionGuard g(256);
  const KronrodRule &k = gauss_kronrod(10);
  REQUIRE(k.x.size() == 21);
  for (int deg : {0, 10, 20, 30, 31}) {
    Real s(0);
    for (std::size_t i = 0; i < k.x.size(); ++i)
      s += k.wk[i] * pow(k.x[i], long(deg));
    Real exact = deg % 2 ? Real(0) : Real(2) / (deg + 1);
    CHECK(d(abs(s - exact)) < 1e-65);
  }
  // degree 32 is not integrated exactly
  Real s(0);
  for (std::size_t i = 0; i < k.x.size(); ++i)
    s += k.wk[i] * pow(k.x[i], 32L);
  CHECK(d(abs(s - Real(2) / 33)) > 1e-20);
}

TEST_CASE("integrate_path on elementary contours", "[quadrature]") {
  PrecisionGuard g(256);
  SECTION("constant along a segment") {
    ContourPath p{"seg", {{Line(Complex(0), Complex(Real(1), Real(1)))}}, BranchCut::None};
    auto r = integrate_path([](const Complex &) { return Complex(1); }, p, ctx());
    CHECK(dist(r.value, Complex(Real(1), Real(1))) < 1e-70);
    CHECK(r.evaluations > 0);
  }
  SECTION("1/t around the unit circle") {
    ContourPath p{"circle", {{Arc(Complex(0), Real(1), Real(0), 2 * pi())}}, BranchCut::None};
    auto r = integrate_path([](const Complex &t) { return Complex(1) / t; }, p, ctx());
    CHECK(dist(r.value, Complex(Real(0), 2 * pi())) < 1e-60);
  }
  SECTION("t^-3 e^t on the clockwise Hankel loop gives -2 pi i / Gamma(3)") {
    // the loop runs clockwise around the origin, so the textbook value changes sign
    ContourPath p = gamma0(1.0, 0.0, 0.0, TruncationPolicy::from(ctx()));
    auto r = integrate_path([](const PathPoint &t) { return exp(t.z) / pow(t.z, 3L); }, p, ctx());
    CHECK(dist(r.value, Complex(Real(0), -pi())) < 1e-20);
    CHECK(d(r.abs_error_estimate) < 1e-19);
  }
}

TEST_CASE("integration is linear and odd under reversal", "[quadrature]") {
  PrecisionGuard g(256);
  ContourPath p = gamma_j(2, TruncationPolicy::from(ctx()));
  auto f = [](const Complex &t) { return exp(-(Complex(1) / (t * t) * Real(0.5)) - t) * t; };
  auto h = [](const Complex &t) { return exp(-(Complex(1) / (t * t) * Real(0.5)) - t) / (t * t); };
  auto rf = integrate_path(f, p, ctx());
  auto rh = integrate_path(h, p, ctx());
  const Complex a(Real(0.7), Real(-2)), b(Real(-1.5), Real(0.25));
  auto rc = integrate_path([&](const Complex &t) { return a * f(t) + b * h(t); }, p, ctx());
  Real bound = abs(a) * rf.abs_error_estimate + abs(b) * rh.abs_error_estimate + rc.abs_error_estimate;
  CHECK(abs(rc.value - (a * rf.value + b * rh.value)) <= bound + exp2i(-200));
  auto rr = integrate_path(f, p.reversed(), ctx());
  CHECK(abs(rr.value + rf.value) <= rf.abs_error_estimate + rr.abs_error_estimate + exp2i(-200));
}

TEST_CASE("tighter tolerance does not move away from a high precision reference", "[quadrature]") {
  PrecisionGuard g(512);
  PrecisionContext ref(512, 1e-40);
  ContourPath p = gamma0(2.0, 0.5, 0.3, TruncationPolicy::from(ref));
  auto f = [](const PathPoint &t) {
    Complex inv = Complex(1) / t.z;
    return exp(inv * Real(1.0) - inv * inv * Real(2) + t.z + Complex(log(t.r) * Real(-3.3), t.theta * Real(-3.3)));
  };
  Complex truth = integrate_path(f, p, ref).value;
  double prev = 1e300;
  for (double tol : {1e-10, 5e-11, 2.5e-11, 1e-15}) {
    PrecisionGuard g2(256);
    PrecisionContext c(256, tol);
    double err = dist(integrate_path(f, gamma0(2.0, 0.5, 0.3, TruncationPolicy::from(c)), c).value, truth);
    CHECK(err <= prev * 1.0000001 + 1e-60);
    prev = err;
  }
}

TEST_CASE("non-convergence names the contour", "[quadrature]") {
  PrecisionGuard g(256);
  PrecisionContext tight(256, 1e-30, 3);
  ContourPath p{"wiggle", {{Line(Complex(0), Complex(Real(30)))}}, BranchCut::None};
  try {
    integrate_path([](const Complex &t) { return Complex(sin(t.re * 20)); }, p, tight);
    FAIL("expected NonConvergence");
  } catch (const NonConvergence &e) {
    CHECK(std::string(e.what()).find("wiggle") != std::string::npos);
  }
}

TEST_CASE("Cauchy-circle derivatives", "[quadrature]") {
  PrecisionGuard g(256);
  CHECK(dist(differentiate([](const Complex &z) { return exp(z); }, Complex(0), 2, ctx()), Complex(1)) < 1e-25);
  CHECK(dist(differentiate([](const Complex &z) { return z * z * z; }, Complex(1), 3, ctx()), Complex(6)) < 1e-25);
  CHECK_THROWS_AS(differentiate([](const Complex &z) { return z; }, Complex(0), 4, ctx()), DomainError);
}

TEST_CASE("analytic q1 derivative matches the Cauchy-circle oracle", "[quadrature][ode]") {
  PrecisionGuard g(256);
  KernelParams p{0, 0};
  const Complex z(1);
  PrecisionContext inner(256, 1e-24), outer(256, 1e-14);
  auto q = q_j(1, z, p, inner);
  Complex oracle = differentiate([&](const Complex &w) { return q_j(1, w, p, inner).value; }, z, 1, outer);
  CHECK(d(abs(oracle - q.d1) / abs(q.d1)) < 1e-12);
}

TEST_CASE("LU solve, transposed solve and determinant", "[linalg]") {
  PrecisionGuard g(256);
  RMatrix a{{Real(2), Real(1), Real(0)}, {Real(1), Real(3), Real(1)}, {Real(0), Real(1), Real(4)}};
  LU<Real> lu(a);
  CHECK(d(abs(lu.determinant() - 18)) < 1e-70);
  auto x = lu.solve({Real(1), Real(2), Real(3)});
  auto back = a * RMatrix{{x[0]}, {x[1]}, {x[2]}};
  for (int i = 0; i < 3; ++i)
    CHECK(d(abs(back(i, 0) - (i + 1))) < 1e-70);
  auto y = lu.solve_transposed({Real(1), Real(0), Real(0)});
  auto backt = a.transpose() * RMatrix{{y[0]}, {y[1]}, {y[2]}};
  CHECK(d(abs(backt(0, 0) - 1)) < 1e-70);
  RMatrix s{{Real(1), Real(2)}, {Real(2), Real(4)}};
  LU<Real> ls(s);
  CHECK(ls.singular());
  CHECK_THROWS_AS(ls.solve({Real(1), Real(1)}), PrecisionInsufficient);
}
