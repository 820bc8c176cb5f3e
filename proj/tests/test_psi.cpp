#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "angelesco/psi_parametrix.hpp"

using namespace angelesco;

namespace {

const PrecisionContext &ctx() {
  static PrecisionContext c(256, 1e-20);
  return c;
}
double dd(const Real &x) { return x.to_double(); }

CMatrix identity3() {
  const Complex o(0), l(1);
  return {{l, o, o}, {o, l, o}, {o, o, l}};
}

} // namespace

TEST_CASE("sectors follow the jump rays", "[psi]") {
  PrecisionGuard g(256);
  auto at = [](double a) { return sector_of(polar(Real(1), Real(a))); };
  CHECK(at(0.3) == Sector::Up0);
  CHECK(at(1.2) == Sector::UpMid);
  CHECK(at(2.8) == Sector::UpPi);
  CHECK(at(-0.3) == Sector::Down0);
  CHECK(at(-1.2) == Sector::DownMid);
  CHECK(at(-2.8) == Sector::DownPi);
  CHECK(psi(Complex(Real(1), Real(0.2)), KernelParams{0, 0}, ctx()).sector == Sector::Up0);
}

TEST_CASE("jump matrices", "[psi]") {
  PrecisionGuard g(256);
  CMatrix j = jump_matrix(PsiRay::ArgPi, 0.0);
  const double want[3][3] = {{0, 1, 0}, {-1, 0, 0}, {0, 0, 1}};
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c)
      CHECK(dd(abs(j(r, c) - Complex(Real(want[r][c])))) < 1e-70);
  // det Psi behaves like z^beta, so only the negative axis changes it
  for (PsiRay ray : all_psi_rays) {
    Complex want = ray == PsiRay::ArgPi ? expi(2 * pi() * Real(0.37)) : Complex(1);
    CHECK(dd(abs(determinant(jump_matrix(ray, 0.37)) - want)) < 1e-70);
  }
}

TEST_CASE("Psi jumps across pi/4 and pi", "[psi]") {
  PrecisionGuard g(256);
  KernelParams p{0.5, 0.4};
  for (PsiRay ray : {PsiRay::ArgPi4, PsiRay::ArgPi}) {
    INFO(psi_ray_name(ray));
    CHECK(dd(jump_relative_error(ray, 1.0, p, ctx(), BoundaryMethod::Offset)) < 1e-9);
    CHECK(dd(jump_relative_error(ray, 1.0, p, ctx(), BoundaryMethod::OnRay)) < 1e-9);
  }
}

TEST_CASE("psi_inverse is a two-sided inverse", "[psi]") {
  PrecisionGuard g(256);
  KernelParams p{0.3, 0.1};
  const Complex z(Real(1), Real(0.5));
  PsiValue v = psi(z, p, ctx());
  CMatrix inv = psi_inverse(z, p, ctx());
  CHECK(dd((inv * v.matrix - identity3()).norm_inf()) < 1e-10);
  CHECK(dd((v.matrix * inv - identity3()).norm_inf()) < 1e-10);
  // generic numerical inversion as an independent oracle
  CHECK(dd((inverse3(v.matrix) - inv).norm_inf() / inv.norm_inf()) < 1e-15);
}

TEST_CASE("psi_inverse in lower sectors", "[psi]") {
  PrecisionGuard g(256);
  KernelParams p{0.5, -0.6};
  for (double a : {-0.3, -1.2, -2.8}) {
    const Complex z = polar(Real(0.9), Real(a));
    CHECK(dd((psi_inverse(z, p, ctx()) * psi(z, p, ctx()).matrix - identity3()).norm_inf()) < 1e-10);
  }
}

TEST_CASE("column 1 in the first sector is e^{2 beta pi i} (q1, q1', q1'')", "[psi]") {
  PrecisionGuard g(256);
  KernelParams p{0.5, 0.3};
  const Complex z(Real(1), Real(0.3));
  PsiValue v = psi(z, p, ctx());
  auto q = q_j(1, z, p, ctx());
  const Complex e2 = expi(2 * pi() * Real(p.beta));
  CHECK(dd(abs(v.matrix(0, 0) - e2 * q.value)) < 1e-30);
  CHECK(dd(abs(v.matrix(1, 0) - e2 * q.d1)) < 1e-30);
  CHECK(dd(abs(v.matrix(2, 0) - e2 * q.d2)) < 1e-30);
}

TEST_CASE("boundary values on a ray agree with nearby interior values", "[psi]") {
  PrecisionGuard g(256);
  KernelParams p{0.5, 0.4};
  for (PsiRay ray : all_psi_rays)
    for (Side s : {Side::Plus, Side::Minus}) {
      INFO(psi_ray_name(ray));
      PsiValue on = psi_boundary(ray, s, 1.5, p, ctx());
      PsiValue near = psi_near_ray(ray, s, 1.5, 1e-12, p, ctx());
      CHECK(on.sector == near.sector);
      CHECK(dd((on.matrix - near.matrix).norm_inf() / on.matrix.norm_inf()) < 1e-10);
    }
}

TEST_CASE("Psi at conjugate points", "[psi]") {
  PrecisionGuard g(256);
  KernelParams p{0.5, 0.2};
  for (double a : {0.3, 1.2, 2.8}) {
    INFO("arg=" << a);
    const Complex z = polar(Real(1.3), Real(a));
    CMatrix up = psi(z, p, ctx()).matrix, down = psi(conj(z), p, ctx()).matrix;
    // Psi(conj z) = conj(Psi(z)) diag(-1, 1, 1)
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) {
        Complex want = conj(up(r, c));
        if (c == 0)
          want = -want;
        CHECK(dd(abs(down(r, c) - want) / up.norm_inf()) < 1e-25);
      }
  }
}

TEST_CASE("Psi matches its large-z expansion", "[psi]") {
  PrecisionGuard g(256);
  KernelParams p{0.5, 0.4};
  for (double dir : {0.4, 1.5, -2.0}) {
    INFO("direction=" << dir);
    auto d = check_asymptotics({10, 100}, dir, p, ctx());
    CHECK(dd(d[0]) < 0.5);
    CHECK(d[1] < d[0]);
  }
  CHECK_THROWS_AS(check_asymptotics({10}, M_PI / 4 + 0.05, p, ctx()), DomainError);
}

TEST_CASE("theta functions", "[psi]") {
  PrecisionGuard g(256);
  // theta_3 on the positive axis is real: -(3/2) z^{2/3} - tau z^{1/3}
  Complex t = theta_k(3, Complex(8), 0.5);
  CHECK(dd(abs(t - Complex(Real(-7)))) < 1e-70);
  CHECK(loglog_slope({1, 10, 100}, {1, 0.1, 0.01}) == Catch::Approx(-1.0));
}

TEST_CASE("Psi near the origin stays inside its envelope", "[psi]") {
  PrecisionGuard g(256);
  const double beta = 0.5;
  KernelParams p{beta, 0.2};
  // middle sectors: column 1 is O(z^beta), columns 2 and 3 are O(1); elsewhere all O(1)
  for (double a : {0.3, 1.2, 2.8, -0.3, -1.2, -2.8}) {
    const Complex z1 = polar(Real(1e-2), Real(a)), z2 = polar(Real(1e-3), Real(a));
    const bool middle = std::abs(std::abs(a) - M_PI / 2) < M_PI / 4;
    CMatrix big = psi(z1, p, ctx()).matrix, small = psi(z2, p, ctx()).matrix;
    for (int c = 0; c < 3; ++c) {
      double e1 = (middle && c == 0) ? std::pow(1e-2, beta) : 1.0;
      double e2 = (middle && c == 0) ? std::pow(1e-3, beta) : 1.0;
      double C = 0;
      for (int r = 0; r < 3; ++r)
        C = std::max(C, dd(abs(big(r, c))) / e1);
      C *= 2;
      for (int r = 0; r < 3; ++r) {
        INFO("arg=" << a << " r=" << r << " c=" << c);
        CHECK(dd(abs(small(r, c))) <= C * e2);
      }
    }
  }
}

TEST_CASE("evaluation at the origin is rejected", "[psi]") {
  PrecisionGuard g(256);
  CHECK_THROWS_AS(psi(Complex(0), KernelParams{0, 0}, ctx()), DomainError);
  CHECK_THROWS_AS(point_on_ray(PsiRay::Arg0, 0.0), DomainError);
}

TEST_CASE("theta_k at conjugate points", "[psi]") {
  PrecisionGuard g(256);
  const Complex z(Real(2), Real(1.5));
  for (int k = 1; k <= 3; ++k) {
    // conjugating z conjugates the cube roots, so omega^k pairs with omega^{3-k}
    int kc = k == 3 ? 3 : 3 - k;
    CHECK(dd(abs(theta_k(kc, conj(z), 0.7) - conj(theta_k(k, z, 0.7)))) < 1e-70);
  }
}

TEST_CASE("scaling r_k scales the identity by the same diagonal factor", "[psi]") {
  PrecisionGuard g(256);
  KernelParams p{0.3, 0.1};
  const Complex z(Real(1), Real(1));
  auto q = q_j(2, z, p, ctx());
  auto r = r_k(2, z, p, ctx());
  SolutionTriple r2{r.value * Real(2), r.d1 * Real(2), r.d2 * Real(2), Complex(0), r.abs_error};
  CHECK(dd(abs(concomitant(q, r2, z, z, p) - Complex(2))) < 1e-12);
}
