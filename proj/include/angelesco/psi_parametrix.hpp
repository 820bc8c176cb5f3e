#pragma once

// The 3x3 model parametrix Psi assembled sector by sector from q_1, q_2, q_3,
// its inverse from the r_k rows, jump matrices and the large-z frame.

#include <array>
#include <string>
#include <vector>

#include "linalg.hpp"
#include "ode_solutions.hpp"

namespace angelesco {

// open sectors cut out by the six rays, named by their arg range
enum class Sector { Up0, UpMid, UpPi, Down0, DownMid, DownPi };

inline const char *sector_name(Sector s) {
  switch (s) {
  case Sector::Up0: return "(0,pi/4)";
  case Sector::UpMid: return "(pi/4,3pi/4)";
  case Sector::UpPi: return "(3pi/4,pi)";
  case Sector::Down0: return "(-pi/4,0)";
  case Sector::DownMid: return "(-3pi/4,-pi/4)";
  case Sector::DownPi: return "(-pi,-3pi/4)";
  }
  return "?";
}

inline bool upper_half(Sector s) { return s == Sector::Up0 || s == Sector::UpMid || s == Sector::UpPi; }

// Sector containing z; throws OnContour when z sits on a ray.
inline Sector sector_of(const Complex &z) {
  if (iszero(z.re) && iszero(z.im))
    throw DomainError("Psi is not evaluated at 0");
  if (iszero(z.im) || abs(z.re) == abs(z.im))
    throw OnContour("point lies on a jump ray; request a boundary value instead");
  const bool up = z.im > 0;
  const bool steep = abs(z.im) > abs(z.re);
  if (steep)
    return up ? Sector::UpMid : Sector::DownMid;
  if (z.re > 0)
    return up ? Sector::Up0 : Sector::Down0;
  return up ? Sector::UpPi : Sector::DownPi;
}

// Psi = Q C, with Q = [q_j^{(m)}] (row m, column j); rows of C index q_1..q_3.
inline CMatrix combination_matrix(Sector s, double beta) {
  const Real b(beta);
  const Complex e1 = expi(pi() * b), e2 = expi(2 * pi() * b);
  const Complex o(0), l(1);
  switch (s) {
  case Sector::Up0: return {{e2, o, o}, {o, o, l}, {o, e1, o}};
  case Sector::UpMid: return {{e2, o, o}, {l, o, l}, {o, e1, o}};
  case Sector::UpPi: return {{e2, o, o}, {l, o, l}, {-e2, e1, o}};
  case Sector::Down0: return {{o, o, -e2}, {l, o, o}, {o, e1, o}};
  case Sector::DownMid: return {{e2, o, -e2}, {l, o, o}, {o, e1, o}};
  case Sector::DownPi: return {{e2, o, -e2}, {l, o, o}, {l, e1, o}};
  }
  throw DomainError("unknown sector");
}

struct PsiValue {
  CMatrix matrix;
  Sector sector;
};

namespace detail {

inline CutSide cut_side_of(Sector s) { return upper_half(s) ? CutSide::Upper : CutSide::Lower; }

inline CMatrix q_matrix(const Complex &z, const KernelParams &p, const PrecisionContext &ctx, CutSide side) {
  CMatrix Q(3, 3);
  for (int j = 1; j <= 3; ++j) {
    SolutionTriple t = q_j(j, z, p, ctx, side);
    Q(0, j - 1) = std::move(t.value);
    Q(1, j - 1) = std::move(t.d1);
    Q(2, j - 1) = std::move(t.d2);
  }
  return Q;
}

// row k holds (B0 r_k, B1 r_k, B2 r_k), so that R Q is the concomitant table
inline CMatrix r_matrix(const Complex &z, const KernelParams &p, const PrecisionContext &ctx, CutSide side) {
  CMatrix R(3, 3);
  for (int k = 1; k <= 3; ++k) {
    BOperators b = apply_B_operators(r_k(k, z, p, ctx, side), z, p);
    R(k - 1, 0) = std::move(b.b0);
    R(k - 1, 1) = std::move(b.b1);
    R(k - 1, 2) = std::move(b.b2);
  }
  return R;
}

} // namespace detail

// The formula of sector s evaluated at z, which may lie on the closure of s.
inline PsiValue psi_in_sector(const Complex &z, Sector s, const KernelParams &p, const PrecisionContext &ctx) {
  PrecisionGuard guard(ctx.bits);
  return {detail::q_matrix(z, p, ctx, detail::cut_side_of(s)) * combination_matrix(s, p.beta), s};
}

inline CMatrix psi_inverse_in_sector(const Complex &z, Sector s, const KernelParams &p, const PrecisionContext &ctx) {
  PrecisionGuard guard(ctx.bits);
  return inverse3(combination_matrix(s, p.beta)) * detail::r_matrix(z, p, ctx, detail::cut_side_of(s));
}

inline PsiValue psi(const Complex &z, const KernelParams &p, const PrecisionContext &ctx) {
  return psi_in_sector(z, sector_of(z), p, ctx);
}

inline CMatrix psi_inverse(const Complex &z, const KernelParams &p, const PrecisionContext &ctx) {
  return psi_inverse_in_sector(z, sector_of(z), p, ctx);
}

enum class Side { Plus, Minus };

// sector on the + (left of orientation) or - side of a ray
inline Sector adjacent_sector(PsiRay ray, Side side) {
  const bool plus = side == Side::Plus;
  switch (ray) {
  case PsiRay::Arg0: return plus ? Sector::Up0 : Sector::Down0;
  case PsiRay::ArgPi4: return plus ? Sector::UpMid : Sector::Up0;
  case PsiRay::Arg3Pi4: return plus ? Sector::UpMid : Sector::UpPi;
  case PsiRay::ArgPi: return plus ? Sector::UpPi : Sector::DownPi;
  case PsiRay::ArgM3Pi4: return plus ? Sector::DownPi : Sector::DownMid;
  case PsiRay::ArgMPi4: return plus ? Sector::Down0 : Sector::DownMid;
  }
  throw DomainError("unknown ray");
}

inline Complex point_on_ray(PsiRay ray, double radius) {
  if (!(radius > 0))
    throw DomainError("radius must be positive");
  if (ray == PsiRay::Arg0)
    return Complex(Real(radius), Real(0));
  if (ray == PsiRay::ArgPi)
    return Complex(Real(-radius), Real(0));
  return polar(Real(radius), psi_ray_angle(ray));
}

// Boundary value on a ray: the adjacent sector's formula is analytic up to
// and across the ray, so it is evaluated on the ray itself.
inline PsiValue psi_boundary(PsiRay ray, Side side, double radius, const KernelParams &p,
                             const PrecisionContext &ctx) {
  PrecisionGuard guard(ctx.bits);
  return psi_in_sector(point_on_ray(ray, radius), adjacent_sector(ray, side), p, ctx);
}

inline CMatrix psi_inverse_boundary(PsiRay ray, Side side, double radius, const KernelParams &p,
                                    const PrecisionContext &ctx) {
  PrecisionGuard guard(ctx.bits);
  return psi_inverse_in_sector(point_on_ray(ray, radius), adjacent_sector(ray, side), p, ctx);
}

inline CMatrix jump_matrix(PsiRay ray, double beta) {
  const Real b(beta);
  const Complex e1 = expi(pi() * b), em1 = expi(-pi() * b);
  const Complex o(0), l(1);
  switch (ray) {
  case PsiRay::Arg0: return {{o, o, l}, {o, l, o}, {Complex(-1), o, o}};
  case PsiRay::ArgPi4:
  case PsiRay::ArgMPi4: return {{l, o, o}, {o, l, o}, {l, o, l}};
  case PsiRay::Arg3Pi4: return {{l, o, o}, {e1, l, o}, {o, o, l}};
  case PsiRay::ArgPi: return {{o, e1, o}, {-e1, o, o}, {o, o, l}};
  case PsiRay::ArgM3Pi4: return {{l, o, o}, {em1, l, o}, {o, o, l}};
  }
  throw DomainError("unknown ray");
}

// psi() at the ray point rotated by delta radians into the requested side;
// the sector is chosen by psi() itself, independently of adjacent_sector
inline PsiValue psi_near_ray(PsiRay ray, Side side, double radius, double delta, const KernelParams &p,
                             const PrecisionContext &ctx) {
  PrecisionGuard guard(ctx.bits);
  // + is counterclockwise of an outward ray and clockwise of an inward one
  double s = (side == Side::Plus) == psi_ray_outward(ray) ? 1 : -1;
  return psi(polar(Real(radius), psi_ray_angle(ray) + Real(s * delta)), p, ctx);
}

enum class BoundaryMethod { OnRay, Offset };

// ||Psi_+ - Psi_- J|| / ||Psi_-|| in the max-row-sum norm
inline Real jump_relative_error(PsiRay ray, double radius, const KernelParams &p, const PrecisionContext &ctx,
                                BoundaryMethod method = BoundaryMethod::OnRay, double delta = 1e-14) {
  PrecisionGuard guard(ctx.bits);
  const bool on = method == BoundaryMethod::OnRay;
  PsiValue plus = on ? psi_boundary(ray, Side::Plus, radius, p, ctx) : psi_near_ray(ray, Side::Plus, radius, delta, p, ctx);
  PsiValue minus =
      on ? psi_boundary(ray, Side::Minus, radius, p, ctx) : psi_near_ray(ray, Side::Minus, radius, delta, p, ctx);
  CMatrix d = plus.matrix - minus.matrix * jump_matrix(ray, p.beta);
  return d.norm_inf() / minus.matrix.norm_inf();
}

struct AsymptoticFrame {
  Complex omega;
  CMatrix L_plus, L_minus, B_plus, B_minus;

  static AsymptoticFrame make(double beta) {
    AsymptoticFrame f;
    f.omega = expi(2 * pi() / 3);
    const Complex w = f.omega, w2 = f.omega * f.omega, l(1), m(-1), o(0);
    f.L_plus = {{-w2, l, w}, {l, m, m}, {-w, l, w2}};
    f.L_minus = {{w, l, w2}, {m, m, m}, {w2, l, w}};
    const Complex ph = expi(pi() * Real(beta) / 3), phc = conj(ph);
    f.B_plus = {{ph, o, o}, {o, l, o}, {o, o, phc}};
    f.B_minus = {{phc, o, o}, {o, l, o}, {o, o, ph}};
    return f;
  }
};

// theta_k(z) = -(3/2) w^k z^{2/3} - tau w^{2k} z^{1/3}, principal roots
inline Complex theta_k(int k, const Complex &z, double tau) {
  const Complex w = expi(2 * pi() * k / 3);
  const Complex z13 = pow(z, Real(1) / 3);
  return -(w * z13 * z13 * Real(1.5)) - w * w * z13 * Real(tau);
}

// || L^{-1} diag(z^{1/3},1,z^{-1/3})^{-1} Psi e^{-Theta} B^{-1} / (sqrt(2pi/3) e^{tau^2/6} z^{beta/3}) - I ||_1
inline Real asymptotic_deviation(const Complex &z, const KernelParams &p, const PrecisionContext &ctx) {
  PrecisionGuard guard(ctx.bits);
  PsiValue v = psi(z, p, ctx);
  const bool up = z.im > 0;
  AsymptoticFrame f = AsymptoticFrame::make(p.beta);
  std::array<int, 3> order = up ? std::array<int, 3>{1, 3, 2} : std::array<int, 3>{2, 3, 1};
  const CMatrix &B = up ? f.B_plus : f.B_minus;
  const CMatrix &L = up ? f.L_plus : f.L_minus;
  CMatrix M = v.matrix;
  for (int c = 0; c < 3; ++c) {
    Complex s = exp(-theta_k(order[c], z, p.tau)) / B(c, c);
    for (int r = 0; r < 3; ++r)
      M(r, c) *= s;
  }
  const Complex z13 = pow(z, Real(1) / 3);
  for (int c = 0; c < 3; ++c) {
    M(0, c) /= z13;
    M(2, c) *= z13;
  }
  Complex pref = pow(z, Real(p.beta) / 3) * (sqrt(2 * pi() / 3) * exp(Real(p.tau) * Real(p.tau) / 6));
  CMatrix N = inverse3(L) * M;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) {
      N(r, c) /= pref;
      if (r == c)
        N(r, c) -= Complex(1);
    }
  return N.norm_1();
}

inline std::vector<Real> check_asymptotics(const std::vector<double> &radii, double direction, const KernelParams &p,
                                           const PrecisionContext &ctx) {
  PrecisionGuard guard(ctx.bits);
  for (PsiRay r : all_psi_rays) {
    double d = std::remainder(direction - psi_ray_angle(r).to_double(), 2 * M_PI);
    if (std::abs(d) < 0.1)
      throw DomainError("direction within 0.1 rad of a jump ray");
  }
  std::vector<Real> out;
  for (double rho : radii)
    out.push_back(asymptotic_deviation(polar(Real(rho), Real(direction)), p, ctx));
  return out;
}

// least-squares slope of log y against log x
inline double loglog_slope(const std::vector<double> &x, const std::vector<double> &y) {
  const std::size_t n = x.size();
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += std::log(x[i]) / n;
    my += std::log(y[i]) / n;
  }
  double num = 0, den = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double a = std::log(x[i]) - mx;
    num += a * (std::log(y[i]) - my);
    den += a * a;
  }
  return num / den;
}

} // namespace angelesco
