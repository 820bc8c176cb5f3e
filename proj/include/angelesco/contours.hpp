#pragma once

// Concrete contours: the Hankel loop and its companion loop for q0/r0,
// the three q-contours and three r-contours (with tails rotated for
// continuation in arg z), and the six rays of the Psi jump contour.

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "path.hpp"
#include "precision.hpp"

namespace angelesco {

// |f| <= exp(log_prefactor) r^power exp(-rate r) along a tail, r the distance
// from the origin (rays) or the distance travelled along the tail (lines).
struct DecayBound {
  double log_prefactor = 0;
  double power = 0;
  double rate = 1;
};

struct TruncationPolicy {
  double tail_tol = 1e-22;

  static TruncationPolicy from(const PrecisionContext &ctx) {
    // one hundredth of the quadrature tolerance
    return {std::max(ctx.quad_tol.to_double() / 100, 1e-300)};
  }
};

// smallest R >= start where the dropped tail integral is below tail_tol
inline double truncation_length(const DecayBound &b, const TruncationPolicy &pol, double start) {
  if (!(b.rate > 0))
    throw DomainError("tail decay rate must be positive");
  if (!(pol.tail_tol > 0))
    throw DomainError("tail_tol must be positive");
  const double lt = std::log(pol.tail_tol);
  const double p = std::max(b.power, 0.0);
  // int_R^inf r^p e^{-c r} dr <= R^p e^{-c R} / (c - p/R) for c R > p
  auto log_tail = [&](double R) {
    double denom = b.rate - p / R;
    if (denom <= 0)
      return 1e300;
    return b.log_prefactor + p * std::log(R) - b.rate * R - std::log(denom);
  };
  double R = std::max(start, 1e-3);
  R = std::max(R, (b.log_prefactor - lt) / b.rate);
  for (int it = 0; it < 200 && log_tail(R) > lt; ++it)
    R = std::max(R * 1.05, R + 0.5 / b.rate);
  if (log_tail(R) > lt)
    throw DomainError("tail truncation failed to converge");
  return R;
}

struct Gamma0Shape {
  double center = 0; // real center of the turning semicircle
  double half_height = 1;
};

inline double gamma0_default_radius(double x) { return std::max(1.0, std::pow(std::abs(x), 2.0 / 3.0)); }

// Clockwise Hankel loop: in from -infinity along Im t = h, around the right
// semicircle |t - c| = h, out to -infinity along Im t = -h. Principal
// arguments throughout; never meets (-infinity, 0].
inline ContourPath gamma0(double x, double tau, double beta, const TruncationPolicy &pol, int max_power_shift = 2,
                          std::optional<Gamma0Shape> shape = std::nullopt) {
  if (x == 0)
    throw DomainError("gamma0 needs x != 0");
  Gamma0Shape s = shape.value_or(Gamma0Shape{0, gamma0_default_radius(x)});
  const double h = s.half_height, c = s.center;
  if (!(h > 0))
    throw DomainError("gamma0 half-height must be positive");
  // exponent of t ranges over -beta-3 .. -beta-3+max_power_shift
  double p = -beta - 3 + max_power_shift;
  DecayBound bound{std::abs(tau * x) / h + x * x / (2 * h * h) + c + std::max(p, 0.0) * (std::log1p(std::abs(c) + h) + std::log(2.0)) +
                       (p < 0 ? p * std::log(h) : 0.0),
                   std::max(p, 0.0), 1.0};
  double L = truncation_length(bound, pol, 1.0);
  Real hr(h), cr(c), left(c - L);
  ContourPath path{"Gamma0", {}, BranchCut::NegativeReal};
  path.segments.push_back({Line(Complex(left, hr), Complex(cr, hr)), true});
  path.segments.push_back({Arc(Complex(cr), hr, pi() / 2, -pi() / 2)});
  path.segments.push_back({Line(Complex(cr, -hr), Complex(left, -hr)), true});
  return path;
}

inline double gamma0_hat_default_radius(double y) { return std::max(1.0, std::sqrt(std::abs(y))); }

// Counterclockwise circle s = rho (1 + e^{i phi}), phi from -pi to pi: leaves
// and re-enters the origin vertically.
inline ContourPath gamma0_hat(double y, double tau, double beta, const TruncationPolicy &pol,
                              std::optional<double> radius = std::nullopt) {
  (void)tau;
  (void)beta;
  (void)pol;
  if (y == 0)
    throw DomainError("gamma0_hat needs y != 0");
  Real rho(radius.value_or(gamma0_hat_default_radius(y)));
  ContourPath path{"Gamma0hat", {}, BranchCut::NegativeReal};
  path.segments.push_back({Arc(Complex(rho), rho, -pi(), pi())});
  return path;
}

// A second admissible loop of the same homotopy class: up the imaginary
// axis's negative half, across a rectangle, back down the positive half.
inline ContourPath gamma0_hat_box(double height, double width) {
  Real a(height), b(width);
  Real h = pi() / 2;
  ContourPath path{"Gamma0hat-box", {}, BranchCut::NegativeReal};
  path.segments.push_back({Ray(-h, Real(0), a)});
  path.segments.push_back({Line(Complex(Real(0), -a), Complex(b, -a))});
  path.segments.push_back({Line(Complex(b, -a), Complex(b, a))});
  path.segments.push_back({Line(Complex(b, a), Complex(Real(0), a))});
  path.segments.push_back({Ray(h, a, Real(0))});
  return path;
}

// Geometry shared by the q- and r-contours at a given direction phi = arg z.
struct SolutionContourShape {
  Real phi;        // arg z in [-pi, pi]
  Real rho;        // turning radius
  Real tail_end;   // truncation radius of the tail ray
};

inline double q_arc_radius(double abs_z) { return std::min(std::pow(abs_z, -1.0 / 3.0), 20.0); }
inline double r_arc_radius(double abs_z) { return 0.75 * q_arc_radius(abs_z); }

namespace detail {
inline void push_arc(ContourPath &p, const Real &rho, const Real &a, const Real &b) {
  if (a != b)
    p.segments.push_back({Arc(Complex(0), rho, a, b)});
}
inline ContourPath reversed_named(const ContourPath &p, std::string name) {
  ContourPath r = p.reversed();
  r.name = std::move(name);
  return r;
}
} // namespace detail

// Contours for q_j. The tail leaves along lifted angle pi - phi, where
// e^{zt} decays fastest; lifted angles start in (0, 2 pi) at phi = 0.
inline ContourPath gamma_j(int j, const SolutionContourShape &s) {
  const Real td = pi() - s.phi;
  const Real approach2 = pi() / 8, approach1 = 2 * pi() - pi() / 8;
  ContourPath p{"Gamma" + std::to_string(j), {}, BranchCut::PositiveReal};
  p.segments.push_back({Ray(td, s.tail_end, s.rho), true});
  switch (j) {
  case 2:
    detail::push_arc(p, s.rho, td, approach2);
    p.segments.push_back({Ray(approach2, s.rho, Real(0))});
    return p;
  case 1:
    detail::push_arc(p, s.rho, td, approach1);
    p.segments.push_back({Ray(approach1, s.rho, Real(0))});
    return detail::reversed_named(p, "Gamma1");
  case 3:
    detail::push_arc(p, s.rho, td, pi());
    p.segments.push_back({Ray(pi(), s.rho, Real(0))});
    return detail::reversed_named(p, "Gamma3");
  default:
    throw DomainError("contour index must be 1, 2 or 3");
  }
}

// Contours for r_k; tails along lifted angle -phi (k=2) or 2 pi - phi (k=1).
inline ContourPath gamma_hat_k(int k, const SolutionContourShape &s) {
  const Real up = pi() / 2, down = 3 * pi() / 2;
  ContourPath p{"Gamma" + std::to_string(k) + "hat", {}, BranchCut::PositiveReal};
  switch (k) {
  case 2: {
    Real td = -s.phi;
    p.segments.push_back({Ray(td, s.tail_end, s.rho), true});
    detail::push_arc(p, s.rho, td, up);
    p.segments.push_back({Ray(up, s.rho, Real(0))});
    return p;
  }
  case 1: {
    Real td = 2 * pi() - s.phi;
    p.segments.push_back({Ray(td, s.tail_end, s.rho), true});
    detail::push_arc(p, s.rho, td, down);
    p.segments.push_back({Ray(down, s.rho, Real(0))});
    return p;
  }
  case 3:
    p.segments.push_back({Ray(down, Real(0), s.rho)});
    detail::push_arc(p, s.rho, down, up);
    p.segments.push_back({Ray(up, s.rho, Real(0))});
    return p;
  default:
    throw DomainError("contour index must be 1, 2 or 3");
  }
}

// Canonical shapes at z = 1 (phi = 0) for plotting and geometric checks.
inline ContourPath gamma_j(int j, const TruncationPolicy &pol) {
  DecayBound b{0.5, 0, 1};
  double R = truncation_length(b, pol, 1);
  return gamma_j(j, {Real(0), Real(q_arc_radius(1)), Real(R)});
}
inline ContourPath gamma_hat_k(int k, const TruncationPolicy &pol) {
  DecayBound b{1, 0, 1};
  double R = truncation_length(b, pol, 1);
  return gamma_hat_k(k, {Real(0), Real(r_arc_radius(1)), Real(R)});
}

// The six rays of the Psi jump contour.
enum class PsiRay { Arg0, ArgPi4, Arg3Pi4, ArgPi, ArgM3Pi4, ArgMPi4 };

inline constexpr std::array<PsiRay, 6> all_psi_rays{PsiRay::Arg0,    PsiRay::ArgPi4,   PsiRay::Arg3Pi4,
                                                    PsiRay::ArgPi,   PsiRay::ArgM3Pi4, PsiRay::ArgMPi4};

inline Real psi_ray_angle(PsiRay r) {
  switch (r) {
  case PsiRay::Arg0: return Real(0);
  case PsiRay::ArgPi4: return pi() / 4;
  case PsiRay::Arg3Pi4: return 3 * pi() / 4;
  case PsiRay::ArgPi: return pi();
  case PsiRay::ArgM3Pi4: return -3 * pi() / 4;
  case PsiRay::ArgMPi4: return -pi() / 4;
  }
  return Real(0);
}

// rays in the right half-plane point away from 0, the others toward it
inline bool psi_ray_outward(PsiRay r) {
  return r == PsiRay::Arg0 || r == PsiRay::ArgPi4 || r == PsiRay::ArgMPi4;
}

inline const char *psi_ray_name(PsiRay r) {
  switch (r) {
  case PsiRay::Arg0: return "arg=0";
  case PsiRay::ArgPi4: return "arg=pi/4";
  case PsiRay::Arg3Pi4: return "arg=3pi/4";
  case PsiRay::ArgPi: return "arg=pi";
  case PsiRay::ArgM3Pi4: return "arg=-3pi/4";
  case PsiRay::ArgMPi4: return "arg=-pi/4";
  }
  return "?";
}

inline ContourPath sigma_psi_ray(PsiRay r, double length = 10) {
  Real th = psi_ray_angle(r);
  ContourPath p{std::string("SigmaPsi ") + psi_ray_name(r), {}, BranchCut::None};
  if (psi_ray_outward(r))
    p.segments.push_back({Ray(th, Real(0), Real(length)), true});
  else
    p.segments.push_back({Ray(th, Real(length), Real(0)), true});
  return p;
}

// ---- geometric checks (double precision, on polyline samples) ----

struct Crossing {
  double re, im;
  // +1 when path a passes from the right of b to its left
  int sign;
};

namespace detail {
struct P2 {
  double x, y;
};
inline std::vector<P2> sample_path(const ContourPath &p, int per_segment) {
  std::vector<P2> pts;
  for (auto &s : p.segments)
    for (int i = 0; i <= per_segment; ++i) {
      if (i == 0 && !pts.empty())
        continue;
      PathPoint q = s.at(Real(double(i) / per_segment));
      pts.push_back({q.z.re.to_double(), q.z.im.to_double()});
    }
  return pts;
}
} // namespace detail

// Transversal crossings of two paths away from the disc |t| <= exclude.
inline std::vector<Crossing> crossings(const ContourPath &a, const ContourPath &b, double exclude = 1e-6,
                                       int per_segment = 400) {
  auto pa = detail::sample_path(a, per_segment), pb = detail::sample_path(b, per_segment);
  std::vector<Crossing> out;
  for (std::size_t i = 0; i + 1 < pa.size(); ++i)
    for (std::size_t j = 0; j + 1 < pb.size(); ++j) {
      double dax = pa[i + 1].x - pa[i].x, day = pa[i + 1].y - pa[i].y;
      double dbx = pb[j + 1].x - pb[j].x, dby = pb[j + 1].y - pb[j].y;
      double den = dax * dby - day * dbx;
      if (den == 0)
        continue;
      double ex = pb[j].x - pa[i].x, ey = pb[j].y - pa[i].y;
      double s = (ex * dby - ey * dbx) / den, t = (ex * day - ey * dax) / den;
      if (s < 0 || s >= 1 || t < 0 || t >= 1)
        continue;
      double cx = pa[i].x + s * dax, cy = pa[i].y + s * day;
      if (std::hypot(cx, cy) <= exclude)
        continue;
      // a crosses b from right to left when cross(db, da) > 0
      out.push_back({cx, cy, dbx * day - dby * dax > 0 ? 1 : -1});
    }
  return out;
}

// Checks the lifted argument is continuous and consistent with the point,
// and that it stays inside the window allowed by the declared cut.
inline bool respects_branch_cut(const ContourPath &p, int per_segment = 200) {
  const double twopi = 2 * M_PI;
  double prev = 0;
  bool first = true;
  for (auto &s : p.segments)
    for (int i = 1; i < per_segment; ++i) {
      PathPoint q = s.at(Real(double(i) / per_segment));
      double th = q.theta.to_double();
      double x = q.z.re.to_double(), y = q.z.im.to_double();
      if (std::hypot(x, y) > 0) {
        double d = std::remainder(th - std::atan2(y, x), twopi);
        if (std::abs(d) > 1e-9)
          return false;
      }
      if (!first && std::abs(th - prev) > 0.5)
        return false;
      if (p.branch_cut == BranchCut::NegativeReal && !(th > -M_PI && th < M_PI))
        return false;
      if (p.branch_cut == BranchCut::PositiveReal && !(th >= 0 && th <= twopi))
        return false;
      prev = th;
      first = false;
    }
  return true;
}

} // namespace angelesco
