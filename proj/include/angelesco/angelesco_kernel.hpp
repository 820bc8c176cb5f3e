#pragma once

// The limiting kernel K(x, y; tau) by three independent routes: the
// concomitant pairing of q0 and r0, the double contour integral, and the
// boundary values of Psi sandwiched between fixed row and column vectors.

#include <array>
#include <cmath>
#include <string>

#include "psi_parametrix.hpp"
#include "contours.hpp"
#include "ode_solutions.hpp"
#include "quadrature.hpp"

namespace angelesco {

enum class KernelMethod { Pairing, Double, Psi };

inline const char *method_name(KernelMethod m) {
  switch (m) {
  case KernelMethod::Pairing: return "pairing";
  case KernelMethod::Double: return "double";
  case KernelMethod::Psi: return "psi";
  }
  return "?";
}

struct KernelEvaluation {
  Real value;
  Real imag_residual;
  KernelMethod method;
  Real abs_error_estimate;
};

namespace detail {

// x^{2-n} (sigma x)^beta, sigma = sign(Re x): the analytic continuation of
// x^{2-n}|x|^beta off the real axis
inline Complex signed_power_prefactor(const Complex &x, int n, double beta) {
  Complex sx = x.re < 0 ? -x : x;
  return pow(x, long(2 - n)) * pow(sx, Real(beta));
}

// q0 and its first two derivatives at a (possibly complex) point near the real axis
inline std::array<Complex, 3> q0_all(const Complex &x, const KernelParams &p, const PrecisionContext &ctx,
                                     Real *err = nullptr) {
  PrecisionGuard guard(ctx.bits);
  const double xd = abs(x).to_double();
  ContourPath path = gamma0(xd, p.tau, p.beta, TruncationPolicy::from(ctx));
  const Real expo(-p.beta - 3), tau(p.tau);
  const Complex xt = x * tau, hx2 = x * x * Real(0.5);
  auto f = [&](const PathPoint &pt) {
    Complex inv = Complex(1) / pt.z;
    Complex e = inv * xt - inv * inv * hx2 + pt.z + Complex(log(pt.r) * expo, pt.theta * expo);
    CVec<3> out;
    out[0] = exp(e);
    out[1] = out[0] * pt.z;
    out[2] = out[1] * pt.z;
    return out;
  };
  auto r = integrate_path_n<3>(f, path, ctx);
  // 1 / (2 pi i)
  const Complex c(Real(0), Real(-1) / (2 * pi()));
  std::array<Complex, 3> out;
  Real e(0);
  for (int n = 0; n < 3; ++n) {
    Complex s = c * signed_power_prefactor(x, n, p.beta);
    out[n] = r.value[n] * s;
    e = max(e, r.abs_error_estimate[n] * abs(s));
  }
  if (err)
    *err = e;
  return out;
}

inline std::array<Complex, 3> r0_all(const Complex &y, const KernelParams &p, const PrecisionContext &ctx,
                                     Real *err = nullptr) {
  PrecisionGuard guard(ctx.bits);
  const double yd = abs(y).to_double();
  ContourPath path = gamma0_hat(yd, p.tau, p.beta, TruncationPolicy::from(ctx));
  const Real expo(p.beta), tau(p.tau);
  const Complex yt = y * tau, hy2 = y * y * Real(0.5);
  auto f = [&](const PathPoint &pt) {
    Complex inv = Complex(1) / pt.z;
    Complex e = inv * inv * hy2 - inv * yt - pt.z + Complex(log(pt.r) * expo, pt.theta * expo);
    CVec<3> out;
    out[0] = exp(e);
    out[1] = out[0] * pt.z;
    out[2] = out[1] * pt.z;
    return out;
  };
  auto r = integrate_path_n<3>(f, path, ctx);
  const Complex c(Real(0), Real(-1) / (2 * pi()));
  std::array<Complex, 3> out;
  Real e(0);
  for (int n = 0; n < 3; ++n) {
    // (-1)^n y^{2-n} |y|^{-beta-3}
    Complex s = c * signed_power_prefactor(y, n, -p.beta - 3) * (n % 2 ? -1 : 1);
    out[n] = r.value[n] * s;
    e = max(e, r.abs_error_estimate[n] * abs(s));
  }
  if (err)
    *err = e;
  return out;
}

inline void check_pair(double x, double y) {
  if (x == 0 || y == 0)
    throw DomainError("the kernel is evaluated only for nonzero x and y");
  if (x == y)
    throw CoincidentPoints("coincident points unsupported (x == y)");
}

inline KernelEvaluation finish(const Complex &k, KernelMethod m, Real err) {
  return {k.re, abs(k.im), m, std::move(err)};
}

} // namespace detail

inline Complex q0(double x, int order, const KernelParams &p, const PrecisionContext &ctx) {
  if (order < 0 || order > 2)
    throw DomainError("q0 order must be 0, 1 or 2");
  p.validate();
  if (x == 0) {
    if (order > 0)
      throw UndefinedDerivativeAtZero("q0 derivatives are undefined at x = 0");
    PrecisionGuard guard(ctx.bits);
    return Complex(0);
  }
  PrecisionGuard guard(ctx.bits);
  return detail::q0_all(Complex(Real(x)), p, ctx)[order];
}

inline Complex r0(double y, int order, const KernelParams &p, const PrecisionContext &ctx) {
  if (order < 0 || order > 2)
    throw DomainError("r0 order must be 0, 1 or 2");
  p.validate();
  if (y == 0)
    throw DomainError("r0 is not defined at y = 0");
  PrecisionGuard guard(ctx.bits);
  return detail::r0_all(Complex(Real(y)), p, ctx)[order];
}

// continuation of q0 / r0 to complex points near the real axis (derivative oracles)
inline Complex q0_extended(const Complex &x, int order, const KernelParams &p, const PrecisionContext &ctx) {
  return detail::q0_all(x, p, ctx)[order];
}
inline Complex r0_extended(const Complex &y, int order, const KernelParams &p, const PrecisionContext &ctx) {
  return detail::r0_all(y, p, ctx)[order];
}

// B[q0, r0](x, y) |y/x|^beta / (x - y)
inline KernelEvaluation kernel_pairing(double x, double y, const KernelParams &p, const PrecisionContext &ctx) {
  detail::check_pair(x, y);
  p.validate();
  PrecisionGuard guard(ctx.bits);
  Real eq, er;
  auto q = detail::q0_all(Complex(Real(x)), p, ctx, &eq);
  auto r = detail::r0_all(Complex(Real(y)), p, ctx, &er);
  SolutionTriple qt{q[0], q[1], q[2], {}, eq}, rt{r[0], r[1], r[2], {}, er};
  const Complex X{Real(x)}, Y{Real(y)};
  Complex b = concomitant(qt, rt, X, Y, p);
  Real scale = pow(abs(Real(y) / Real(x)), Real(p.beta)) / (Real(x) - Real(y));
  Complex k = b * scale;
  // first-order propagation of the integral errors
  Real qmag = max(max(abs(q[0]), abs(q[1])), abs(q[2]));
  Real rmag = max(max(abs(r[0]), abs(r[1])), abs(r[2]));
  Real w = (abs(Real(y)) + Real(std::abs(p.beta)) + 2 + Real(std::abs(p.tau))) * abs(scale) * 3;
  Real err = w * (eq * rmag + er * qmag);
  return detail::finish(k, KernelMethod::Pairing, std::move(err));
}

// the bare concomitant without the 1/(x - y) factor, for convention checks
inline Complex pairing_bracket(double x, double y, const KernelParams &p, const PrecisionContext &ctx) {
  detail::check_pair(x, y);
  PrecisionGuard guard(ctx.bits);
  auto q = detail::q0_all(Complex(Real(x)), p, ctx);
  auto r = detail::r0_all(Complex(Real(y)), p, ctx);
  SolutionTriple qt{q[0], q[1], q[2], {}, {}}, rt{r[0], r[1], r[2], {}, {}};
  return concomitant(qt, rt, Complex(Real(x)), Complex(Real(y)), p) * pow(abs(Real(y) / Real(x)), Real(p.beta));
}

struct DoubleIntegralGeometry {
  double rho_hat;    // Gamma0hat circle radius (center rho_hat)
  Gamma0Shape outer; // Gamma0 shape enclosing the image (x/y) Gamma0hat
};

inline DoubleIntegralGeometry double_integral_geometry(double x, double y) {
  double rho = gamma0_hat_default_radius(y);
  double ratio = x / y;
  double d = rho * std::abs(ratio); // radius of the image disc, which touches 0
  double margin = 0.5 + 0.25 * d;
  double h = std::max(gamma0_default_radius(x), d + margin);
  double c = ratio > 0 ? d : 0.0;
  return {rho, {c, h}};
}

// sign(y) / (2 pi i)^2 * int int s^beta t^{-beta} / (x s - y t) e^{..t..} / e^{..s..} ds dt
inline KernelEvaluation kernel_double(double x, double y, const KernelParams &p, const PrecisionContext &ctx) {
  detail::check_pair(x, y);
  p.validate();
  PrecisionGuard guard(ctx.bits);
  const auto geo = double_integral_geometry(x, y);
  const TruncationPolicy pol = TruncationPolicy::from(ctx);
  ContourPath gt = gamma0(x, p.tau, p.beta, pol, 3, geo.outer);
  ContourPath gs = gamma0_hat(y, p.tau, p.beta, pol, geo.rho_hat);
  const Real X(x), Y(y), tau(p.tau), mb(-p.beta), pb(p.beta);
  const Complex xt(X * tau), hx2(X * X / 2), yt(Y * tau), hy2(Y * Y / 2);
  auto F = [&](const PathPoint &pt) -> CVec<1> {
    Complex inv = Complex(1) / pt.z;
    return {exp(inv * xt - inv * inv * hx2 + pt.z + Complex(log(pt.r) * mb, pt.theta * mb))};
  };
  auto G = [&](const PathPoint &pt) -> CVec<1> {
    Complex inv = Complex(1) / pt.z;
    return {exp(inv * inv * hy2 - inv * yt - pt.z + Complex(log(pt.r) * pb, pt.theta * pb))};
  };
  Real tol1 = ctx.quad_tol / 100;
  for (int attempt = 0; attempt < 4; ++attempt) {
    PrecisionContext c1(ctx.bits, max(tol1, exp2i(12 - ctx.bits)), ctx.max_subdiv);
    long ev = 0;
    auto pt = panel_nodes(gt, adaptive_panels<1>(F, gt, c1, ev));
    auto ps = panel_nodes(gs, adaptive_panels<1>(G, gs, c1, ev));
    std::vector<Complex> ak, ag, bk, bg, ys, xs;
    for (auto &n : pt) {
      Complex v = F(n.p)[0];
      ak.push_back(v * n.wk);
      ag.push_back(v * n.wg);
      ys.push_back(n.p.z * Y);
    }
    for (auto &n : ps) {
      Complex v = G(n.p)[0];
      bk.push_back(v * n.wk);
      bg.push_back(v * n.wg);
      xs.push_back(n.p.z * X);
    }
    // node-level separation of the singular set x s = y t
    double mind = 1e300;
    for (auto &a : ys)
      for (auto &b : xs) {
        double dr = b.re.to_double() - a.re.to_double(), di = b.im.to_double() - a.im.to_double();
        mind = std::min(mind, std::hypot(dr, di));
      }
    if (mind < 1e-3 * std::abs(y))
      throw NearSingularDenominator("min |xs - yt| over quadrature nodes is " + std::to_string(mind));
    Complex sk, sg;
    for (std::size_t i = 0; i < ys.size(); ++i) {
      Complex inner_k, inner_g;
      const bool gauss_t = !iszero(ag[i].re) || !iszero(ag[i].im);
      for (std::size_t k = 0; k < xs.size(); ++k) {
        Complex q = Complex(1) / (xs[k] - ys[i]);
        inner_k += bk[k] * q;
        if (gauss_t && (!iszero(bg[k].re) || !iszero(bg[k].im)))
          inner_g += bg[k] * q;
      }
      sk += ak[i] * inner_k;
      if (gauss_t)
        sg += ag[i] * inner_g;
    }
    // sign(y) / (2 pi i)^2 = -sign(y) / (4 pi^2)
    Real c = Real(y > 0 ? -1 : 1) / (4 * pi() * pi());
    Complex k = sk * c;
    Real err = abs(sk - sg) * abs(c);
    if (err <= ctx.quad_tol * max(abs(k), Real(1e-30)) || attempt == 3) {
      if (err > ctx.quad_tol * max(abs(k), Real(1e-30)) * 1e6)
        throw NonConvergence("double integral over Gamma0 x Gamma0hat did not reach tolerance");
      return detail::finish(k, KernelMethod::Double, std::move(err));
    }
    tol1 /= 1e4;
  }
  throw NonConvergence("double integral over Gamma0 x Gamma0hat did not reach tolerance");
}

// row and column vectors selecting the kernel from Psi_+^{-1}(y) Psi_+(x)
inline std::array<Complex, 3> psi_row_vector(double y, double beta) {
  if (y > 0)
    return {Complex(-1), Complex(0), Complex(1)};
  return {-expi(pi() * Real(beta)), Complex(1), Complex(0)};
}
inline std::array<Complex, 3> psi_col_vector(double x, double beta) {
  if (x > 0)
    return {Complex(1), Complex(0), Complex(1)};
  return {expi(-pi() * Real(beta)), Complex(1), Complex(0)};
}

inline KernelEvaluation kernel_psi(double x, double y, const KernelParams &p, const PrecisionContext &ctx) {
  detail::check_pair(x, y);
  p.validate();
  PrecisionGuard guard(ctx.bits);
  // boundary values from the upper half plane
  const Sector sx = x > 0 ? Sector::Up0 : Sector::UpPi, sy = y > 0 ? Sector::Up0 : Sector::UpPi;
  CMatrix P = psi_in_sector(Complex(Real(x)), sx, p, ctx).matrix;
  CMatrix Pi = psi_inverse_in_sector(Complex(Real(y)), sy, p, ctx);
  auto row = psi_row_vector(y, p.beta);
  auto col = psi_col_vector(x, p.beta);
  std::array<Complex, 3> v; // P col
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      v[i] += P(i, j) * col[j];
  Complex s;
  Real mag(0);
  for (int i = 0; i < 3; ++i) {
    Complex w;
    for (int j = 0; j < 3; ++j)
      w += row[j] * Pi(j, i);
    Complex term = w * v[i];
    mag = max(mag, abs(term));
    s += term;
  }
  // |y/x|^beta / (2 pi i (x - y))
  Real scale = pow(abs(Real(y) / Real(x)), Real(p.beta)) / (2 * pi() * (Real(x) - Real(y)));
  Complex k = Complex(s.im, -s.re) * scale;
  Real err = mag * abs(scale) * ctx.quad_tol * 10;
  return detail::finish(k, KernelMethod::Psi, std::move(err));
}

inline KernelEvaluation kernel(double x, double y, const KernelParams &p, const PrecisionContext &ctx,
                               KernelMethod m) {
  switch (m) {
  case KernelMethod::Pairing: return kernel_pairing(x, y, p, ctx);
  case KernelMethod::Double: return kernel_double(x, y, p, ctx);
  case KernelMethod::Psi: return kernel_psi(x, y, p, ctx);
  }
  throw DomainError("unknown kernel method");
}

} // namespace angelesco
