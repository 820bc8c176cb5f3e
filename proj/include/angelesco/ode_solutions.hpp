#pragma once

// Contour-integral solutions q_j of  z q''' - beta q'' - tau q' + q = 0
// and r_k of the adjoint equation, plus the bilinear concomitant.

#include <cmath>
#include <string>

#include "contours.hpp"
#include "quadrature.hpp"

namespace angelesco {

struct KernelParams {
  double beta = 0;
  double tau = 0;

  void validate() const {
    if (!(beta > -1) || !std::isfinite(beta))
      throw DomainError("beta must exceed -1");
    if (!std::isfinite(tau))
      throw DomainError("tau must be finite");
  }
};

struct SolutionTriple {
  Complex value, d1, d2;
  Complex d3;         // filled only when requested
  Real abs_error;     // largest quadrature error estimate among the entries
};

// Boundary value taken on the negative real axis, where the continued functions are cut.
enum class CutSide { Upper, Lower };

namespace detail {

// arg z in [-pi, pi], with the sign on the negative axis chosen by side
inline Real direction_of(const Complex &z, CutSide side) {
  if (iszero(z.im) && z.re < 0)
    return side == CutSide::Upper ? pi() : -pi();
  return arg(z);
}

inline SolutionContourShape solution_shape(const Complex &z, CutSide side, double rho, double log_prefactor,
                                           double power, const PrecisionContext &ctx) {
  double az = abs(z).to_double();
  // headroom for exponentially small (recessive) values
  double allowance = 1.5 * std::pow(az, 2.0 / 3.0) + 10;
  DecayBound b{log_prefactor + allowance, power, az};
  double R = truncation_length(b, TruncationPolicy::from(ctx), rho);
  return {direction_of(z, side), Real(rho), Real(R)};
}

template <std::size_t N>
SolutionTriple to_triple(const QuadResultN<N> &r, const Complex &scale) {
  SolutionTriple t{r.value[0] * scale, r.value[1] * scale, r.value[2] * scale, {}, {}};
  if constexpr (N > 3)
    t.d3 = r.value[3] * scale;
  Real e(0);
  for (std::size_t c = 0; c < N; ++c)
    e = max(e, r.abs_error_estimate[c]);
  t.abs_error = e * abs(scale);
  return t;
}

template <std::size_t N>
SolutionTriple q_impl(int j, const Complex &z, const KernelParams &p, const PrecisionContext &ctx, CutSide side) {
  PrecisionGuard guard(ctx.bits);
  const double az = abs(z).to_double();
  const double rho = q_arc_radius(az);
  const double lp = std::abs(p.tau) / rho + 1 / (2 * rho * rho);
  auto shape = solution_shape(z, side, rho, lp, -p.beta - 3 + double(N - 1), ctx);
  ContourPath path = gamma_j(j, shape);
  const Real expo(-p.beta - 3), tau(p.tau);
  auto f = [&](const PathPoint &pt) {
    Complex inv = Complex(1) / pt.z;
    Complex e = inv * tau - inv * inv * 0.5 + z * pt.z + Complex(log(pt.r) * expo, pt.theta * expo);
    CVec<N> out;
    out[0] = exp(e);
    for (std::size_t m = 1; m < N; ++m)
      out[m] = out[m - 1] * pt.z;
    return out;
  };
  return to_triple(integrate_path_n<N>(f, path, ctx), Complex(1));
}

template <std::size_t N>
SolutionTriple r_impl(int k, const Complex &z, const KernelParams &p, const PrecisionContext &ctx, CutSide side) {
  PrecisionGuard guard(ctx.bits);
  const double az = abs(z).to_double();
  const double rho = r_arc_radius(az);
  const double lp = std::abs(p.tau) / rho + 1 / (2 * rho * rho);
  auto shape = solution_shape(z, side, rho, lp, p.beta + double(N - 1), ctx);
  ContourPath path = gamma_hat_k(k, shape);
  const Real expo(p.beta), tau(p.tau);
  auto f = [&](const PathPoint &pt) {
    Complex inv = Complex(1) / pt.z;
    Complex e = inv * inv * 0.5 - inv * tau - z * pt.z + Complex(log(pt.r) * expo, pt.theta * expo);
    CVec<N> out;
    out[0] = exp(e);
    Complex ms = -pt.z;
    for (std::size_t m = 1; m < N; ++m)
      out[m] = out[m - 1] * ms;
    return out;
  };
  // 1 / (2 pi i) = -i / (2 pi)
  Complex scale(Real(0), Real(-1) / (2 * pi()));
  return to_triple(integrate_path_n<N>(f, path, ctx), scale);
}

inline void check_index(int j) {
  if (j < 1 || j > 3)
    throw DomainError("solution index must be 1, 2 or 3, got " + std::to_string(j));
}

inline void check_point(const Complex &z) {
  if (iszero(z.re) && iszero(z.im))
    throw DomainError("solutions are not evaluated at z = 0");
}

} // namespace detail

// q_j(z) and two (optionally three) derivatives, by differentiating under the integral.
inline SolutionTriple q_j(int j, const Complex &z, const KernelParams &p, const PrecisionContext &ctx,
                          CutSide side = CutSide::Upper, bool with_third = false) {
  detail::check_index(j);
  detail::check_point(z);
  p.validate();
  return with_third ? detail::q_impl<4>(j, z, p, ctx, side) : detail::q_impl<3>(j, z, p, ctx, side);
}

// r_k(z), including the 1/(2 pi i) factor
inline SolutionTriple r_k(int k, const Complex &z, const KernelParams &p, const PrecisionContext &ctx,
                          CutSide side = CutSide::Upper, bool with_third = false) {
  detail::check_index(k);
  detail::check_point(z);
  p.validate();
  return with_third ? detail::r_impl<4>(k, z, p, ctx, side) : detail::r_impl<3>(k, z, p, ctx, side);
}

struct BOperators {
  Complex b0, b1, b2;
};

inline BOperators apply_B_operators(const SolutionTriple &r, const Complex &z, const KernelParams &p) {
  const Real beta(p.beta), tau(p.tau);
  return {z * r.d2 + r.d1 * (beta + 2) - r.value * tau, -(z * r.d1) - r.value * (beta + 1), z * r.value};
}

// B[q, r](x, y) with q taken at x and r at y
inline Complex concomitant(const SolutionTriple &q, const SolutionTriple &r, const Complex &x, const Complex &y,
                           const KernelParams &p) {
  (void)x;
  const Real beta(p.beta), tau(p.tau);
  return y * r.value * q.d2 - (r.value * (beta + 1) + y * r.d1) * q.d1 +
         (y * r.d2 + r.d1 * (beta + 2) - r.value * tau) * q.value;
}

struct Residual {
  Real value;    // |residual|
  Real scale;    // largest term magnitude
  Real relative() const { return iszero(scale) ? value : value / scale; }
};

// z q''' - beta q'' - tau q' + q
inline Residual ode_residual_q(const SolutionTriple &q, const Complex &z, const KernelParams &p) {
  const Real beta(p.beta), tau(p.tau);
  Complex t1 = z * q.d3, t2 = q.d2 * beta, t3 = q.d1 * tau;
  Complex res = t1 - t2 - t3 + q.value;
  return {abs(res), max(max(abs(t1), abs(t2)), max(abs(t3), abs(q.value)))};
}

// z r''' + (beta + 3) r'' - tau r' - r
inline Residual ode_residual_r(const SolutionTriple &r, const Complex &z, const KernelParams &p) {
  const Real beta(p.beta), tau(p.tau);
  Complex t1 = z * r.d3, t2 = r.d2 * (beta + 3), t3 = r.d1 * tau;
  Complex res = t1 + t2 - t3 - r.value;
  return {abs(res), max(max(abs(t1), abs(t2)), max(abs(t3), abs(r.value)))};
}

} // namespace angelesco
