#pragma once

// Finite-n multiple orthogonal polynomial ensemble for the Angelesco pair
// w1 = (x - a)^alpha |x|^beta h1 on [a, 0], w2 = x^beta (1 - x)^gamma h2 on [0, 1]:
// moment matrix, correlation kernel, type II polynomial, trace and
// projection checks, and the double scaling harness.

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "angelesco_kernel.hpp"
#include "linalg.hpp"
#include "quadrature.hpp"

namespace angelesco {

// polynomial in ascending powers; empty means the constant 1
struct PolyFactor {
  std::vector<double> coeffs;

  int degree() const { return coeffs.empty() ? 0 : int(coeffs.size()) - 1; }
  Real operator()(const Real &x) const {
    if (coeffs.empty())
      return Real(1);
    Real s(0);
    for (std::size_t i = coeffs.size(); i-- > 0;)
      s = s * x + Real(coeffs[i]);
    return s;
  }
};

struct WeightSpec {
  double a = -1;
  double alpha = 0, beta = 0, gamma = 0;
  PolyFactor h1, h2;

  void validate() const {
    if (!(a < 0) || !std::isfinite(a))
      throw DomainError("weight endpoint a must be negative");
    for (double e : {alpha, beta, gamma})
      if (!(e > -1) || !std::isfinite(e))
        throw DomainError("weight exponents must exceed -1");
    // positivity sampled densely, endpoints included
    PrecisionGuard g(64);
    auto positive = [](const PolyFactor &h, double lo, double hi) {
      for (int i = 0; i <= 256; ++i)
        if (!(h(Real(lo + (hi - lo) * i / 256.0)) > 0))
          return false;
      return true;
    };
    if (!positive(h1, a, 0) || !positive(h2, 0, 1))
      throw DomainError("h factors must be positive on their intervals");
  }

  Real w1(const Real &x) const {
    return pow(x - Real(a), Real(alpha)) * pow(abs(x), Real(beta)) * h1(x);
  }
  Real w2(const Real &x) const { return pow(x, Real(beta)) * pow(Real(1) - x, Real(gamma)) * h2(x); }
};

inline long finite_n_bits(int n1, int n2) { return std::max(256L, 24L * (n1 + n2)); }

namespace detail {

// int_a^0 x^m (x - a)^alpha |x|^beta dx
inline Real pure_moment1(const WeightSpec &w, int m) {
  Real aa = abs(Real(w.a));
  Real v = pow(aa, Real(m) + w.alpha + w.beta + 1) * beta_fn(Real(m) + w.beta + 1, Real(w.alpha) + 1);
  return m % 2 ? -v : v;
}
// int_0^1 x^m x^beta (1 - x)^gamma dx
inline Real pure_moment2(const WeightSpec &w, int m) { return beta_fn(Real(m) + w.beta + 1, Real(w.gamma) + 1); }

} // namespace detail

// int x^m w_block(x) dx in closed form; block is 1 or 2
inline Real weight_moment(const WeightSpec &w, int block, int m) {
  const PolyFactor &h = block == 1 ? w.h1 : w.h2;
  auto pure = [&](int k) { return block == 1 ? detail::pure_moment1(w, k) : detail::pure_moment2(w, k); };
  if (h.coeffs.empty())
    return pure(m);
  Real s(0);
  for (std::size_t i = 0; i < h.coeffs.size(); ++i)
    if (h.coeffs[i] != 0)
      s += pure(m + int(i)) * h.coeffs[i];
  return s;
}

// Gauss-Jacobi nodes mapped onto one interval, weights carrying the full
// weight function: sum_i weight[i] g(x[i]) = int g w_block for polynomial g of degree < 2n - deg h.
struct BlockRule {
  std::vector<Real> x, weight;
};

inline BlockRule block_rule(const WeightSpec &w, int block, int n) {
  BlockRule r;
  if (block == 1) {
    // x = (a/2)(1 - xi): (x - a) = (|a|/2)(1 + xi), |x| = (|a|/2)(1 - xi)
    GaussRule g = gauss_jacobi(n, Real(w.beta), Real(w.alpha));
    Real half = abs(Real(w.a)) / 2;
    Real scale = pow(half, Real(w.alpha) + w.beta + 1);
    for (std::size_t i = 0; i < g.x.size(); ++i) {
      Real x = Real(w.a) / 2 * (Real(1) - g.x[i]);
      r.weight.push_back(g.w[i] * scale * w.h1(x));
      r.x.push_back(std::move(x));
    }
  } else {
    // x = (1 + xi)/2
    GaussRule g = gauss_jacobi(n, Real(w.gamma), Real(w.beta));
    Real scale = pow(Real(0.5), Real(w.beta) + w.gamma + 1);
    for (std::size_t i = 0; i < g.x.size(); ++i) {
      Real x = (Real(1) + g.x[i]) / 2;
      r.weight.push_back(g.w[i] * scale * w.h2(x));
      r.x.push_back(std::move(x));
    }
  }
  return r;
}

// independent check of weight_moment
inline Real weight_moment_quadrature(const WeightSpec &w, int block, int m) {
  const PolyFactor &h = block == 1 ? w.h1 : w.h2;
  BlockRule r = block_rule(w, block, m / 2 + h.degree() / 2 + 2);
  Real s(0);
  for (std::size_t i = 0; i < r.x.size(); ++i)
    s += r.weight[i] * pow(r.x[i], long(m));
  return s;
}

class MomentSystem {
public:
  MomentSystem(WeightSpec spec, int n1, int n2, long bits)
      : spec_(std::move(spec)), n1_(n1), n2_(n2), bits_(bits), lu_(build(bits)) {
    if (lu_.singular() || double(bits_) - lu_.pivot_bits_lost() < 30)
      throw PrecisionInsufficient("moment system (" + std::to_string(n1_) + "," + std::to_string(n2_) + ") at " +
                                  std::to_string(bits_) + " bits keeps fewer than 30 significant bits");
  }

  const WeightSpec &spec() const { return spec_; }
  int n1() const { return n1_; }
  int n2() const { return n2_; }
  int size() const { return n1_ + n2_; }
  long precision_bits() const { return bits_; }
  const RMatrix &matrix() const { return matrix_; }
  const LU<Real> &factorization() const { return lu_; }
  double significant_bits() const { return double(bits_) - lu_.pivot_bits_lost(); }

  // f_k(y), k = 0 .. |n| - 1
  std::vector<Real> f(const Real &y) const {
    std::vector<Real> v(size(), Real(0));
    if (y < 0) {
      Real w = spec_.w1(y), p(1);
      for (int k = 0; k < n1_; ++k, p *= y)
        v[k] = w * p;
    } else {
      Real w = spec_.w2(y), p(1);
      for (int k = 0; k < n2_; ++k, p *= y)
        v[n1_ + k] = w * p;
    }
    return v;
  }

  std::vector<Real> powers(const Real &x) const {
    std::vector<Real> v(size());
    Real p(1);
    for (int j = 0; j < size(); ++j, p *= x)
      v[j] = p;
    return v;
  }

  // u = M^{-1} p(x)
  std::vector<Real> coefficients(const Real &x) const { return lu_.solve(powers(x)); }

private:
  LU<Real> build(long bits) {
    PrecisionGuard g(bits);
    spec_.validate();
    if (n1_ < 1 || n2_ < 1)
      throw DomainError("multi-index entries must be positive");
    const int N = n1_ + n2_;
    matrix_ = RMatrix(N, N);
    // M(j, k) = int x^j f_k
    for (int j = 0; j < N; ++j) {
      for (int k = 0; k < n1_; ++k)
        matrix_(j, k) = weight_moment(spec_, 1, j + k);
      for (int k = 0; k < n2_; ++k)
        matrix_(j, n1_ + k) = weight_moment(spec_, 2, j + k);
    }
    return LU<Real>(matrix_);
  }

  WeightSpec spec_;
  int n1_, n2_;
  long bits_;
  RMatrix matrix_;
  LU<Real> lu_;
};

inline MomentSystem moments(const WeightSpec &spec, int n1, int n2, std::optional<long> bits = std::nullopt) {
  return MomentSystem(spec, n1, n2, bits.value_or(finite_n_bits(n1, n2)));
}

// Exact moment matrix for nonnegative integer exponents, rational a and
// constant h: every entry is a rational number.
inline std::vector<std::vector<mpq_class>> moment_matrix_exact(const WeightSpec &w, int n1, int n2) {
  auto as_int = [](double e) {
    if (e < 0 || e != std::floor(e))
      throw DomainError("exact moments need nonnegative integer exponents");
    return long(e);
  };
  if (!w.h1.coeffs.empty() || !w.h2.coeffs.empty())
    throw DomainError("exact moments need h1 = h2 = 1");
  const long al = as_int(w.alpha), be = as_int(w.beta), ga = as_int(w.gamma);
  auto fact = [](long k) {
    mpz_class f = 1;
    for (long i = 2; i <= k; ++i)
      f *= i;
    return f;
  };
  // B(p, q) = (p-1)! (q-1)! / (p+q-1)!
  auto beta_int = [&](long p, long q) { return mpq_class(fact(p - 1) * fact(q - 1), fact(p + q - 1)); };
  const mpq_class abs_a(-w.a); // exact: doubles are dyadic rationals
  auto qpow = [](mpq_class b, long e) {
    mpq_class r = 1;
    for (long i = 0; i < e; ++i)
      r *= b;
    return r;
  };
  const int N = n1 + n2;
  std::vector<std::vector<mpq_class>> m(N, std::vector<mpq_class>(N));
  for (int j = 0; j < N; ++j) {
    for (int k = 0; k < n1; ++k) {
      long e = j + k;
      mpq_class v = qpow(abs_a, e + al + be + 1) * beta_int(e + be + 1, al + 1);
      m[j][k] = e % 2 ? mpq_class(-v) : v;
    }
    for (int k = 0; k < n2; ++k)
      m[j][n1 + k] = beta_int(j + k + be + 1, ga + 1);
  }
  for (auto &row : m)
    for (auto &e : row)
      e.canonicalize();
  return m;
}

namespace detail {

inline void check_kernel_args(const MomentSystem &s, const Real &x, const Real &y) {
  const Real a(s.spec().a);
  if (x < a || x > 1 || y < a || y > 1)
    throw DomainError("kernel arguments must lie in [a, 1]");
  if (y == a || iszero(y) || y == 1)
    throw DomainError("y must avoid the endpoints a, 0 and 1");
}

inline Real dot(const std::vector<Real> &a, const std::vector<Real> &b) {
  Real s(0);
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!iszero(a[i]))
      s += a[i] * b[i];
  return s;
}

} // namespace detail

// K(x, y) = f(y)^T M^{-1} p(x); continuous across x = y
inline Real kernel_finite(const MomentSystem &s, const Real &x, const Real &y) {
  PrecisionGuard g(s.precision_bits());
  detail::check_kernel_args(s, x, y);
  return detail::dot(s.f(y), s.coefficients(x));
}
inline Real kernel_finite(const MomentSystem &s, double x, double y) {
  PrecisionGuard g(s.precision_bits());
  return kernel_finite(s, Real(x), Real(y));
}

// -det [[M, p(x)], [f(y)^T, 0]] / det M
inline Real kernel_bordered(const MomentSystem &s, const Real &x, const Real &y) {
  PrecisionGuard g(s.precision_bits());
  detail::check_kernel_args(s, x, y);
  const int N = s.size();
  RMatrix b(N + 1, N + 1);
  auto p = s.powers(x);
  auto f = s.f(y);
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < N; ++j)
      b(i, j) = s.matrix()(i, j);
    b(i, N) = p[i];
    b(N, i) = f[i];
  }
  b(N, N) = Real(0);
  return -determinant(b) / s.factorization().determinant();
}

// det [K(x_j, x_k)]
inline Real correlation(const MomentSystem &s, const std::vector<double> &points) {
  PrecisionGuard g(s.precision_bits());
  const std::size_t m = points.size();
  if (m == 0)
    throw DomainError("correlation needs at least one point");
  std::vector<std::vector<Real>> u;
  for (double x : points)
    u.push_back(s.coefficients(Real(x)));
  RMatrix k(m, m);
  for (std::size_t j = 0; j < m; ++j) {
    detail::check_kernel_args(s, Real(points[j]), Real(points[j]));
    auto f = s.f(Real(points[j]));
    for (std::size_t i = 0; i < m; ++i)
      k(i, j) = detail::dot(f, u[i]);
  }
  LU<Real> lu(k);
  return lu.singular() ? Real(0) : lu.determinant();
}

// Monic type II polynomial, ascending coefficients (length |n| + 1):
// sum_j c_j M(j, k) = -int x^|n| f_k.
inline std::vector<Real> mop_polynomial(const MomentSystem &s) {
  PrecisionGuard g(s.precision_bits());
  const int N = s.size();
  std::vector<Real> rhs(N);
  for (int k = 0; k < s.n1(); ++k)
    rhs[k] = -weight_moment(s.spec(), 1, N + k);
  for (int k = 0; k < s.n2(); ++k)
    rhs[s.n1() + k] = -weight_moment(s.spec(), 2, N + k);
  auto c = s.factorization().solve_transposed(std::move(rhs));
  c.push_back(Real(1));
  return c;
}

// max_k |int x^k P w_j| over k < n_j, by Gauss-Jacobi quadrature
inline Real mop_orthogonality_residual(const MomentSystem &s, const std::vector<Real> &P) {
  PrecisionGuard g(s.precision_bits());
  Real worst(0);
  for (int block = 1; block <= 2; ++block) {
    const int nb = block == 1 ? s.n1() : s.n2();
    const PolyFactor &h = block == 1 ? s.spec().h1 : s.spec().h2;
    BlockRule r = block_rule(s.spec(), block, s.size() + h.degree() + 1);
    for (int k = 0; k < nb; ++k) {
      Real acc(0);
      for (std::size_t i = 0; i < r.x.size(); ++i) {
        Real v(0);
        for (std::size_t c = P.size(); c-- > 0;)
          v = v * r.x[i] + P[c];
        acc += r.weight[i] * v * pow(r.x[i], long(k));
      }
      worst = max(worst, abs(acc));
    }
  }
  return worst;
}

// int_{Delta_block} K(x, x) dx
inline Real kernel_trace(const MomentSystem &s, int block) {
  PrecisionGuard g(s.precision_bits());
  const PolyFactor &h = block == 1 ? s.spec().h1 : s.spec().h2;
  BlockRule r = block_rule(s.spec(), block, s.size() + h.degree() + 1);
  const int off = block == 1 ? 0 : s.n1(), nb = block == 1 ? s.n1() : s.n2();
  Real total(0);
  for (std::size_t i = 0; i < r.x.size(); ++i) {
    auto u = s.coefficients(r.x[i]);
    Real poly(0), p(1);
    for (int k = 0; k < nb; ++k, p *= r.x[i])
      poly += u[off + k] * p;
    total += r.weight[i] * poly;
  }
  return total;
}

// int_a^1 K(x, z) K(z, y) dz
inline Real kernel_reproduce(const MomentSystem &s, double x, double y) {
  PrecisionGuard g(s.precision_bits());
  detail::check_kernel_args(s, Real(x), Real(y));
  const auto ux = s.coefficients(Real(x));
  const auto fy = s.f(Real(y));
  Real total(0);
  for (int block = 1; block <= 2; ++block) {
    const PolyFactor &h = block == 1 ? s.spec().h1 : s.spec().h2;
    BlockRule r = block_rule(s.spec(), block, s.size() + h.degree() + 1);
    const int off = block == 1 ? 0 : s.n1(), nb = block == 1 ? s.n1() : s.n2();
    for (std::size_t i = 0; i < r.x.size(); ++i) {
      // K(x, z) without the weight of z, which the rule carries
      Real kxz(0), p(1);
      for (int k = 0; k < nb; ++k, p *= r.x[i])
        kxz += ux[off + k] * p;
      Real kzy = detail::dot(fy, s.coefficients(r.x[i]));
      total += r.weight[i] * kxz * kzy;
    }
  }
  return total;
}

// s_a = (a + 1)^3 / (9 (a^2 - a + 1))
inline mpq_class gap_endpoint_exact(const mpq_class &a) {
  if (a >= 0)
    throw DomainError("gap endpoint needs a < 0");
  mpq_class n = (a + 1) * (a + 1) * (a + 1);
  mpq_class d = 9 * (a * a - a + 1);
  mpq_class r = n / d;
  r.canonicalize();
  return r;
}
inline double gap_endpoint(double a) { return gap_endpoint_exact(mpq_class(a)).get_d(); }

// "-0.5", "-2", "-1/2", "-2.5e-1" parsed without rounding
inline mpq_class parse_rational(const std::string &text) {
  std::string s = text;
  auto slash = s.find('/');
  try {
    if (slash != std::string::npos) {
      mpq_class q(s, 10);
      if (q.get_den() == 0)
        throw DomainError("zero denominator in '" + text + "'");
      q.canonicalize();
      return q;
    }
    long exp10 = 0;
    auto e = s.find_first_of("eE");
    if (e != std::string::npos) {
      std::size_t used = 0;
      exp10 = std::stol(s.substr(e + 1), &used);
      if (used != s.size() - e - 1)
        throw DomainError("bad exponent");
      s = s.substr(0, e);
    }
    auto dot = s.find('.');
    if (dot != std::string::npos) {
      exp10 -= long(s.size() - dot - 1);
      s.erase(dot, 1);
    }
    if (s.empty() || s == "-" || s == "+")
      throw DomainError("empty");
    if (s[0] == '+')
      s.erase(0, 1);
    mpz_class num(s, 10);
    mpz_class ten = 10, scale;
    mpz_pow_ui(scale.get_mpz_t(), ten.get_mpz_t(), (unsigned long)std::labs(exp10));
    mpq_class q = exp10 >= 0 ? mpq_class(num * scale) : mpq_class(num, scale);
    q.canonicalize();
    return q;
  } catch (const std::invalid_argument &) {
    throw DomainError("not a rational number: '" + text + "'");
  } catch (const std::out_of_range &) {
    throw DomainError("not a rational number: '" + text + "'");
  }
}

inline std::string rational_str(const mpq_class &q) { return q.get_str(10); }

// Double scaling: x_n = x / (sqrt2 n^{3/2}), a_n = -1 + sqrt2 tau / sqrt n
struct ScalingPoint {
  double x = 0, y = 0, tau = 0;
  int n = 1;

  Real scale() const { return sqrt(Real(2)) * pow(Real(n), Real(1.5)); }
  Real x_n() const { return Real(x) / scale(); }
  Real y_n() const { return Real(y) / scale(); }
  Real a_n() const { return Real(-1) + sqrt(Real(2)) * tau / sqrt(Real(n)); }
};

struct ExponentTemplate {
  double alpha = 0, beta = 0, gamma = 0;
  PolyFactor h1, h2;
};

struct ConvergenceRecord {
  int n;
  double x, y;
  Real lhs, rhs, abs_error;
};

// lhs = K_{n,n}(x_n, y_n; a_n) / (sqrt2 n^{3/2}); rhs = limiting kernel at 256-bit default precision
inline ConvergenceRecord converge_to_angelesco(const ScalingPoint &pt, const ExponentTemplate &e,
                                               const PrecisionContext &ctx, const Real *rhs_cached = nullptr) {
  if (pt.y == 0)
    throw DomainError("y must be nonzero");
  if (pt.n < 1)
    throw DomainError("n must be positive");
  const long bits = std::max(ctx.bits, finite_n_bits(pt.n, pt.n));
  PrecisionGuard g(bits);
  Real an = pt.a_n();
  if (!(an < 0))
    throw DomainError("n too small: a_n = " + an.str(6) + " is not negative");
  Real xn = pt.x_n(), yn = pt.y_n();
  if (!(xn > an && xn < 1 && yn > an && yn < 1))
    throw DomainError("n too small: scaled points leave (a_n, 1)");
  // a_n rounded to double: a relative shift of 2^-53, far below the scaling error
  WeightSpec w{an.to_double(), e.alpha, e.beta, e.gamma, e.h1, e.h2};
  MomentSystem sys(w, pt.n, pt.n, bits);
  Real lhs = kernel_finite(sys, xn, yn) / pt.scale();
  Real rhs;
  if (rhs_cached)
    rhs = *rhs_cached;
  else
    rhs = kernel_pairing(pt.x, pt.y, KernelParams{e.beta, pt.tau}, ctx).value;
  Real err = abs(lhs - rhs);
  return {pt.n, pt.x, pt.y, lhs, rhs, err};
}

} // namespace angelesco
