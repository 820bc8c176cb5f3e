#pragma once

// Gaussian rules at arbitrary precision and adaptive Gauss-Kronrod
// integration along parametrized paths.

#include <Eigen/Eigenvalues>

#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <queue>
#include <tuple>
#include <type_traits>
#include <vector>

#include "linalg.hpp"
#include "path.hpp"
#include "precision.hpp"

namespace angelesco {

struct GaussRule {
  std::vector<Real> x, w; // on [-1,1], ascending nodes
};

struct KronrodRule {
  std::vector<Real> x;  // 2n+1 nodes, ascending
  std::vector<Real> wk; // Kronrod weights
  std::vector<Real> wg; // embedded Gauss weights, zero at the extension nodes
};

namespace detail {

// P_n^{(a,b)}(x) and its derivative by the three-term recurrence
inline void jacobi_eval(int n, const Real &a, const Real &b, const Real &x, Real &p, Real &dp) {
  if (n == 0) {
    p = Real(1);
    dp = Real(0);
    return;
  }
  Real p0(1);
  Real p1 = (a + 1) + (a + b + 2) * (x - 1) / 2;
  for (int k = 2; k <= n; ++k) {
    Real c = 2 * k + a + b;
    Real a1 = 2 * k * (k + a + b) * (c - 2);
    Real a2 = (c - 1) * (c * (c - 2) * x + a * a - b * b);
    Real a3 = 2 * (k + a - 1) * (k + b - 1) * c;
    Real p2 = (a2 * p1 - a3 * p0) / a1;
    p0 = std::move(p1);
    p1 = std::move(p2);
  }
  Real c = 2 * n + a + b;
  dp = (n * ((a - b) - c * x) * p1 + 2 * (n + a) * (n + b) * p0) / (c * (1 - x * x));
  p = std::move(p1);
}

// eigenvalues of the Jacobi matrix in double precision, used as Newton seeds
inline std::vector<double> jacobi_seed_nodes(int n, double a, double b) {
  Eigen::VectorXd d(n), e(n > 1 ? n - 1 : 1);
  for (int k = 0; k < n; ++k) {
    double c = 2.0 * k + a + b;
    d(k) = k == 0 ? (b - a) / (a + b + 2) : (b * b - a * a) / (c * (c + 2));
  }
  for (int k = 1; k < n; ++k) {
    double c = 2.0 * k + a + b;
    double v = k == 1 ? 4 * (1 + a) * (1 + b) / ((2 + a + b) * (2 + a + b) * (3 + a + b))
                      : 4.0 * k * (k + a) * (k + b) * (k + a + b) / (c * c * (c + 1) * (c - 1));
    e(k - 1) = std::sqrt(v);
  }
  std::vector<double> out(n);
  if (n == 1) {
    out[0] = d(0);
    return out;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(d, e, Eigen::EigenvaluesOnly);
  for (int i = 0; i < n; ++i)
    out[i] = es.eigenvalues()(i);
  return out;
}

} // namespace detail

// Gauss-Jacobi rule for (1-x)^a (1+x)^b on [-1,1] at the working precision
inline GaussRule gauss_jacobi(int n, const Real &a, const Real &b) {
  if (n < 1)
    throw DomainError("Gauss rule needs at least one node");
  if (!(a > -1) || !(b > -1))
    throw DomainError("Jacobi exponents must exceed -1");
  auto seeds = detail::jacobi_seed_nodes(n, a.to_double(), b.to_double());
  GaussRule g;
  g.x.reserve(n);
  g.w.reserve(n);
  const Real eps = exp2i(4 - working_bits());
  Real norm = pow(Real(2), a + b + 1) *
              exp(lgamma_abs(n + a + 1) + lgamma_abs(n + b + 1) - lgamma_abs(n + a + b + 1) - lgamma_abs(Real(n + 1)));
  for (int i = 0; i < n; ++i) {
    Real x(seeds[i]), p, dp;
    for (int it = 0; it < 200; ++it) {
      detail::jacobi_eval(n, a, b, x, p, dp);
      Real dx = p / dp;
      x -= dx;
      if (abs(dx) <= eps * max(Real(1e-300), abs(x)) || iszero(dx))
        break;
    }
    detail::jacobi_eval(n, a, b, x, p, dp);
    g.w.push_back(norm / ((1 - x * x) * dp * dp));
    g.x.push_back(std::move(x));
  }
  return g;
}

namespace detail {

inline std::mutex &rule_mutex() {
  static std::mutex m;
  return m;
}

inline KronrodRule build_kronrod(int n) {
  GaussRule g = gauss_jacobi(n, Real(0), Real(0));
  // monomial moments of P_n, exact by a larger Gauss rule
  GaussRule big = gauss_jacobi((3 * n + 2) / 2 + 2, Real(0), Real(0));
  std::vector<Real> mu(2 * n + 3);
  for (std::size_t i = 0; i < big.x.size(); ++i) {
    Real p, dp;
    jacobi_eval(n, Real(0), Real(0), big.x[i], p, dp);
    Real term = big.w[i] * p;
    for (auto &m : mu) {
      m += term;
      term *= big.x[i];
    }
  }
  // Stieltjes polynomial E(x) = x^{n+1} + sum c_i x^i, orthogonal to P_n x^k
  std::vector<int> ui, ek;
  for (int i = 0; i < n + 1; ++i)
    if ((i - (n + 1)) % 2 == 0)
      ui.push_back(i);
  for (int k = 0; k <= n; ++k)
    if (k % 2 == 1)
      ek.push_back(k);
  if (ui.size() != ek.size())
    throw DomainError("Kronrod construction: unbalanced system");
  RMatrix A(ui.size(), ui.size());
  std::vector<Real> rhs(ui.size());
  for (std::size_t e = 0; e < ek.size(); ++e) {
    for (std::size_t u = 0; u < ui.size(); ++u)
      A(e, u) = mu[ui[u] + ek[e]];
    rhs[e] = -mu[n + 1 + ek[e]];
  }
  auto c = solve(A, rhs);
  std::vector<Real> coef(n + 2);
  coef[n + 1] = Real(1);
  for (std::size_t u = 0; u < ui.size(); ++u)
    coef[ui[u]] = c[u];
  auto E = [&](const Real &x) {
    Real s(0);
    for (int i = n + 1; i >= 0; --i)
      s = s * x + coef[i];
    return s;
  };
  std::vector<Real> edges{Real(-1)};
  for (auto &x : g.x)
    edges.push_back(x);
  edges.push_back(Real(1));
  std::vector<Real> ext;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    Real lo = edges[i], hi = edges[i + 1];
    Real flo = E(lo);
    for (long it = 0; it < working_bits() + 8; ++it) {
      Real mid = (lo + hi) / 2;
      if (mid == lo || mid == hi)
        break;
      Real fm = E(mid);
      if (sign(fm) == sign(flo)) {
        lo = std::move(mid);
        flo = std::move(fm);
      } else {
        hi = std::move(mid);
      }
    }
    ext.push_back((lo + hi) / 2);
  }
  KronrodRule k;
  for (int i = 0; i < n; ++i) {
    k.x.push_back(ext[i]);
    k.wg.push_back(Real(0));
    k.x.push_back(g.x[i]);
    k.wg.push_back(g.w[i]);
  }
  k.x.push_back(ext[n]);
  k.wg.push_back(Real(0));
  // weights integrating Legendre polynomials P_0..P_{2n} exactly
  const std::size_t m = k.x.size();
  RMatrix V(m, m);
  for (std::size_t j = 0; j < m; ++j) {
    Real p0(1), p1 = k.x[j];
    V(0, j) = p0;
    V(1, j) = p1;
    for (std::size_t d = 2; d < m; ++d) {
      Real p2 = ((2 * long(d) - 1) * k.x[j] * p1 - (long(d) - 1) * p0) / long(d);
      V(d, j) = p2;
      p0 = std::move(p1);
      p1 = std::move(p2);
    }
  }
  std::vector<Real> b(m);
  b[0] = Real(2);
  k.wk = solve(V, b);
  return k;
}

} // namespace detail

inline const KronrodRule &gauss_kronrod(int n = 10) {
  using Key = std::pair<long, int>;
  static std::map<Key, std::unique_ptr<KronrodRule>> cache;
  std::lock_guard<std::mutex> lock(detail::rule_mutex());
  auto &slot = cache[{working_bits(), n}];
  if (!slot)
    slot = std::make_unique<KronrodRule>(detail::build_kronrod(n));
  return *slot;
}

inline const GaussRule &gauss_legendre(int n) {
  using Key = std::pair<long, int>;
  static std::map<Key, std::unique_ptr<GaussRule>> cache;
  std::lock_guard<std::mutex> lock(detail::rule_mutex());
  auto &slot = cache[{working_bits(), n}];
  if (!slot)
    slot = std::make_unique<GaussRule>(gauss_jacobi(n, Real(0), Real(0)));
  return *slot;
}

template <std::size_t N> using CVec = std::array<Complex, N>;

struct QuadResult {
  Complex value;
  Real abs_error_estimate;
  long evaluations = 0;
};

template <std::size_t N> struct QuadResultN {
  CVec<N> value;
  std::array<Real, N> abs_error_estimate;
  long evaluations = 0;
};

template <std::size_t N> struct Panel {
  std::size_t seg;
  Real u0, u1;
  CVec<N> kronrod;
  std::array<Real, N> err;
  std::array<Real, N> l1;
  bool splittable = true;
};

// Node of a finished panel set, weights already multiplied by dz/du and the panel half-width.
struct WeightedNode {
  PathPoint p;
  Complex wk, wg;
};

struct AdaptiveOptions {
  int initial_pieces = 1; // uniform pre-split of every segment
  Real abs_floor;         // absolute error accepted regardless of the value
};

namespace detail {

template <std::size_t N, class F>
Panel<N> eval_panel(F &f, const ContourPath &path, std::size_t seg, const Real &u0, const Real &u1,
                    const KronrodRule &rule, long &evals) {
  Panel<N> p{seg, u0, u1, {}, {}, {}};
  CVec<N> gsum;
  const Real h = (u1 - u0) / 2, mid = (u0 + u1) / 2;
  const auto &segment = path.segments[seg];
  for (std::size_t i = 0; i < rule.x.size(); ++i) {
    PathPoint pt = segment.at(mid + h * rule.x[i]);
    CVec<N> v = f(pt);
    ++evals;
    for (std::size_t c = 0; c < N; ++c) {
      if (!isfinite(v[c]))
        throw SingularEndpoint("integrand not finite on " + path.name + " segment " + std::to_string(seg));
      Complex t = v[c] * pt.dz;
      p.l1[c] += abs(t) * abs(rule.wk[i]);
      if (!iszero(rule.wg[i]))
        gsum[c] += t * rule.wg[i];
      p.kronrod[c] += t * rule.wk[i];
    }
  }
  const Real ah = abs(h);
  for (std::size_t c = 0; c < N; ++c) {
    p.kronrod[c] *= h;
    gsum[c] *= h;
    p.err[c] = abs(p.kronrod[c] - gsum[c]);
    p.l1[c] *= ah;
  }
  if (abs(u1 - u0) < exp2i(-working_bits() / 2))
    p.splittable = false;
  return p;
}

} // namespace detail

template <std::size_t N, class F>
std::vector<Panel<N>> adaptive_panels(F &&f, const ContourPath &path, const PrecisionContext &ctx, long &evals,
                                      const AdaptiveOptions &opt = {}) {
  PrecisionGuard guard(ctx.bits);
  const KronrodRule &rule = gauss_kronrod(10);
  const Real roundoff = exp2i(24 - ctx.bits);
  std::vector<Panel<N>> panels;
  CVec<N> total;
  std::array<Real, N> err_total, l1_total;
  auto add = [&](const Panel<N> &p, int s) {
    for (std::size_t c = 0; c < N; ++c) {
      if (s > 0) {
        total[c] += p.kronrod[c];
        err_total[c] += p.err[c];
        l1_total[c] += p.l1[c];
      } else {
        total[c] -= p.kronrod[c];
        err_total[c] -= p.err[c];
        l1_total[c] -= p.l1[c];
      }
    }
  };
  for (std::size_t s = 0; s < path.segments.size(); ++s)
    for (int k = 0; k < opt.initial_pieces; ++k) {
      panels.push_back(detail::eval_panel<N>(f, path, s, Real(k) / opt.initial_pieces,
                                             Real(k + 1) / opt.initial_pieces, rule, evals));
      add(panels.back(), 1);
    }
  auto targets = [&] {
    std::array<Real, N> t;
    for (std::size_t c = 0; c < N; ++c)
      t[c] = max(max(ctx.quad_tol * abs(total[c]), roundoff * l1_total[c]), opt.abs_floor);
    return t;
  };
  // max-heap on badness; ties broken by panel index for determinism
  using Item = std::pair<double, std::size_t>;
  auto badness = [&](const Panel<N> &p, const std::array<Real, N> &t) {
    if (!p.splittable)
      return -1.0;
    double b = 0;
    for (std::size_t c = 0; c < N; ++c) {
      if (iszero(p.err[c]))
        continue;
      Real r = iszero(t[c]) ? Real(1e300) : p.err[c] / t[c];
      b = std::max(b, r.to_double());
    }
    return b;
  };
  auto cmp = [](const Item &a, const Item &b) { return a.first < b.first || (a.first == b.first && a.second > b.second); };
  std::priority_queue<Item, std::vector<Item>, decltype(cmp)> heap(cmp);
  {
    auto t = targets();
    for (std::size_t i = 0; i < panels.size(); ++i)
      heap.push({badness(panels[i], t), i});
  }
  while (true) {
    auto t = targets();
    bool done = true;
    for (std::size_t c = 0; c < N; ++c)
      if (err_total[c] > t[c])
        done = false;
    if (done)
      break;
    if (long(panels.size()) >= ctx.max_subdiv || heap.empty() || heap.top().first < 0) {
      std::string worst;
      for (std::size_t c = 0; c < N; ++c)
        worst += (c ? "," : "") + (err_total[c] / max(abs(total[c]), exp2i(-ctx.bits))).str(3);
      throw NonConvergence("quadrature on " + path.name + " did not reach tolerance after " +
                           std::to_string(panels.size()) + " panels (relative error " + worst + ")");
    }
    std::size_t idx = heap.top().second;
    heap.pop();
    Panel<N> parent = panels[idx];
    add(parent, -1);
    Real mid = (parent.u0 + parent.u1) / 2;
    panels[idx] = detail::eval_panel<N>(f, path, parent.seg, parent.u0, mid, rule, evals);
    panels.push_back(detail::eval_panel<N>(f, path, parent.seg, mid, parent.u1, rule, evals));
    add(panels[idx], 1);
    add(panels.back(), 1);
    t = targets();
    heap.push({badness(panels[idx], t), idx});
    heap.push({badness(panels.back(), t), panels.size() - 1});
  }
  // stable order: by segment, then by parameter
  std::sort(panels.begin(), panels.end(), [](const Panel<N> &a, const Panel<N> &b) {
    return a.seg != b.seg ? a.seg < b.seg : a.u0 < b.u0;
  });
  return panels;
}

template <std::size_t N, class F>
QuadResultN<N> integrate_path_n(F &&f, const ContourPath &path, const PrecisionContext &ctx,
                                const AdaptiveOptions &opt = {}) {
  long evals = 0;
  auto panels = adaptive_panels<N>(f, path, ctx, evals, opt);
  PrecisionGuard guard(ctx.bits);
  QuadResultN<N> r;
  for (auto &p : panels)
    for (std::size_t c = 0; c < N; ++c) {
      r.value[c] += p.kronrod[c];
      r.abs_error_estimate[c] += p.err[c];
    }
  r.evaluations = evals;
  return r;
}

// Integrand receives either the point (Complex) or the full PathPoint with lifted argument.
template <class F>
QuadResult integrate_path(F &&f, const ContourPath &path, const PrecisionContext &ctx, const AdaptiveOptions &opt = {}) {
  auto wrap = [&](const PathPoint &pt) -> CVec<1> {
    if constexpr (std::is_invocable_v<F &, const PathPoint &>)
      return {f(pt)};
    else
      return {f(pt.z)};
  };
  auto r = integrate_path_n<1>(wrap, path, ctx, opt);
  return {std::move(r.value[0]), std::move(r.abs_error_estimate[0]), r.evaluations};
}

template <std::size_t N>
std::vector<WeightedNode> panel_nodes(const ContourPath &path, const std::vector<Panel<N>> &panels) {
  const KronrodRule &rule = gauss_kronrod(10);
  std::vector<WeightedNode> out;
  out.reserve(panels.size() * rule.x.size());
  for (auto &p : panels) {
    const Real h = (p.u1 - p.u0) / 2, mid = (p.u0 + p.u1) / 2;
    for (std::size_t i = 0; i < rule.x.size(); ++i) {
      PathPoint pt = path.segments[p.seg].at(mid + h * rule.x[i]);
      Complex base = pt.dz * h;
      WeightedNode n{std::move(pt), base * rule.wk[i], base * rule.wg[i]};
      out.push_back(std::move(n));
    }
  }
  return out;
}

// order-th derivative of an analytic f at z from the Cauchy integral over
// |w - z| = radius, trapezoidal rule doubled until successive values agree
template <class F>
Complex differentiate(F &&f, const Complex &z, int order, const PrecisionContext &ctx, double radius = 0.25) {
  if (order < 1 || order > 3)
    throw DomainError("derivative order must be 1, 2 or 3");
  if (!(radius > 0))
    throw DomainError("Cauchy radius must be positive");
  PrecisionGuard guard(ctx.bits);
  const Real r(radius);
  const Real twopi = 2 * pi();
  std::vector<Complex> samples; // f(z + r e^{i theta_k}) e^{-i order theta_k}
  auto sample = [&](long k, long n) {
    Real th = twopi * k / n;
    Complex w = expi(th);
    return f(z + w * r) * expi(-order * th);
  };
  long n = 16;
  Complex sum;
  for (long k = 0; k < n; ++k)
    sum += sample(k, n);
  Real fact(order == 3 ? 6 : order);
  auto estimate = [&](long m) { return sum * (fact / (pow(r, long(order)) * m)); };
  Complex prev = estimate(n);
  const Real floor = exp2i(32 - ctx.bits);
  for (; n <= 8192; n *= 2) {
    for (long k = 1; k < 2 * n; k += 2)
      sum += sample(k, 2 * n);
    Complex cur = estimate(2 * n);
    Real diff = abs(cur - prev);
    if (diff <= max(ctx.quad_tol * abs(cur), floor * max(Real(1), abs(cur))))
      return cur;
    prev = std::move(cur);
  }
  throw NonConvergence("Cauchy-circle derivative did not converge");
}

} // namespace angelesco
