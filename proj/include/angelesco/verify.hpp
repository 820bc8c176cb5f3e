#pragma once

// Identity and invariant suites shared by the command line front end and
// the acceptance runner. Every check reports its worst error against a
// fixed tolerance.

#include <json.hpp>

#include <array>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "angelesco_kernel.hpp"
#include "finite_n.hpp"
#include "parallel.hpp"
#include "psi_parametrix.hpp"

namespace angelesco {

struct Check {
  std::string suite, name;
  double max_error = 0, tolerance = 0;
  bool pass = false;
  nlohmann::json extra = nlohmann::json::object();
};

inline Check make_check(std::string suite, std::string name, double err, double tol,
                        nlohmann::json extra = nlohmann::json::object()) {
  return {std::move(suite), std::move(name), err, tol, std::isfinite(err) && err < tol, std::move(extra)};
}

inline nlohmann::json check_json(const Check &c) {
  nlohmann::json j = {{"suite", c.suite},
                      {"name", c.name},
                      {"max_error", c.max_error},
                      {"tolerance", c.tolerance},
                      {"pass", c.pass}};
  for (auto it = c.extra.begin(); it != c.extra.end(); ++it)
    j[it.key()] = it.value();
  return j;
}

inline std::string fmt_param(double v) {
  std::ostringstream s;
  s << v;
  return s.str();
}

// ---- solution tables -------------------------------------------------------

struct SolutionSet {
  std::array<SolutionTriple, 3> q, r;
};

inline SolutionSet solution_set(const Complex &z, const KernelParams &p, const PrecisionContext &ctx,
                                bool with_third) {
  SolutionSet s;
  for (int j = 1; j <= 3; ++j) {
    s.q[j - 1] = q_j(j, z, p, ctx, CutSide::Upper, with_third);
    s.r[j - 1] = r_k(j, z, p, ctx, CutSide::Upper, with_third);
  }
  return s;
}

// |B[q_j, r_k](z, z) - delta_jk|
inline std::array<std::array<double, 3>, 3> kronecker_deviation(const SolutionSet &s, const Complex &z,
                                                                const KernelParams &p) {
  std::array<std::array<double, 3>, 3> d{};
  for (int j = 0; j < 3; ++j)
    for (int k = 0; k < 3; ++k) {
      Complex b = concomitant(s.q[j], s.r[k], z, z, p);
      if (j == k)
        b -= Complex(1);
      d[j][k] = abs(b).to_double();
    }
  return d;
}

inline std::vector<Complex> default_solution_points() {
  return {Complex(Real(1)), Complex(Real(1), Real(0.5)), Complex(Real(2))};
}

// ten points with Re z > 0
inline std::vector<Complex> ode_grid_points() {
  std::vector<Complex> z;
  const double pts[10][2] = {{1, 0},   {2, 0},    {1, 0.5}, {1, -0.5}, {0.3, 0.2},
                             {0.5, 2}, {3, -1.5}, {5, 1},   {0.1, -0.05}, {1.5, 1.5}};
  for (auto &p : pts)
    z.emplace_back(Real(p[0]), Real(p[1]));
  return z;
}

inline std::vector<Check> suite_concomitant(const KernelParams &p, const PrecisionContext &ctx,
                                            const std::vector<Complex> &zs = default_solution_points()) {
  auto sets = parallel_map(zs.size(), [&](std::size_t i) {
    PrecisionGuard g(ctx.bits);
    return kronecker_deviation(solution_set(zs[i], p, ctx, false), zs[i], p);
  });
  std::vector<Check> out;
  for (int j = 0; j < 3; ++j)
    for (int k = 0; k < 3; ++k) {
      double worst = 0;
      for (auto &d : sets)
        worst = std::max(worst, d[j][k]);
      out.push_back(make_check("concomitant", "B[q" + std::to_string(j + 1) + ",r" + std::to_string(k + 1) + "]",
                               worst, 1e-10, {{"j", j + 1}, {"k", k + 1}}));
    }
  return out;
}

struct OdeResiduals {
  std::array<double, 3> q{}, r{};
};

inline OdeResiduals ode_residuals(const SolutionSet &s, const Complex &z, const KernelParams &p) {
  OdeResiduals o;
  for (int j = 0; j < 3; ++j) {
    o.q[j] = ode_residual_q(s.q[j], z, p).relative().to_double();
    o.r[j] = ode_residual_r(s.r[j], z, p).relative().to_double();
  }
  return o;
}

inline std::vector<Check> suite_ode(const KernelParams &p, const PrecisionContext &ctx,
                                    const std::vector<Complex> &zs = ode_grid_points()) {
  auto res = parallel_map(zs.size(), [&](std::size_t i) {
    PrecisionGuard g(ctx.bits);
    return ode_residuals(solution_set(zs[i], p, ctx, true), zs[i], p);
  });
  std::vector<Check> out;
  for (int j = 0; j < 3; ++j) {
    double wq = 0, wr = 0;
    for (auto &o : res) {
      wq = std::max(wq, o.q[j]);
      wr = std::max(wr, o.r[j]);
    }
    out.push_back(make_check("ode", "q" + std::to_string(j + 1) + " residual", wq, 1e-10));
    out.push_back(make_check("ode", "r" + std::to_string(j + 1) + " adjoint residual", wr, 1e-10));
  }
  return out;
}

// ---- Psi ---------------------------------------------------------------------

inline std::vector<Check> suite_jumps(const KernelParams &p, const PrecisionContext &ctx,
                                      const std::vector<double> &radii = {0.5, 1, 2}) {
  struct Job {
    PsiRay ray;
    double radius;
  };
  std::vector<Job> jobs;
  for (PsiRay r : all_psi_rays)
    for (double rad : radii)
      jobs.push_back({r, rad});
  auto errs = parallel_map(jobs.size(), [&](std::size_t i) {
    return jump_relative_error(jobs[i].ray, jobs[i].radius, p, ctx, BoundaryMethod::Offset).to_double();
  });
  std::vector<Check> out;
  for (std::size_t i = 0; i < jobs.size(); ++i)
    out.push_back(make_check("jumps", std::string(psi_ray_name(jobs[i].ray)) + " r=" + fmt_param(jobs[i].radius),
                             errs[i], 1e-9,
                             {{"ray", psi_ray_name(jobs[i].ray)},
                              {"radius", jobs[i].radius},
                              {"relative_error", errs[i]}}));
  return out;
}

struct AsymptoticRun {
  double direction;
  std::vector<double> radii, deviations;
  double slope;
};

inline std::vector<double> asymptotic_radii() { return {10, 30, 100, 300}; }
inline std::vector<double> asymptotic_directions() { return {0.4, 1.5}; }

inline AsymptoticRun asymptotic_run(double direction, const KernelParams &p, const PrecisionContext &ctx) {
  AsymptoticRun run{direction, asymptotic_radii(), {}, 0};
  for (auto &d : check_asymptotics(run.radii, direction, p, ctx))
    run.deviations.push_back(d.to_double());
  run.slope = loglog_slope(run.radii, run.deviations);
  return run;
}

inline std::vector<Check> suite_asymptotics(const KernelParams &p, const PrecisionContext &ctx) {
  auto dirs = asymptotic_directions();
  auto runs = parallel_map(dirs.size(), [&](std::size_t i) { return asymptotic_run(dirs[i], p, ctx); });
  std::vector<Check> out;
  for (auto &r : runs) {
    out.push_back(make_check("asymptotics", "slope arg=" + fmt_param(r.direction), std::abs(r.slope + 1.0 / 3), 0.1,
                             {{"slope", r.slope}, {"radii", r.radii}, {"deviations", r.deviations}}));
    out.push_back(make_check("asymptotics", "deviation at rho=10 arg=" + fmt_param(r.direction), r.deviations[0],
                             0.5));
  }
  return out;
}

// ---- limiting kernel ---------------------------------------------------------

struct KernelGridPoint {
  double x, y, tau, beta;
  std::array<KernelEvaluation, 3> eval; // pairing, double, psi
};

inline std::vector<std::pair<double, double>> kernel_grid_pairs() {
  std::vector<std::pair<double, double>> out;
  const double v[] = {-1.5, -0.5, 0.5, 1.5};
  for (double x : v)
    for (double y : v)
      if (x != y)
        out.emplace_back(x, y);
  return out;
}

inline std::vector<KernelGridPoint> evaluate_kernel_grid(const std::vector<double> &betas,
                                                         const std::vector<double> &taus,
                                                         const PrecisionContext &ctx) {
  std::vector<KernelGridPoint> pts;
  for (double b : betas)
    for (double t : taus)
      for (auto [x, y] : kernel_grid_pairs())
        pts.push_back({x, y, t, b, {}});
  auto evals = parallel_map(pts.size(), [&](std::size_t i) {
    const auto &g = pts[i];
    KernelParams p{g.beta, g.tau};
    return std::array<KernelEvaluation, 3>{kernel_pairing(g.x, g.y, p, ctx), kernel_double(g.x, g.y, p, ctx),
                                           kernel_psi(g.x, g.y, p, ctx)};
  });
  for (std::size_t i = 0; i < pts.size(); ++i)
    pts[i].eval = std::move(evals[i]);
  return pts;
}

struct ConsistencySummary {
  double max_pairwise_rel = 0, max_imag_rel = 0;
};

inline ConsistencySummary kernel_consistency(const std::vector<KernelGridPoint> &grid) {
  ConsistencySummary s;
  for (auto &g : grid) {
    for (int a = 0; a < 3; ++a) {
      const double va = g.eval[a].value.to_double();
      for (int b = a + 1; b < 3; ++b) {
        const double vb = g.eval[b].value.to_double();
        double den = std::max(std::abs(va), std::abs(vb));
        double d = (g.eval[a].value - g.eval[b].value).to_double();
        s.max_pairwise_rel = std::max(s.max_pairwise_rel, den > 0 ? std::abs(d) / den : std::abs(d));
      }
      if (std::abs(va) > 1e-6)
        s.max_imag_rel = std::max(s.max_imag_rel, g.eval[a].imag_residual.to_double() / std::abs(va));
    }
  }
  return s;
}

// max |K(x, y; tau) - K(-x, -y; -tau)| per method; the grid is closed under the reflection
inline std::array<double, 3> kernel_symmetry(const std::vector<KernelGridPoint> &grid) {
  std::array<double, 3> worst{};
  for (auto &g : grid)
    for (auto &h : grid)
      if (h.x == -g.x && h.y == -g.y && h.tau == -g.tau && h.beta == g.beta)
        for (int m = 0; m < 3; ++m)
          worst[m] = std::max(worst[m], abs(g.eval[m].value - h.eval[m].value).to_double());
  return worst;
}

inline std::vector<Check> suite_consistency(const std::vector<KernelGridPoint> &grid) {
  auto s = kernel_consistency(grid);
  return {make_check("consistency", "pairwise relative discrepancy", s.max_pairwise_rel, 1e-8,
                     {{"points", grid.size()}}),
          make_check("consistency", "relative imaginary residual", s.max_imag_rel, 1e-8)};
}

inline std::vector<Check> suite_symmetry(const std::vector<KernelGridPoint> &grid) {
  auto w = kernel_symmetry(grid);
  std::vector<Check> out;
  for (int m = 0; m < 3; ++m)
    out.push_back(make_check("symmetry", std::string(method_name(KernelMethod(m))) + " K(x,y;tau)=K(-x,-y;-tau)",
                             w[m], 1e-10));
  return out;
}

// ---- finite n ----------------------------------------------------------------

inline std::vector<WeightSpec> exponent_grid(double a = -1) {
  std::vector<WeightSpec> out;
  for (double al : {-0.5, 0.0, 0.5})
    for (double be : {-0.5, 0.0, 0.5})
      for (double ga : {-0.5, 0.0, 0.5})
        out.push_back(WeightSpec{a, al, be, ga, {}, {}});
  return out;
}

inline std::string exponent_label(const WeightSpec &w) {
  return "alpha=" + fmt_param(w.alpha) + " beta=" + fmt_param(w.beta) + " gamma=" + fmt_param(w.gamma);
}

inline std::vector<Check> suite_traces(int n) {
  auto specs = exponent_grid();
  auto errs = parallel_map(specs.size(), [&](std::size_t i) {
    auto s = moments(specs[i], n, n);
    PrecisionGuard g(s.precision_bits());
    return std::array<double, 2>{abs(kernel_trace(s, 1) - n).to_double(), abs(kernel_trace(s, 2) - n).to_double()};
  });
  std::vector<Check> out;
  for (std::size_t i = 0; i < specs.size(); ++i)
    out.push_back(make_check("traces", "n=" + std::to_string(n) + " " + exponent_label(specs[i]),
                             std::max(errs[i][0], errs[i][1]), 1e-10,
                             {{"block1_error", errs[i][0]}, {"block2_error", errs[i][1]}}));
  return out;
}

inline std::vector<std::pair<double, double>> projection_samples() {
  return {{-0.3, 0.6}, {0.2, -0.7}, {0.45, 0.8}, {-0.8, -0.1}, {0.5, 0.5}};
}

inline std::vector<Check> suite_projection(int n) {
  auto specs = exponent_grid();
  auto errs = parallel_map(specs.size(), [&](std::size_t i) {
    auto s = moments(specs[i], n, n);
    PrecisionGuard g(s.precision_bits());
    double worst = 0;
    for (auto [x, y] : projection_samples())
      worst = std::max(worst, abs(kernel_reproduce(s, x, y) - kernel_finite(s, x, y)).to_double());
    return worst;
  });
  std::vector<Check> out;
  for (std::size_t i = 0; i < specs.size(); ++i)
    out.push_back(make_check("projection", "n=" + std::to_string(n) + " " + exponent_label(specs[i]), errs[i], 1e-8));
  return out;
}

// ---- dispatcher ----------------------------------------------------------------

struct VerifyOptions {
  KernelParams params{0.5, 0.3};
  int n = 4;
  PrecisionContext ctx;
};

inline const std::vector<std::string> &suite_names() {
  static const std::vector<std::string> names{"ode",         "concomitant", "jumps",      "asymptotics",
                                              "consistency", "traces",      "projection", "symmetry"};
  return names;
}

inline std::vector<Check> run_suites(const std::vector<std::string> &suites, const VerifyOptions &o) {
  std::vector<Check> out;
  std::vector<KernelGridPoint> grid;
  bool have_grid = false;
  auto kernel_grid = [&]() -> const std::vector<KernelGridPoint> & {
    if (!have_grid) {
      grid = evaluate_kernel_grid({o.params.beta}, {-0.5, 0.0, 0.5}, o.ctx);
      have_grid = true;
    }
    return grid;
  };
  for (const auto &s : suites) {
    std::vector<Check> c;
    if (s == "ode")
      c = suite_ode(o.params, o.ctx);
    else if (s == "concomitant")
      c = suite_concomitant(o.params, o.ctx);
    else if (s == "jumps")
      c = suite_jumps(o.params, o.ctx);
    else if (s == "asymptotics")
      c = suite_asymptotics(o.params, o.ctx);
    else if (s == "consistency")
      c = suite_consistency(kernel_grid());
    else if (s == "symmetry")
      c = suite_symmetry(kernel_grid());
    else if (s == "traces")
      c = suite_traces(o.n);
    else if (s == "projection")
      c = suite_projection(o.n);
    else
      throw DomainError("unknown suite '" + s + "'");
    out.insert(out.end(), c.begin(), c.end());
  }
  return out;
}

inline nlohmann::json verify_report(const std::vector<Check> &checks) {
  nlohmann::json arr = nlohmann::json::array();
  bool all = true;
  for (auto &c : checks) {
    arr.push_back(check_json(c));
    all = all && c.pass;
  }
  return {{"schema", 1}, {"pass", all}, {"checks", arr}};
}

} // namespace angelesco
