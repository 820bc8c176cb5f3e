#pragma once

// Batch front end: kernel, converge, verify, gap, grid.
// Exit codes: 0 success, 1 failed verification / non-monotone convergence,
// 2 invalid input, 3 numerical failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "angelesco_kernel.hpp"
#include "finite_n.hpp"
#include "io.hpp"
#include "parallel.hpp"
#include "verify.hpp"

namespace angelesco {

struct RunConfig {
  std::string command;
  long precision_bits = 256;
  double quad_tol = 1e-20;
  std::string output_path; // empty: stdout

  // kernel / converge / grid
  double x = 0, y = 0, tau = 0, beta = 0, alpha = 0, gamma = 0;
  std::string method = "all";
  std::vector<int> nlist{4, 8, 16, 32};
  // verify
  std::string suite = "all";
  int n = 4;
  double verify_beta = 0.5, verify_tau = 0.3;
  // gap
  std::string a_text;
  // grid
  double xmin = 0, xmax = 0, offset = 1e-3;
  long steps = -1;
  int finite_n = 0;
  double a = -1;

  PrecisionContext context() const { return PrecisionContext(precision_bits, quad_tol); }
  int digits() const { return digits_for_bits(precision_bits); }
};

namespace detail {

inline void emit(const RunConfig &c, const std::string &text, std::ostream &out) {
  if (c.output_path.empty())
    out << text;
  else
    atomic_write(c.output_path, text);
}

inline std::vector<KernelMethod> methods_for(const std::string &m) {
  if (m == "all")
    return {KernelMethod::Pairing, KernelMethod::Double, KernelMethod::Psi};
  if (m == "pairing")
    return {KernelMethod::Pairing};
  if (m == "double")
    return {KernelMethod::Double};
  if (m == "psi")
    return {KernelMethod::Psi};
  throw DomainError("unknown method '" + m + "'");
}

inline int cmd_kernel(const RunConfig &c, std::ostream &out) {
  if (c.x == c.y)
    throw CoincidentPoints("coincident points unsupported (x == y)");
  KernelParams p{c.beta, c.tau};
  p.validate();
  auto ctx = c.context();
  auto ms = methods_for(c.method);
  nlohmann::json results = nlohmann::json::array();
  for (auto m : ms) {
    auto e = kernel(c.x, c.y, p, ctx, m);
    results.push_back({{"method", method_name(m)},
                       {"value", e.value.str(c.digits())},
                       {"imag_residual", e.imag_residual.str(6)},
                       {"error_estimate", e.abs_error_estimate.str(6)}});
  }
  nlohmann::json doc = {{"x", c.x},       {"y", c.y},    {"tau", c.tau},
                        {"beta", c.beta}, {"bits", c.precision_bits}, {"results", results}};
  emit(c, doc.dump(2) + "\n", out);
  return 0;
}

inline int cmd_converge(const RunConfig &c, std::ostream &out, std::ostream &err) {
  if (c.y == 0)
    throw DomainError("y must be nonzero");
  if (c.nlist.empty())
    throw DomainError("--nlist is empty");
  for (int n : c.nlist)
    if (n < 1)
      throw DomainError("--nlist entries must be positive");
  auto ctx = c.context();
  ExponentTemplate e{c.alpha, c.beta, c.gamma, {}, {}};
  PrecisionGuard g(ctx.bits);
  Real rhs = kernel_pairing(c.x, c.y, KernelParams{c.beta, c.tau}, ctx).value;
  auto recs = parallel_map(c.nlist.size(), [&](std::size_t i) {
    try {
      return converge_to_angelesco({c.x, c.y, c.tau, c.nlist[i]}, e, ctx, &rhs);
    } catch (const PrecisionInsufficient &ex) {
      throw PrecisionInsufficient("n=" + std::to_string(c.nlist[i]) + ": " + ex.what());
    }
  });
  CsvTable t({"n", "x", "y", "lhs", "rhs", "abs_error"});
  bool monotone = true;
  for (std::size_t i = 0; i < recs.size(); ++i) {
    const auto &r = recs[i];
    t.row({std::to_string(r.n), fmt_param(r.x), fmt_param(r.y), r.lhs.str(c.digits()), r.rhs.str(c.digits()),
           r.abs_error.str(c.digits())});
    if (i && r.abs_error > recs[i - 1].abs_error)
      monotone = false;
  }
  emit(c, t.str(), out);
  if (!monotone)
    err << "abs_error is not monotone nonincreasing along the n list\n";
  return monotone ? 0 : 1;
}

inline int cmd_verify(const RunConfig &c, std::ostream &out) {
  VerifyOptions o{KernelParams{c.verify_beta, c.verify_tau}, c.n, c.context()};
  o.params.validate();
  if (c.n < 1)
    throw DomainError("--n must be positive");
  std::vector<std::string> suites;
  if (c.suite == "all")
    suites = suite_names();
  else {
    std::stringstream s(c.suite);
    for (std::string part; std::getline(s, part, ',');)
      suites.push_back(part);
  }
  for (auto &s : suites)
    if (std::find(suite_names().begin(), suite_names().end(), s) == suite_names().end())
      throw DomainError("unknown suite '" + s + "'");
  auto checks = run_suites(suites, o);
  auto report = verify_report(checks);
  emit(c, report.dump(2) + "\n", out);
  return report["pass"].get<bool>() ? 0 : 1;
}

inline int cmd_gap(const RunConfig &c, std::ostream &out) {
  mpq_class a = parse_rational(c.a_text);
  if (a >= 0)
    throw DomainError("--a must be negative");
  mpq_class s = gap_endpoint_exact(a);
  mpq_class w = abs(s);
  PrecisionGuard g(c.precision_bits);
  auto dec = [&](const mpq_class &q) {
    Real r;
    mpfr_set_q(r.get(), q.get_mpq_t(), MPFR_RNDN);
    return r.str(c.digits());
  };
  nlohmann::json doc = {{"a", rational_str(a)},
                        {"s_a", rational_str(s)},
                        {"s_a_decimal", dec(s)},
                        {"gap_width", rational_str(w)},
                        {"gap_width_decimal", dec(w)}};
  emit(c, doc.dump(2) + "\n", out);
  return 0;
}

inline int cmd_grid(const RunConfig &c, std::ostream &out) {
  if (c.steps <= 0)
    throw DomainError("--steps must be positive");
  if (!(c.xmax > c.xmin))
    throw DomainError("--xmax must exceed --xmin");
  auto ctx = c.context();
  const double step = (c.xmax - c.xmin) / double(c.steps);
  std::vector<double> xs;
  for (long i = 0; i < c.steps; ++i)
    xs.push_back(c.xmin + (double(i) + 0.5) * step);
  std::vector<Real> vals;
  int digits = c.digits();
  if (c.finite_n > 0) {
    WeightSpec w{c.a, c.alpha, c.beta, c.gamma, {}, {}};
    auto sys = moments(w, c.finite_n, c.finite_n, std::max(ctx.bits, finite_n_bits(c.finite_n, c.finite_n)));
    digits = digits_for_bits(sys.precision_bits());
    vals = parallel_map(xs.size(), [&](std::size_t i) { return kernel_finite(sys, xs[i], xs[i]); });
  } else {
    KernelParams p{c.beta, c.tau};
    p.validate();
    auto ms = methods_for(c.method == "all" ? "pairing" : c.method);
    vals = parallel_map(xs.size(), [&](std::size_t i) { return kernel(xs[i], xs[i] + c.offset, p, ctx, ms[0]).value; });
  }
  CsvTable t({"x", "value"});
  for (std::size_t i = 0; i < xs.size(); ++i)
    t.row({fmt_param(xs[i]), vals[i].str(digits)});
  emit(c, t.str(), out);
  return 0;
}

} // namespace detail

inline int run_cli(std::vector<std::string> args, std::ostream &out = std::cout, std::ostream &err = std::cerr) {
  RunConfig c;
  try {
    c.precision_bits = default_bits_from_env(256);
  } catch (const Error &e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  CLI::App app{"Angelesco kernel and finite-n multiple orthogonal polynomial ensemble"};
  app.require_subcommand(1);
  app.fallthrough();
  std::optional<long> prec;
  app.add_option("--prec", prec, "working precision in bits (default 256 or ANGELESCO_PREC_BITS)")->check(CLI::Range(64L, 1L << 20));
  app.add_option("--tol", c.quad_tol, "relative quadrature tolerance")->check(CLI::PositiveNumber);
  app.add_option("--out", c.output_path, "write output here (atomically) instead of stdout");

  auto *k = app.add_subcommand("kernel", "evaluate the limiting kernel");
  k->add_option("--x", c.x)->required();
  k->add_option("--y", c.y)->required();
  k->add_option("--tau", c.tau)->required();
  k->add_option("--beta", c.beta)->required();
  k->add_option("--method", c.method)->check(CLI::IsMember({"pairing", "double", "psi", "all"}));

  auto *cv = app.add_subcommand("converge", "finite-n kernel against the limit along n");
  cv->add_option("--x", c.x)->required();
  cv->add_option("--y", c.y)->required();
  cv->add_option("--tau", c.tau)->required();
  cv->add_option("--beta", c.beta);
  cv->add_option("--alpha", c.alpha);
  cv->add_option("--gamma", c.gamma);
  cv->add_option("--nlist", c.nlist)->delimiter(',');

  auto *v = app.add_subcommand("verify", "run identity suites");
  v->add_option("--suite", c.suite, "suite name, comma list, or all");
  v->add_option("--n", c.n, "multi-index (n, n) for traces and projection");
  v->add_option("--beta", c.verify_beta);
  v->add_option("--tau", c.verify_tau);

  auto *gp = app.add_subcommand("gap", "gap endpoint s_a");
  gp->add_option("--a", c.a_text)->required();

  auto *gr = app.add_subcommand("grid", "kernel profile or finite-n density on a midpoint grid");
  gr->add_option("--xmin", c.xmin)->required();
  gr->add_option("--xmax", c.xmax)->required();
  gr->add_option("--steps", c.steps)->required();
  gr->add_option("--tau", c.tau);
  gr->add_option("--beta", c.beta);
  gr->add_option("--offset", c.offset, "profile K(x, x + offset)");
  gr->add_option("--method", c.method)->check(CLI::IsMember({"pairing", "double", "psi", "all"}));
  gr->add_option("--finite-n", c.finite_n);
  gr->add_option("--a", c.a);
  gr->add_option("--alpha", c.alpha);
  gr->add_option("--gamma", c.gamma);

  // CLI11 wants argv order reversed in the vector overload
  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp &) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError &e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  if (prec)
    c.precision_bits = *prec;
  try {
    c.context(); // validates bits against tol before any computation
    if (k->parsed())
      return c.command = "kernel", detail::cmd_kernel(c, out);
    if (cv->parsed())
      return c.command = "converge", detail::cmd_converge(c, out, err);
    if (v->parsed())
      return c.command = "verify", detail::cmd_verify(c, out);
    if (gp->parsed())
      return c.command = "gap", detail::cmd_gap(c, out);
    if (gr->parsed())
      return c.command = "grid", detail::cmd_grid(c, out);
  } catch (const NonConvergence &e) {
    err << "error: " << e.what() << "\n";
    return 3;
  } catch (const PrecisionInsufficient &e) {
    err << "error: " << e.what() << "\n";
    return 3;
  } catch (const NearSingularDenominator &e) {
    err << "error: " << e.what() << "\n";
    return 3;
  } catch (const Error &e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

} // namespace angelesco
