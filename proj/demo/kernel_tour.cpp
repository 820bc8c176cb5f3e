// Evaluates the limiting kernel at a few points by all three routes and
// prints how far apart they land.

#include <cstdio>

#include "angelesco.hpp"

using namespace angelesco;

int main() {
  PrecisionContext ctx(256, 1e-20);
  PrecisionGuard g(ctx.bits);
  const KernelParams p{0.5, 0.3};
  std::printf("beta = %g, tau = %g\n\n", p.beta, p.tau);
  std::printf("%6s %6s  %-30s %-12s %-12s\n", "x", "y", "K (pairing)", "|pair-dbl|", "|pair-psi|");
  for (auto [x, y] : {std::pair{0.5, 1.5}, std::pair{-0.5, 1.5}, std::pair{0.5, -1.5}, std::pair{-1.0, -0.25}}) {
    Real a = kernel_pairing(x, y, p, ctx).value;
    Real b = kernel_double(x, y, p, ctx).value;
    Real c = kernel_psi(x, y, p, ctx).value;
    std::printf("%6.2f %6.2f  %-30s %-12.3e %-12.3e\n", x, y, a.str(25).c_str(), abs(a - b).to_double(),
                abs(a - c).to_double());
  }

  // the kernel near the diagonal: K(x, x + h) for shrinking h
  std::printf("\nK(1, 1 + h):\n");
  for (double h : {1e-1, 1e-2, 1e-3})
    std::printf("  h = %-6g %s\n", h, kernel_pairing(1, 1 + h, p, ctx).value.str(20).c_str());
  return 0;
}
