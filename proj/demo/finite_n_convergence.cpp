// Finite-n Angelesco ensemble with flat weights on [a_n, 0] and [0, 1]:
// the rescaled kernel near the touching point against its n -> infinity limit.

#include <cmath>
#include <cstdio>

#include "angelesco.hpp"

using namespace angelesco;

int main() {
  PrecisionContext ctx(256, 1e-20);
  PrecisionGuard g(ctx.bits);
  const double x = 1, y = 2, tau = 0.5;
  Real limit = kernel_pairing(x, y, KernelParams{0, tau}, ctx).value;
  std::printf("limit K(%g, %g; tau = %g) = %s\n\n", x, y, tau, limit.str(20).c_str());
  std::printf("%4s %6s %-24s %-10s\n", "n", "bits", "scaled K_{n,n}", "abs error");
  double prev = 0;
  for (int n : {4, 8, 16, 32, 64}) {
    auto r = converge_to_angelesco({x, y, tau, n}, ExponentTemplate{}, ctx, &limit);
    double e = r.abs_error.to_double();
    std::printf("%4d %6ld %-24s %-10.3e", n, finite_n_bits(n, n), r.lhs.str(18).c_str(), e);
    if (prev > 0)
      std::printf("  local rate n^%.2f", std::log(e / prev) / std::log(2.0));
    std::printf("\n");
    prev = e;
  }

  // one-point density of the n = (4, 4) ensemble at a = -1
  auto sys = moments(WeightSpec{}, 4, 4);
  std::printf("\ndensity K(x, x), n = (4, 4), a = -1:\n");
  for (double t : {-0.9, -0.5, -0.1, 0.1, 0.5, 0.9})
    std::printf("  x = %5.2f  %s\n", t, kernel_finite(sys, t, t).str(12).c_str());
  return 0;
}
