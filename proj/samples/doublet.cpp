// Ground-state doublet for two counterpropagating circularly polarized waves
// (Omega = 0.1, A_m = 0.01, g_max = 4).
#include <estc/estc.hpp>

#include <cmath>
#include <cstdio>

int main() {
  using Real = long double;
  using namespace estc;
  Problem<Real> pb;
  const Real a = Real(0.01) / std::sqrt(Real(2));
  pb.field.add(1, 2, a, 0).add(1, 3, 0, a).add(4, 2, a, 0).add(4, 3, 0, a);
  pb.Omega = Real(0.1);
  pb.g_max = 4;

  const auto gs = ground_state<Real>(pb, Real(1.980e-4), Real(1.996e-4), 9);
  for (const auto& l : gs.search.lines)
    std::printf("xi0 = %.12Le  R0 = %.5Le  beta0 = %.5Le  halfwidth = %.5Le\n", l.xi0, l.R0, l.beta0, l.halfwidth);
  if (gs.doublet) {
    const auto& d = *gs.doublet;
    std::printf("xi_m = %.10Le  delta_xi = %.6Le  nu_pr = %.6e Hz\n", d.xi_m, d.delta_xi, d.nu_pr_hz);
    std::printf("Ea - 1 = %.6Le  dE = %.6Le  <Sigma1>_a = %.12Lf  u0 = %.4Le  v0 = %.4Le\n", d.Ea - 1, d.dE, d.sigma1a,
                d.u0, d.v0);
  }
}
