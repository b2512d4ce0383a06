// Spin trajectory of an equal-weight superposition of the two doublet lines.
#include <estc/estc.hpp>

#include <cmath>
#include <cstdio>
#include <numbers>

int main() {
  using Real = long double;
  using namespace estc;
  Problem<Real> pb;
  const Real a = Real(0.01) / std::sqrt(Real(2));
  pb.field.add(1, 2, a, 0).add(1, 3, 0, a).add(4, 2, a, 0).add(4, 3, 0, a);
  pb.Omega = Real(0.1);
  pb.g_max = 4;
  const auto gs = ground_state<Real>(pb, Real(1.980e-4), Real(1.996e-4), 5);
  if (!gs.doublet) return 1;
  const auto ms = mixed_state(*gs.doublet, std::numbers::pi_v<Real> / 4, Real(0));
  const double period = 1 / gs.doublet->nu_pr_hz;
  std::printf("nu_pr = %.6e Hz, E = %.12Lf\n", gs.doublet->nu_pr_hz, ms.E);
  for (int i = 0; i <= 8; ++i) {
    const double t = period * i / 8;
    const auto s = ms.spin(t);
    std::printf("t = %.4e s  <Sigma> = (% .6Lf, % .6Lf, % .6Lf)\n", t, s[0], s[1], s[2]);
  }
}
