// Closed-form single-wave solution checked against the finite-difference Dirac operator.
#include <estc/estc.hpp>

#include <cstdio>

int main() {
  using Real = long double;
  using namespace estc;
  VolkovParams<Real> p;
  p.a31 = 0.03;
  p.b32 = 0.02;
  p.q = {0.1, -0.2, 0.05};
  p.q4 = 1.3;
  p.Omega = 0.1;
  const std::array<Real, 4> X{0.31, 0.77, 0.12, 0.54};
  auto ev = [&](const std::array<Real, 4>& Y) { return volkov_Ev(Y, p); };
  const Mat4<Real> r = apply_dirac_fd<Real>(ev, X, p.field(), p.Omega, Real(1e-4));
  std::printf("max |D E_v| = %.3Le   max |E_v| = %.3Le\n", r.cwiseAbs().maxCoeff(), ev(X).cwiseAbs().maxCoeff());
  std::printf("1 + Q'^2 + I_A = %.3Le\n", volkov_dispersion_residual(p));
  std::printf("xi_V(q=0, I_A=4e-4) = %.10Le\n", xi_volkov<Real>({0, 0, 0}, Real(4e-4)));
}
