#pragma once

#include "evolution.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace estc {

// Electron rest energy over the Planck constant, Hz.
inline constexpr double kRestFrequencyHz = 1.2355899638e20;
// Compton wavelength h/(m_e c), metres; lambda_0 = kComptonWavelength / Omega.
inline constexpr double kComptonWavelength = 2.42631023867e-12;

struct indefinite_norm : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct no_bracket : std::runtime_error {
  using std::runtime_error::runtime_error;
};

template <class Real> struct SpectralPoint {
  Real xi = 0;
  std::array<Real, 4> lambda{};
  std::array<Real, 4> R{};
  std::array<Vec4<Real>, 4> c{};
};

// Rotate so the largest component is real positive; near-ties go to the highest index.
template <class Real> Vec4<Real> fix_phase(Vec4<Real> v) {
  const Real mx = v.cwiseAbs().maxCoeff();
  if (mx == Real(0)) return v;
  int pick = 0;
  for (int i = 0; i < 4; ++i)
    if (std::abs(v(i)) >= mx * (1 - Real(1e-6))) pick = i;
  v *= std::conj(v(pick)) / std::abs(v(pick));
  v(pick) = cplx<Real>(v(pick).real(), 0);
  return v;
}

// Generalized pencil U_D c = lambda U_E c; eigenvectors are U_E-orthonormal.
template <class Real> SpectralPoint<Real> eigen4(const Mat4<Real>& UD, const Mat4<Real>& UE) {
  Eigen::LLT<Mat4<Real>> llt(UE);
  if (llt.info() != Eigen::Success) throw indefinite_norm("eigen4: U_E is not positive definite");
  const Mat4<Real> L = llt.matrixL();
  const Mat4<Real> Li = L.inverse();
  Mat4<Real> C = Li * UD * Li.adjoint();
  C = (C + C.adjoint()).eval() / Real(2);
  Eigen::SelfAdjointEigenSolver<Mat4<Real>> es(C);
  SpectralPoint<Real> p;
  for (int j = 0; j < 4; ++j) {
    p.lambda[j] = std::max(Real(0), es.eigenvalues()(j));
    p.R[j] = std::sqrt(p.lambda[j]);
    p.c[j] = fix_phase<Real>(Li.adjoint() * es.eigenvectors().col(j));
  }
  return p;
}

// Same spectrum from the stacked residual blocks B (U_D = B^dagger B) without squaring:
// R_j are the singular values of B L^{-dagger}, U_E = L L^dagger.
template <class Real> SpectralPoint<Real> eigen4_factored(const MatX<Real>& B, const Mat4<Real>& UE) {
  Eigen::LLT<Mat4<Real>> llt(UE);
  if (llt.info() != Eigen::Success) throw indefinite_norm("eigen4: U_E is not positive definite");
  const Mat4<Real> L = llt.matrixL();
  const Mat4<Real> Li = L.inverse();
  const MatX<Real> Z = B * Li.adjoint();
  Eigen::JacobiSVD<MatX<Real>> svd(Z, Eigen::ComputeThinV);
  SpectralPoint<Real> p;
  for (int j = 0; j < 4; ++j) {
    const int src = 3 - j;  // singular values come in descending order
    p.R[j] = svd.singularValues()(src);
    p.lambda[j] = p.R[j] * p.R[j];
    p.c[j] = fix_phase<Real>(Li.adjoint() * svd.matrixV().col(src));
  }
  return p;
}

template <class Real> struct Problem {
  FieldSpec<Real> field;
  std::array<Real, 3> q{};
  Real Omega = 0;
  int g_max = 1;
  BuildOptions build;

  WaveParams<Real> params(Real xi) const { return WaveParams<Real>{q, xi, Omega}; }
  Real R_av() const { return std::sqrt(field.intensity()); }
};

template <class Real> struct Evaluation {
  SpectralPoint<Real> point;
  SolutionFamily<Real> family;
  Real interior_residual = 0;
};

template <class Real> SpectralPoint<Real> spectrum_of(const SolutionFamily<Real>& fam) {
  const auto blocks = residual_blocks(fam);
  MatX<Real> B(4 * static_cast<Eigen::Index>(blocks.size()), 4);
  for (std::size_t i = 0; i < blocks.size(); ++i) B.template block<4, 4>(4 * i, 0) = blocks[i].second;
  return eigen4_factored(B, build_UE(fam));
}

template <class Real> Evaluation<Real> evaluate(const Problem<Real>& pb, Real xi) {
  const auto fs = build_fundamental(build_system(pb.field, pb.params(xi), pb.g_max), pb.build);
  Evaluation<Real> ev;
  ev.family = family_of(fs);
  ev.interior_residual = fs.interior_residual;
  ev.point = spectrum_of(ev.family);
  ev.point.xi = xi;
  return ev;
}

inline int default_jobs() { return std::max(1u, std::thread::hardware_concurrency()); }

// Runs f(i) for i in [0, n) on up to `jobs` threads; results are index-addressed.
template <class F> void parallel_for(int n, int jobs, F f) {
  jobs = std::max(1, std::min(jobs, n));
  if (jobs == 1) {
    for (int i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr err;
  std::atomic<bool> failed{false};
  std::vector<std::thread> pool;
  for (int t = 0; t < jobs; ++t)
    pool.emplace_back([&] {
      for (int i = next++; i < n && !failed; i = next++) {
        try {
          f(i);
        } catch (...) {
          if (!failed.exchange(true)) err = std::current_exception();
        }
      }
    });
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
}

template <class Real> std::vector<Real> scan_grid(Real lo, Real hi, int steps) {
  if (steps < 2) throw std::invalid_argument("scan: steps must be >= 2");
  if (!(hi > lo)) throw std::invalid_argument("scan: empty xi window");
  std::vector<Real> xs(steps);
  for (int i = 0; i < steps; ++i) xs[i] = lo + (hi - lo) * Real(i) / Real(steps - 1);
  return xs;
}

template <class Real>
std::vector<SpectralPoint<Real>> scan(const Problem<Real>& pb, Real lo, Real hi, int steps, int jobs = 1) {
  if (!(lo > Real(-1))) throw std::invalid_argument("scan: xi must exceed -1");
  const auto xs = scan_grid(lo, hi, steps);
  std::vector<SpectralPoint<Real>> out(xs.size());
  parallel_for(steps, jobs, [&](int i) {
    try {
      out[i] = evaluate(pb, xs[i]).point;
    } catch (const std::exception& e) {
      throw std::runtime_error(std::string(e.what()) + " (xi = " + std::to_string(static_cast<double>(xs[i])) + ")");
    }
  });
  return out;
}

// Eigenvalues of the truncated Hermitian Floquet matrix at xi = 0 whose
// eigenvector sits mostly on the origin node. Used to seed line refinement.
template <class Real>
std::vector<double> floquet_seeds(const Problem<Real>& pb, double lo, double hi, double min_weight = 0.3) {
  const FieldSpec<double> f = pb.field.template cast<double>();
  WaveParams<double> wp{{double(pb.q[0]), double(pb.q[1]), double(pb.q[2])}, 0.0, double(pb.Omega)};
  const auto sys = build_system(f, wp, pb.g_max);
  const int m = sys.equations.size();
  const Mat4<double> g4 = gamma_k<double>(4);
  MatX<double> H = MatX<double>::Zero(4 * m, 4 * m);
  for (int e = 0; e < m; ++e) {
    const MultiIndex& n = sys.equations.nodes[e];
    H.block<4, 4>(4 * e, 4 * e) = g4 * build_v0(n, wp);
    for (const auto& c : sys.couplings) {
      const int k = sys.equations.index_of(n + c.first);
      if (k >= 0) H.block<4, 4>(4 * e, 4 * k) += g4 * c.second;
    }
  }
  H = (H + H.adjoint()).eval() / 2.0;
  Eigen::SelfAdjointEigenSolver<MatX<double>> es(H);
  const int o = sys.equations.index_of(kOrigin);
  std::vector<double> out;
  for (int j = 0; j < 4 * m; ++j) {
    const double x = es.eigenvalues()(j);
    if (x < lo || x > hi) continue;
    if (es.eigenvectors().col(j).segment<4>(4 * o).squaredNorm() >= min_weight) out.push_back(x);
  }
  return out;
}

template <class Real> struct Sample {
  Real x, f;
};

template <class Real> struct Minimum {
  Real x = 0, f = 0;
  std::vector<Sample<Real>> log;  // every evaluation made
};

// Downhill bracket expansion from a seed, then golden section keeping the best
// point until the bracket reaches `tol` (0: floating-point resolution).
template <class Real, class F> Minimum<Real> golden_minimize(F&& f, Real seed, Real h0, Real tol, int max_eval = 400) {
  Minimum<Real> res;
  auto eval = [&](Real x) {
    const Real v = f(x);
    res.log.push_back({x, v});
    return v;
  };
  const Real eps = std::numeric_limits<Real>::epsilon();
  h0 = std::max(h0, 4 * eps * std::max(std::abs(seed), Real(1e-300)));
  Real b = seed, fb = eval(b);
  Real a = b - h0, fa = eval(a);
  Real c = b + h0, fc = eval(c);
  if (fa < fb && fa <= fc) {
    std::swap(a, c);
    std::swap(fa, fc);
  }
  // now walk toward c while it descends
  Real step = c - b;
  while (fc < fb) {
    if (static_cast<int>(res.log.size()) > max_eval) throw no_bracket("refine: no bracket found");
    a = b;
    fa = fb;
    b = c;
    fb = fc;
    step *= Real(1.618033988749895);
    c = b + step;
    fc = eval(c);
  }
  if (a > c) {
    std::swap(a, c);
    std::swap(fa, fc);
  }
  const Real gr = Real(0.3819660112501051);
  while (static_cast<int>(res.log.size()) < max_eval) {
    const Real width = c - a;
    const Real floor = 4 * eps * std::max(std::abs(b), std::numeric_limits<Real>::min());
    if (width <= std::max(tol, floor)) break;
    const bool right = (c - b) > (b - a);
    const Real x = right ? b + gr * (c - b) : b - gr * (b - a);
    if (x == a || x == b || x == c) break;
    const Real fx = eval(x);
    if (fx < fb) {
      if (right) {
        a = b;
        fa = fb;
      } else {
        c = b;
        fc = fb;
      }
      b = x;
      fb = fx;
    } else if (right) {
      c = x;
      fc = fx;
    } else {
      a = x;
      fa = fx;
    }
  }
  res.x = b;
  res.f = fb;
  return res;
}

// Least squares R^2 = R0^2 + beta^2 (x - x0)^2; returns {R0, beta}.
template <class Real> std::pair<Real, Real> fit_parabola(const std::vector<Sample<Real>>& s, Real x0) {
  Real s00 = 0, s01 = 0, s11 = 0, t0 = 0, t1 = 0;
  for (const auto& p : s) {
    const Real u = (p.x - x0) * (p.x - x0);
    const Real y = p.f * p.f;
    s00 += 1;
    s01 += u;
    s11 += u * u;
    t0 += y;
    t1 += u * y;
  }
  const Real det = s00 * s11 - s01 * s01;
  if (det == Real(0)) throw std::invalid_argument("fit_parabola: degenerate sample set");
  const Real A = (s11 * t0 - s01 * t1) / det;
  const Real B = (s00 * t1 - s01 * t0) / det;
  return {std::sqrt(std::max(Real(0), A)), std::sqrt(std::max(Real(0), B))};
}

template <class Real> struct SpectralLine {
  Real xi0 = 0, R0 = 0, beta0 = 0, halfwidth = 0;
  Vec4<Real> a0 = Vec4<Real>::Zero();  // unit Euclidean norm, phase fixed
  int branch = 0;                      // 0-based eigen-branch the line was refined on
  int evaluations = 0;
};

struct RefineOptions {
  double tol = 0;         // absolute xi tolerance; 0 = floating-point resolution
  double seed_step = 0;   // initial bracket half-width; 0 = automatic
  int fit_points = 11;
  int max_eval = 400;
};

// Refines a line on eigen-branch `branch` from a seed; r(x) returns the branch value.
template <class Real, class F>
SpectralLine<Real> refine_line(F&& r, Real seed, Real R_av, const RefineOptions& opt = {}) {
  const Real h0 = opt.seed_step > 0 ? Real(opt.seed_step) : std::max(Real(1e-15), std::abs(seed) * Real(1e-11));
  auto m = golden_minimize<Real>(r, seed, h0, Real(opt.tol), opt.max_eval);
  SpectralLine<Real> line;
  line.xi0 = m.x;
  line.R0 = m.f;
  int evals = static_cast<int>(m.log.size());

  // slope estimate from the evaluations already made, then probe outward if needed
  auto slope_from = [&](const std::vector<Sample<Real>>& pts) {
    std::vector<Real> bs;
    for (const auto& p : pts) {
      const Real d = std::abs(p.x - line.xi0);
      if (d > 0 && p.f > 4 * line.R0 && p.f < R_av) bs.push_back(std::sqrt(p.f * p.f - line.R0 * line.R0) / d);
    }
    if (bs.empty()) return Real(0);
    std::nth_element(bs.begin(), bs.begin() + bs.size() / 2, bs.end());
    return bs[bs.size() / 2];
  };
  Real beta = slope_from(m.log);
  for (Real d = std::max(Real(4) * std::numeric_limits<Real>::epsilon() * std::abs(line.xi0), Real(1e-18));
       beta == Real(0) && d < Real(1); d *= 8) {
    const Real v = r(line.xi0 + d);
    ++evals;
    if (v > 4 * line.R0) beta = std::sqrt(v * v - line.R0 * line.R0) / d;
  }
  if (beta == Real(0)) throw no_bracket("refine: residual does not rise around the minimum");

  const Real span = std::sqrt(std::max(Real(0), R_av * R_av - line.R0 * line.R0));
  Real hw = span / beta;
  std::vector<Sample<Real>> fit;
  const int k = std::max(3, opt.fit_points);
  for (int i = 0; i < k; ++i) {
    const Real x = line.xi0 + hw * (Real(10 * i) / Real(k - 1) - 5);
    fit.push_back({x, r(x)});
    ++evals;
  }
  line.beta0 = fit_parabola(fit, line.xi0).second;
  line.halfwidth = line.beta0 > 0 ? span / line.beta0 : std::numeric_limits<Real>::infinity();
  line.evaluations = evals;
  return line;
}

template <class Real>
SpectralLine<Real> refine_on_problem(const Problem<Real>& pb, Real seed, int branch, const RefineOptions& opt = {}) {
  auto r = [&](Real x) { return evaluate(pb, x).point.R[branch]; };
  SpectralLine<Real> line = refine_line<Real>(r, seed, pb.R_av(), opt);
  line.branch = branch;
  const auto ev = evaluate(pb, line.xi0);
  line.a0 = fix_phase<Real>(ev.point.c[branch].normalized());
  return line;
}

// Refinement from a bracketing triple l < c < r with R(c) below both ends.
template <class Real>
SpectralLine<Real> refine_minimum(const Problem<Real>& pb, Real l, Real c, Real r, int branch = 0,
                                  const RefineOptions& opt = {}) {
  if (!(l < c && c < r)) throw no_bracket("refine_minimum: bracket must satisfy l < c < r");
  RefineOptions o = opt;
  if (o.seed_step <= 0) o.seed_step = static_cast<double>(std::min(c - l, r - c));
  return refine_on_problem(pb, c, branch, o);
}

template <class Real> struct LineSearch {
  std::vector<SpectralLine<Real>> lines;  // sorted by xi0
  std::vector<std::string> warnings;
  int seeds = 0;
};

template <class Real>
LineSearch<Real> find_lines(const Problem<Real>& pb, Real lo, Real hi, const std::vector<SpectralPoint<Real>>& coarse,
                            int wanted = 2, const RefineOptions& opt = {}, int jobs = 1) {
  LineSearch<Real> out;
  std::vector<Real> seeds;
  for (double s : floquet_seeds(pb, double(lo), double(hi))) seeds.push_back(Real(s));
  for (std::size_t i = 1; i + 1 < coarse.size(); ++i)
    if (coarse[i].R[0] < coarse[i - 1].R[0] && coarse[i].R[0] < coarse[i + 1].R[0]) seeds.push_back(coarse[i].xi);
  out.seeds = static_cast<int>(seeds.size());

  std::vector<std::optional<SpectralLine<Real>>> refined(seeds.size());
  parallel_for(static_cast<int>(seeds.size()), jobs, [&](int i) {
    try {
      refined[i] = refine_on_problem(pb, seeds[i], 0, opt);
    } catch (const no_bracket&) {
    }
  });

  std::vector<SpectralLine<Real>> lines;
  for (auto& r : refined) {
    if (!r || !(r->R0 < pb.R_av()) || r->xi0 < lo || r->xi0 > hi) continue;
    bool dup = false;
    for (auto& l : lines)
      if (std::abs(l.xi0 - r->xi0) <= Real(1e-6) * std::max(l.halfwidth, r->halfwidth)) {
        dup = true;
        if (r->R0 < l.R0) l = *r;
      }
    if (!dup) lines.push_back(*r);
  }
  std::sort(lines.begin(), lines.end(), [](const auto& a, const auto& b) { return a.R0 < b.R0; });
  if (static_cast<int>(lines.size()) > wanted) lines.resize(wanted);

  // A single R1 line with a second small branch is a degenerate doublet.
  if (wanted >= 2 && lines.size() == 1) {
    const auto ev = evaluate(pb, lines[0].xi0);
    if (ev.point.R[1] < pb.R_av()) {
      try {
        lines.push_back(refine_on_problem(pb, lines[0].xi0, 1, opt));
      } catch (const no_bracket&) {
      }
    }
  }
  std::sort(lines.begin(), lines.end(), [](const auto& a, const auto& b) { return a.xi0 < b.xi0; });
  if (static_cast<int>(lines.size()) < wanted) out.warnings.push_back("partial.doublet");
  if (lines.size() >= 2) {
    const Real hw = std::max(lines[0].halfwidth, lines[1].halfwidth);
    if (lines[1].xi0 - lines[0].xi0 < hw) out.warnings.push_back("degenerate.doublet");
  }
  out.lines = std::move(lines);
  return out;
}

template <class Real> struct Doublet {
  SpectralLine<Real> a, b;
  Real xi_m = 0, delta_xi = 0;
  Real Ea = 0, Eb = 0, dE = 0;
  Real ua = 0, ub = 0, u0 = 0, v0 = 0;
  Real sigma1a = 0, sigma1b = 0;
  double nu_pr_hz = 0;
};

template <class Real>
Doublet<Real> doublet_analysis(const SpectralLine<Real>& la, const SpectralLine<Real>& lb, const SolutionFamily<Real>& fa,
                               const SolutionFamily<Real>& fb) {
  Doublet<Real> d;
  d.a = la;
  d.b = lb;
  d.ua = quadratic(build_UE(fa), la.a0);
  d.ub = quadratic(build_UE(fb), lb.a0);
  if (!(d.ub > Real(0))) throw zero_norm("doublet_analysis: u_b vanishes");
  d.u0 = 1 - d.ua / d.ub;
  d.sigma1a = mean_value(fa, Observable::Sigma1, la.a0);
  d.sigma1b = mean_value(fb, Observable::Sigma1, lb.a0);
  const Mat4<Real> s3 = sigma_k<Real>(3);
  cplx<Real> x(0, 0);
  for (std::size_t i = 0; i < fa.nodes.size(); ++i) {
    const int j = fb.find(fa.nodes[i]);
    if (j >= 0) x += ((fa.S[i] * la.a0).adjoint() * s3 * (fb.S[j] * lb.a0))(0, 0);
  }
  d.v0 = 1 + x.real() / d.ub;
  d.xi_m = (la.xi0 + lb.xi0) / 2;
  d.delta_xi = lb.xi0 - la.xi0;
  d.Ea = mean_value(fa, Observable::H, la.a0);
  d.Eb = mean_value(fb, Observable::H, lb.a0);
  d.dE = d.Eb - d.Ea;
  d.nu_pr_hz = static_cast<double>(d.delta_xi) * kRestFrequencyHz;
  return d;
}

template <class Real> struct MixedState {
  Real E = 0;
  Real alpha = 0, delta = 0;
  int handedness = 1;
  Doublet<Real> doublet;

  // Mean of Sigma at time t (seconds).
  std::array<Real, 3> spin(double t) const {
    const Real two_pi = 2 * std::numbers::pi_v<Real>;
    const Real phi = delta + two_pi * Real(doublet.nu_pr_hz) * Real(t);
    const Real ca = std::cos(alpha);
    const Real den = 1 - doublet.u0 * ca * ca;
    const Real tr = (doublet.v0 - 1) * std::sin(2 * alpha) / den;
    return {doublet.sigma1a * (std::cos(2 * alpha) - doublet.u0 * ca * ca) / den, handedness * tr * std::sin(phi),
            tr * std::cos(phi)};
  }
};

template <class Real> MixedState<Real> mixed_state(const Doublet<Real>& d, Real alpha, Real delta, int handedness = 1) {
  const Real pi = std::numbers::pi_v<Real>;
  if (alpha < 0 || alpha > pi / 2) throw std::invalid_argument("mixed_state: alpha outside [0, pi/2]");
  if (delta < 0 || delta > 2 * pi) throw std::invalid_argument("mixed_state: delta outside [0, 2 pi]");
  if (handedness != 1 && handedness != -1) throw std::invalid_argument("mixed_state: handedness must be +1 or -1");
  MixedState<Real> m;
  m.alpha = alpha;
  m.delta = delta;
  m.handedness = handedness;
  m.doublet = d;
  const Real ca = std::cos(alpha), sa = std::sin(alpha);
  m.E = d.Ea + d.dE * sa * sa / (1 - d.u0 * ca * ca);
  return m;
}

}  // namespace estc
