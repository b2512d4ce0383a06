// estc: spectral scans, ground-state doublets, spin precession and
// self-checks for an electron in counterpropagating plane waves.

#include <estc/config.hpp>
#include <estc/dirac_fd.hpp>
#include <estc/pipeline.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <string>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace estc;

namespace {

enum Exit { kOk = 0, kConfig = 2, kNumeric = 3, kConsistency = 4 };

struct Ctx {
  RunConfig cfg;
  fs::path out;
  int jobs = 1;
};

std::string num17(long double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17Lg", v);
  return buf;
}

void write_text(const fs::path& p, const std::string& s) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + p.string());
  f << s;
}

void write_json(const fs::path& p, const json& j) { write_text(p, j.dump(2) + "\n"); }

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

template <class Real> json bispinor(const Vec4<Real>& v) {
  json a = json::array();
  for (int i = 0; i < 4; ++i) a.push_back({double(v(i).real()), double(v(i).imag())});
  return a;
}

template <class Real> void check_window(const RunConfig& c) {
  if (c.xi_steps < 2) throw config_error("xi.window", "xi.steps must be >= 2");
  if (!(c.xi_max > c.xi_min)) throw config_error("xi.window", "empty xi window (need xi.max > xi.min)");
  if (!(c.xi_min > -1)) throw config_error("xi.window", "xi.min must exceed -1");
}

template <class Real> json model_info(const Problem<Real>& pb) {
  const auto sys = build_system(pb.field, pb.params(0), pb.g_max);
  return {{"g_max", pb.g_max}, {"equations", sys.equations.size()}, {"variables", sys.variables.size()}};
}

template <class Real> int cmd_scan(const Ctx& ctx) {
  const auto& c = ctx.cfg;
  check_window<Real>(c);
  const auto pb = c.problem<Real>();
  const auto t0 = std::chrono::steady_clock::now();
  const auto pts = scan(pb, Real(c.xi_min), Real(c.xi_max), c.xi_steps, ctx.jobs);
  std::string csv = "xi,R1,R2,R3,R4\n";
  for (const auto& p : pts) {
    csv += num17(p.xi);
    for (int j = 0; j < 4; ++j) csv += "," + num17(p.R[j]);
    csv += "\n";
  }
  write_text(ctx.out / "scan.csv", csv);
  write_json(ctx.out / "scan.json", {{"command", "scan"},
                                     {"precision", c.extended ? "extended" : "double"},
                                     {"model", model_info(pb)},
                                     {"points", pts.size()},
                                     {"config", c.raw}});
  write_json(ctx.out / "timings.json", {{"scan_seconds", seconds_since(t0)}, {"jobs", ctx.jobs}});
  return kOk;
}

template <class Real> json doublet_json(const GroundState<Real>& gs) {
  json j;
  const auto& lines = gs.search.lines;
  auto line_or_null = [&](std::size_t i, auto get) -> json {
    if (i < lines.size()) return double(get(lines[i]));
    return nullptr;
  };
  j["xi0a"] = line_or_null(0, [](const auto& l) { return l.xi0; });
  j["xi0b"] = line_or_null(1, [](const auto& l) { return l.xi0; });
  j["R0a"] = line_or_null(0, [](const auto& l) { return l.R0; });
  j["R0b"] = line_or_null(1, [](const auto& l) { return l.R0; });
  j["beta0a"] = line_or_null(0, [](const auto& l) { return l.beta0; });
  j["beta0b"] = line_or_null(1, [](const auto& l) { return l.beta0; });
  j["halfwidth_a"] = line_or_null(0, [](const auto& l) { return l.halfwidth; });
  j["halfwidth_b"] = line_or_null(1, [](const auto& l) { return l.halfwidth; });
  j["a0a"] = lines.size() > 0 ? bispinor(lines[0].a0) : json(nullptr);
  j["a0b"] = lines.size() > 1 ? bispinor(lines[1].a0) : json(nullptr);
  json branches = json::array();
  for (const auto& p : gs.at_lines) branches.push_back({double(p.R[0]), double(p.R[1]), double(p.R[2]), double(p.R[3])});
  j["R_at_lines"] = branches;
  const char* keys[] = {"xi_m", "delta_xi", "Ea", "Eb", "dE", "u0", "v0", "sigma1a", "sigma1b", "nu_pr_hz"};
  if (gs.doublet) {
    const auto& d = *gs.doublet;
    j["xi_m"] = double(d.xi_m);
    j["delta_xi"] = double(d.delta_xi);
    j["Ea"] = double(d.Ea);
    j["Eb"] = double(d.Eb);
    j["dE"] = double(d.dE);
    j["u0"] = double(d.u0);
    j["v0"] = double(d.v0);
    j["sigma1a"] = double(d.sigma1a);
    j["sigma1b"] = double(d.sigma1b);
    j["nu_pr_hz"] = d.nu_pr_hz;
  } else {
    for (const char* k : keys) j[k] = nullptr;
  }
  j["warnings"] = gs.search.warnings;
  j["partial"] = !gs.doublet.has_value();
  return j;
}

template <class Real> GroundState<Real> run_ground_state(const Ctx& ctx) {
  const auto& c = ctx.cfg;
  check_window<Real>(c);
  RefineOptions opt;
  opt.tol = c.tol_refine;
  return ground_state(c.problem<Real>(), Real(c.xi_min), Real(c.xi_max), c.xi_steps, opt, ctx.jobs);
}

template <class Real> int cmd_ground_state(const Ctx& ctx) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto gs = run_ground_state<Real>(ctx);
  write_json(ctx.out / "doublet.json", doublet_json(gs));
  write_json(ctx.out / "timings.json", {{"ground_state_seconds", seconds_since(t0)}, {"jobs", ctx.jobs}});
  for (const auto& w : gs.search.warnings) std::cerr << "warning: " << w << "\n";
  return kOk;
}

template <class Real> int cmd_precession(const Ctx& ctx) {
  const auto& pc = ctx.cfg.precession;
  const auto t0 = std::chrono::steady_clock::now();
  const auto gs = run_ground_state<Real>(ctx);
  write_json(ctx.out / "doublet.json", doublet_json(gs));
  if (!gs.doublet) throw no_bracket("precession: fewer than two spectral lines found");
  const int hand = pc.handedness != 0 ? pc.handedness : (gs.doublet->sigma1a >= 0 ? 1 : -1);
  const auto ms = mixed_state(*gs.doublet, Real(pc.alpha), Real(pc.delta), hand);
  std::string csv = "t,Sx,Sy,Sz,E\n";
  for (int i = 0; i < pc.steps; ++i) {
    const double t = pc.steps == 1 ? pc.t_min : pc.t_min + (pc.t_max - pc.t_min) * i / (pc.steps - 1);
    const auto s = ms.spin(t);
    csv += num17(t) + "," + num17(s[0]) + "," + num17(s[1]) + "," + num17(s[2]) + "," + num17(ms.E) + "\n";
  }
  write_text(ctx.out / "spin.csv", csv);
  write_json(ctx.out / "timings.json", {{"precession_seconds", seconds_since(t0)}, {"jobs", ctx.jobs}});
  return kOk;
}

int cmd_volkov_validate(const Ctx& ctx) {
  using Real = long double;
  const auto& vc = ctx.cfg.volkov;
  VolkovParams<Real> p;
  p.a31 = vc.a31;
  p.b32 = vc.b32;
  p.q = {Real(vc.q[0]), Real(vc.q[1]), Real(vc.q[2])};
  p.q4 = vc.q4;
  p.Omega = vc.omega;
  if (!(p.Omega > 0)) throw config_error("omega.nonpositive", "volkov.omega must be positive");
  if (vc.samples < 1 || vc.dispersion_samples < 1) throw config_error("volkov.samples", "sample counts must be positive");
  p.J4();  // singular configuration check

  std::mt19937_64 rng(vc.seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const auto field = p.field();
  Real worst_dirac = 0, worst_idem = 0, worst_trace = 0, worst_disp = 0;
  for (int s = 0; s < vc.samples; ++s) {
    std::array<Real, 4> X{Real(uni(rng)), Real(uni(rng)), Real(uni(rng)), Real(uni(rng))};
    Vec4<Real> a0;
    for (int i = 0; i < 4; ++i) a0(i) = cplx<Real>(gauss(rng), gauss(rng));
    auto ev = [&](const std::array<Real, 4>& Y) { return volkov_Ev(Y, p); };
    const Mat4<Real> r = apply_dirac_fd<Real>(ev, X, field, p.Omega, Real(vc.h));
    worst_dirac = std::max(worst_dirac, (r * a0).norm() / (ev(X) * a0).norm());
    const Mat4<Real> J = volkov_J(X[2] - X[3], p);
    worst_idem = std::max(worst_idem, (J * J - J).cwiseAbs().maxCoeff());
    worst_trace = std::max(worst_trace, std::abs(J.trace() - cplx<Real>(2, 0)));
  }
  for (int s = 0; s < vc.dispersion_samples; ++s) {
    VolkovParams<Real> r = p;
    r.q = {Real(2 * uni(rng) - 1), Real(2 * uni(rng) - 1), Real(2 * uni(rng) - 1)};
    r.q4 = Real(1 + 2 * uni(rng));
    if (r.q4 == r.q[2]) continue;
    worst_disp = std::max(worst_disp, std::abs(volkov_dispersion_residual(r)));
  }
  const bool pass = worst_dirac < 1e-10 && worst_idem < 1e-13 && worst_trace < 1e-13 && worst_disp < 1e-12;
  write_json(ctx.out / "volkov.json", {{"pass", pass},
                                       {"max_dirac_residual", double(worst_dirac)},
                                       {"max_idempotency_residual", double(worst_idem)},
                                       {"max_trace_error", double(worst_trace)},
                                       {"max_dispersion_residual", double(worst_disp)},
                                       {"xi_v", double(xi_volkov(p.q, p.intensity()))}});
  return pass ? kOk : kConsistency;
}

template <class Real> int cmd_oracle_compare(const Ctx& ctx) {
  const auto& c = ctx.cfg;
  const auto pb = c.problem<Real>();
  const auto sys = build_system(pb.field, pb.params(Real(c.oracle.xi)), pb.g_max);
  if (4 * sys.equations.size() > c.oracle.guard)
    throw config_error("oracle.size_guard", "model too large for the dense oracle (4|L'| = " +
                                                std::to_string(4 * sys.equations.size()) + ")");
  auto fs = build_fundamental(sys, pb.build);
  if (c.oracle.tamper) fs.P.add_block(0, 0, Mat4<Real>::Identity() * Real(1e-6));
  const auto oracle = nullspace_oracle(sys, c.oracle.guard);
  const MatX<Real> diff = fs.P.dense() - oracle.P.dense();
  const Real max_diff = diff.cwiseAbs().maxCoeff();
  const MatX<Real> p = fs.P.dense();
  const Real idem = (p * p - p).cwiseAbs().maxCoeff();
  const int expected = 4 * sys.equations.size();
  const bool pass = max_diff < 1e-10 && oracle.rank == expected && fs.interior_residual < 1e-11;
  write_json(ctx.out / "oracle.json", {{"pass", pass},
                                       {"max_abs_difference", double(max_diff)},
                                       {"engine_idempotency_residual", double(idem)},
                                       {"interior_residual", double(fs.interior_residual)},
                                       {"oracle_rank", oracle.rank},
                                       {"expected_rank", expected},
                                       {"model", model_info(pb)}});
  return pass ? kOk : kConsistency;
}

template <class Real> int dispatch(const std::string& cmd, const Ctx& ctx) {
  if (cmd == "scan") return cmd_scan<Real>(ctx);
  if (cmd == "ground-state") return cmd_ground_state<Real>(ctx);
  if (cmd == "precession") return cmd_precession<Real>(ctx);
  if (cmd == "oracle-compare") return cmd_oracle_compare<Real>(ctx);
  return cmd_volkov_validate(ctx);
}

int fail(const fs::path& out, int code, const std::string& id, const std::string& msg) {
  const json e = {{"error", id}, {"message", msg}, {"exit_code", code}};
  std::cerr << e.dump() << "\n";
  std::error_code ec;
  fs::create_directories(out, ec);
  if (!ec) {
    std::ofstream f(out / "error.json", std::ios::binary);
    f << e.dump(2) << "\n";
  }
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dirac electron in counterpropagating plane waves: spectral lines, doublets, spin precession"};
  app.require_subcommand(1);
  std::string config_path, out_dir = ".";
  int jobs = default_jobs();
  const char* names[][2] = {{"scan", "residual spectrum R1..R4 over a xi window"},
                            {"ground-state", "refine the two ground-state lines and analyse the doublet"},
                            {"precession", "spin trajectory of a two-line superposition"},
                            {"volkov-validate", "check the closed-form single-wave solution"},
                            {"oracle-compare", "compare the merge engine with a dense null-space projector"}};
  for (const auto& n : names) {
    auto* sub = app.add_subcommand(n[0], n[1]);
    sub->add_option("--config", config_path, "JSON configuration")->required();
    sub->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--out", out_dir, "output directory");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kConfig;
  }
  const std::string cmd = app.get_subcommands().front()->get_name();
  const fs::path out(out_dir);
  try {
    Ctx ctx;
    ctx.cfg = load_config(config_path, cmd != "volkov-validate");
    ctx.out = out;
    ctx.jobs = jobs;
    fs::create_directories(out);
    return ctx.cfg.extended ? dispatch<long double>(cmd, ctx) : dispatch<double>(cmd, ctx);
  } catch (const config_error& e) {
    return fail(out, kConfig, e.code, e.what());
  } catch (const size_guard& e) {
    return fail(out, kConfig, "oracle.size_guard", e.what());
  } catch (const consistency_error& e) {
    return fail(out, kConsistency, "internal.consistency", e.what());
  } catch (const std::invalid_argument& e) {
    return fail(out, kConfig, "config.invalid", e.what());
  } catch (const std::exception& e) {
    return fail(out, kNumeric, "numerical.failure", e.what());
  }
}
