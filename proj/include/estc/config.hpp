#pragma once

#include "spectral.hpp"
#include "volkov.hpp"

#include <json.hpp>

#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace estc {

// Configuration problems carry a short machine-readable code.
struct config_error : std::runtime_error {
  std::string code;
  config_error(std::string c, const std::string& msg) : std::runtime_error(msg), code(std::move(c)) {}
};

struct FieldTerm {
  int j = 0, k = 0;
  double a = 0, b = 0;
};

struct PrecessionConfig {
  double alpha = 0, delta = 0;
  double t_min = 0, t_max = 0;
  int steps = 2;
  int handedness = 0;  // 0 = from the sign of <Sigma_1>_a
};

struct VolkovConfig {
  double a31 = 0.01, b32 = 0.007;
  std::array<double, 3> q{0.1, -0.2, 0.05};
  double q4 = 1.3;
  double omega = 0.1;
  int samples = 16;
  double h = 1e-4;
  int dispersion_samples = 100;
  unsigned seed = 12345;
};

struct OracleConfig {
  double xi = 0;
  bool tamper = false;
  int guard = 4096;
};

struct RunConfig {
  nlohmann::json raw;
  std::vector<FieldTerm> field;
  double omega = 0;
  std::array<double, 3> q{};
  double xi_min = 0, xi_max = 0;
  int xi_steps = 2;
  int g_max = 1;
  bool extended = true;
  double tol_idempotency = 1e-11, tol_refine = 0, tol_rank = 1e-12, tol_verify = 1e-9;
  PrecessionConfig precession;
  VolkovConfig volkov;
  OracleConfig oracle;

  template <class Real> FieldSpec<Real> field_spec() const {
    FieldSpec<Real> f;
    for (const auto& t : field) f.add(t.j, t.k, Real(t.a), Real(t.b));
    return f;
  }

  template <class Real> Problem<Real> problem() const {
    Problem<Real> pb;
    pb.field = field_spec<Real>();
    pb.q = {Real(q[0]), Real(q[1]), Real(q[2])};
    pb.Omega = Real(omega);
    pb.g_max = g_max;
    pb.build.rank_tol = tol_rank;
    pb.build.verify_tol = tol_verify;
    return pb;
  }
};

namespace detail {

template <class T> T get_or(const nlohmann::json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw config_error("config.type", std::string("bad value for '") + key + "': " + e.what());
  }
}

}  // namespace detail

// `need_field` is false for commands that carry their own parameters.
inline RunConfig parse_config(const nlohmann::json& j, bool need_field = true) {
  using detail::get_or;
  if (!j.is_object()) throw config_error("config.type", "config must be a JSON object");
  RunConfig c;
  c.raw = j;
  if (j.contains("field")) {
    if (!j["field"].is_array()) throw config_error("config.type", "'field' must be a list of {j,k,a,b}");
    for (const auto& t : j["field"]) {
      FieldTerm ft;
      ft.j = get_or<int>(t, "j", 0);
      ft.k = get_or<int>(t, "k", 0);
      ft.a = get_or<double>(t, "a", 0.0);
      ft.b = get_or<double>(t, "b", 0.0);
      if (ft.j < 1 || ft.j > 6 || ft.k < 1 || ft.k > 3)
        throw config_error("field.index", "field term needs 1 <= j <= 6 and 1 <= k <= 3");
      c.field.push_back(ft);
    }
  }
  c.omega = get_or<double>(j, "omega", 0.0);
  if (j.contains("q")) c.q = get_or<std::array<double, 3>>(j, "q", c.q);
  c.g_max = get_or<int>(j, "g_max", 1);
  const std::string prec = get_or<std::string>(j, "precision", "extended");
  if (prec != "extended" && prec != "double") throw config_error("config.precision", "precision must be 'extended' or 'double'");
  c.extended = prec == "extended";
  if (j.contains("xi")) {
    const auto& x = j["xi"];
    c.xi_min = get_or<double>(x, "min", 0.0);
    c.xi_max = get_or<double>(x, "max", 0.0);
    c.xi_steps = get_or<int>(x, "steps", 2);
  }
  if (j.contains("tolerances")) {
    const auto& t = j["tolerances"];
    c.tol_idempotency = get_or<double>(t, "idempotency", c.tol_idempotency);
    c.tol_refine = get_or<double>(t, "refine", c.tol_refine);
    c.tol_rank = get_or<double>(t, "rank", c.tol_rank);
    c.tol_verify = get_or<double>(t, "verify", c.tol_verify);
  }
  if (j.contains("precession")) {
    const auto& p = j["precession"];
    auto& pc = c.precession;
    pc.alpha = get_or<double>(p, "alpha", 0.0);
    pc.delta = get_or<double>(p, "delta", 0.0);
    pc.t_min = get_or<double>(p, "t_min", 0.0);
    pc.t_max = get_or<double>(p, "t_max", 0.0);
    pc.steps = get_or<int>(p, "steps", 2);
    if (p.contains("handedness") && !p["handedness"].is_string()) {
      pc.handedness = get_or<int>(p, "handedness", 0);
      if (pc.handedness != 1 && pc.handedness != -1)
        throw config_error("precession.handedness", "handedness must be 1, -1 or \"auto\"");
    }
    if (pc.steps < 1) throw config_error("precession.steps", "precession needs at least one time step");
  }
  if (j.contains("volkov")) {
    const auto& v = j["volkov"];
    auto& vc = c.volkov;
    vc.a31 = get_or<double>(v, "a31", vc.a31);
    vc.b32 = get_or<double>(v, "b32", vc.b32);
    vc.q = get_or<std::array<double, 3>>(v, "q", vc.q);
    vc.q4 = get_or<double>(v, "q4", vc.q4);
    vc.omega = get_or<double>(v, "omega", vc.omega);
    vc.samples = get_or<int>(v, "samples", vc.samples);
    vc.h = get_or<double>(v, "h", vc.h);
    vc.dispersion_samples = get_or<int>(v, "dispersion_samples", vc.dispersion_samples);
    vc.seed = get_or<unsigned>(v, "seed", vc.seed);
  }
  if (j.contains("oracle")) {
    const auto& o = j["oracle"];
    c.oracle.xi = get_or<double>(o, "xi", c.oracle.xi);
    c.oracle.tamper = get_or<bool>(o, "tamper", false);
    c.oracle.guard = get_or<int>(o, "guard", c.oracle.guard);
  }

  if (need_field) {
    try {
      c.field_spec<double>().validate();
    } catch (const field_constraint& e) {
      throw config_error("field.constraint", e.what());
    }
    if (!(c.field_spec<double>().intensity() > 0)) throw config_error("field.zero_intensity", "field intensity I_A must be positive");
    if (!(c.omega > 0)) throw config_error("omega.nonpositive", "omega must be positive");
    if (c.g_max < 1) throw config_error("g_max.range", "g_max must be >= 1");
  }
  return c;
}

inline RunConfig load_config(const std::string& path, bool need_field = true) {
  std::ifstream in(path);
  if (!in) throw config_error("config.io", "cannot read config file " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw config_error("config.parse", e.what());
  }
  return parse_config(j, need_field);
}

}  // namespace estc
