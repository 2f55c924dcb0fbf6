#include <cmath>
#include <utility>

#include "dce/cli.hpp"
#include "dce/errors.hpp"

namespace dce {

using nlohmann::json;

std::string to_string(Method m) {
  switch (m) {
    case Method::canonical: return "canonical";
    case Method::conformal: return "conformal";
    case Method::both: return "both";
  }
  return "canonical";
}

Method method_from_string(const std::string& s) {
  if (s == "canonical") return Method::canonical;
  if (s == "conformal") return Method::conformal;
  if (s == "both") return Method::both;
  throw ConfigError("unknown method '" + s + "' (expected canonical, conformal or both)");
}

const std::set<std::string>& emit_names() {
  static const std::set<std::string> names{"alpha", "beta", "spectra", "deltas", "rset", "moore"};
  return names;
}

void RunConfig::validate() const {
  if (Ns.empty()) throw ConfigError("at least one truncation N is required");
  for (int N : Ns) {
    if (N < 1) throw ConfigError("every N must be positive");
  }
  for (double T : temperatures) {
    if (!(T >= 0.0) || !std::isfinite(T)) throw ConfigError("temperatures must be finite and >= 0");
  }
  for (const auto& e : emit) {
    if (!emit_names().count(e)) throw ConfigError("unknown emit flag '" + e + "'");
  }
  if (!(mass >= 0.0) || !std::isfinite(mass)) throw ConfigError("mass must be finite and >= 0");
  if (!(delta_budget > 0.0)) throw ConfigError("delta_budget must be positive");
  if (!(indicator_spacing > 0.0)) throw ConfigError("indicator_spacing must be positive");
  if (!(moore_tolerance > 0.0)) throw ConfigError("moore_tolerance must be positive");
  if (compare_window < 1) throw ConfigError("compare_window must be positive");
  if (out.empty()) throw ConfigError("output directory is required");
  try {
    integrator.validate();
    if (cavity3d) cavity3d->validate();
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
  if (method != Method::canonical && (mass > 0.0 || cavity3d)) {
    throw ConfigError("the conformal method only applies to a massless 1+1 field");
  }
  const auto violations = dce::validate(trajectory);
  if (!violations.empty()) {
    const auto& v = violations.front();
    throw ConfigError("trajectory violates '" + v.quantity + "' at t = " + std::to_string(v.t) +
                      " (value " + std::to_string(v.value) + ")");
  }
}

namespace {

// Reads j[key] into out when present, with a ConfigError naming the key on a
// type mismatch.
template <class T>
void take(const json& j, const char* key, T& out) {
  auto it = j.find(key);
  if (it == j.end()) return;
  try {
    out = it->get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
  }
}

void reject_unknown(const json& j, std::initializer_list<const char*> keys, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be a JSON object");
  for (const auto& [k, _] : j.items()) {
    bool known = false;
    for (const char* key : keys) known = known || k == key;
    if (!known) throw ConfigError("unknown key '" + k + "' in " + where);
  }
}

WindowKind window_from_string(const std::string& s) {
  if (s == "bump") return WindowKind::bump;
  if (s == "gaussian") return WindowKind::gaussian;
  throw ConfigError("unknown window '" + s + "' (expected bump or gaussian)");
}

std::string to_string(WindowKind w) { return w == WindowKind::bump ? "bump" : "gaussian"; }

}  // namespace

RunConfig config_from_json(const json& j) {
  reject_unknown(j,
                 {"preset", "trajectory", "method", "Ns", "integrator", "kernel", "mass", "temperatures",
                  "out", "emit", "delta_budget", "indicator_spacing", "orientation", "quadrature",
                  "moore_tolerance", "compare_window", "cavity3d"},
                 "config");
  RunConfig cfg;
  take(j, "preset", cfg.preset);
  if (!cfg.preset.empty()) {
    auto p = preset_trajectory(cfg.preset);
    if (!p) throw ConfigError("unknown preset '" + cfg.preset + "'");
    cfg.trajectory = *p;
  }
  if (auto it = j.find("trajectory"); it != j.end()) {
    const json& t = *it;
    reject_unknown(t, {"eps1", "eps2", "q", "phi", "sigma", "gamma", "window"}, "trajectory");
    take(t, "eps1", cfg.trajectory.eps1);
    take(t, "eps2", cfg.trajectory.eps2);
    take(t, "q", cfg.trajectory.q);
    take(t, "phi", cfg.trajectory.phi);
    take(t, "sigma", cfg.trajectory.sigma);
    take(t, "gamma", cfg.trajectory.gamma);
    std::string w;
    take(t, "window", w);
    if (!w.empty()) cfg.trajectory.window = window_from_string(w);
  }
  std::string s;
  take(j, "method", s);
  if (!s.empty()) cfg.method = method_from_string(s);
  take(j, "Ns", cfg.Ns);
  if (auto it = j.find("integrator"); it != j.end()) {
    reject_unknown(*it, {"abs_tol", "rel_tol", "h_init", "h_min", "h_max", "max_steps"}, "integrator");
    take(*it, "abs_tol", cfg.integrator.abs_tol);
    take(*it, "rel_tol", cfg.integrator.rel_tol);
    take(*it, "h_init", cfg.integrator.h_init);
    take(*it, "h_min", cfg.integrator.h_min);
    take(*it, "h_max", cfg.integrator.h_max);
    take(*it, "max_steps", cfg.integrator.max_steps);
  }
  s.clear();
  take(j, "kernel", s);
  if (s == "reference") {
    cfg.kernel = KernelKind::reference;
  } else if (s == "parallel" || s.empty()) {
    cfg.kernel = KernelKind::parallel;
  } else {
    throw ConfigError("unknown kernel '" + s + "'");
  }
  take(j, "mass", cfg.mass);
  take(j, "temperatures", cfg.temperatures);
  std::string out;
  take(j, "out", out);
  if (!out.empty()) cfg.out = out;
  if (auto it = j.find("emit"); it != j.end()) {
    std::vector<std::string> e;
    take(j, "emit", e);
    cfg.emit = {e.begin(), e.end()};
  }
  take(j, "delta_budget", cfg.delta_budget);
  take(j, "indicator_spacing", cfg.indicator_spacing);
  s.clear();
  take(j, "orientation", s);
  if (!s.empty()) {
    try {
      cfg.orientation = orientation_from_string(s);
    } catch (const InvalidArgument& e) {
      throw ConfigError(e.what());
    }
  }
  if (auto it = j.find("quadrature"); it != j.end()) {
    reject_unknown(*it, {"order", "min_panels", "panel_factor", "tolerance"}, "quadrature");
    take(*it, "order", cfg.quadrature.order);
    take(*it, "min_panels", cfg.quadrature.min_panels);
    take(*it, "panel_factor", cfg.quadrature.panel_factor);
    take(*it, "tolerance", cfg.quadrature.tolerance);
  }
  take(j, "moore_tolerance", cfg.moore_tolerance);
  take(j, "compare_window", cfg.compare_window);
  if (auto it = j.find("cavity3d"); it != j.end() && !it->is_null()) {
    reject_unknown(*it, {"Ly", "Lz", "m", "sectors"}, "cavity3d");
    Cavity3DParams c;
    take(*it, "Ly", c.Ly);
    take(*it, "Lz", c.Lz);
    take(*it, "m", c.m);
    take(*it, "sectors", c.sectors);
    cfg.cavity3d = c;
  }
  return cfg;
}

json to_json(const RunConfig& cfg) {
  const auto& t = cfg.trajectory;
  json j;
  j["preset"] = cfg.preset;
  j["trajectory"] = {{"eps1", t.eps1}, {"eps2", t.eps2},   {"q", t.q},
                     {"phi", t.phi},   {"sigma", t.sigma}, {"gamma", t.gamma},
                     {"window", to_string(t.window)}};
  j["method"] = to_string(cfg.method);
  j["Ns"] = cfg.Ns;
  const auto& ic = cfg.integrator;
  j["integrator"] = {{"abs_tol", ic.abs_tol}, {"rel_tol", ic.rel_tol}, {"h_init", ic.h_init},
                     {"h_min", ic.h_min},     {"max_steps", ic.max_steps}};
  // JSON has no infinity; an absent h_max means unbounded.
  if (std::isfinite(ic.h_max)) j["integrator"]["h_max"] = ic.h_max;
  j["kernel"] = cfg.kernel == KernelKind::reference ? "reference" : "parallel";
  j["mass"] = cfg.mass;
  j["temperatures"] = cfg.temperatures;
  j["out"] = cfg.out.string();
  j["emit"] = std::vector<std::string>(cfg.emit.begin(), cfg.emit.end());
  j["delta_budget"] = cfg.delta_budget;
  j["indicator_spacing"] = cfg.indicator_spacing;
  j["orientation"] = to_string(cfg.orientation);
  j["quadrature"] = {{"order", cfg.quadrature.order},
                     {"min_panels", cfg.quadrature.min_panels},
                     {"panel_factor", cfg.quadrature.panel_factor},
                     {"tolerance", cfg.quadrature.tolerance}};
  j["moore_tolerance"] = cfg.moore_tolerance;
  j["compare_window"] = cfg.compare_window;
  if (cfg.cavity3d) {
    const auto& c = *cfg.cavity3d;
    j["cavity3d"] = {{"Ly", c.Ly}, {"Lz", c.Lz}, {"m", c.m}, {"sectors", c.sectors}};
  }
  return j;
}

}  // namespace dce
