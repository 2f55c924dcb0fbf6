#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>

#include "dce/cli.hpp"
#include "dce/errors.hpp"
#include "dce/extrapolation.hpp"
#include "dce/io.hpp"
#include "dce/pipeline.hpp"

namespace dce {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string temp_label(double T) { return "T=" + io::format_double(T); }

// Writes the emitted views of a pair and returns the file names, relative to out.
std::vector<std::string> write_pair(const RunConfig& cfg, const fs::path& dir, const BogoliubovPair& p,
                                    const std::vector<double>& energies) {
  std::vector<std::string> files;
  auto put_matrix = [&](const std::string& name, const Eigen::MatrixXd& m) {
    io::write_matrix_csv(cfg.out / dir / name, m);
    files.push_back((dir / name).string());
  };
  if (cfg.emit.count("alpha")) {
    put_matrix("alpha_abs2.csv", p.alpha.cwiseAbs2());
    put_matrix("alpha_re.csv", p.alpha.real());
    put_matrix("alpha_im.csv", p.alpha.imag());
  }
  if (cfg.emit.count("beta")) {
    put_matrix("beta_abs2.csv", p.beta.cwiseAbs2());
    put_matrix("beta_re.csv", p.beta.real());
    put_matrix("beta_im.csv", p.beta.imag());
  }
  if (cfg.emit.count("spectra")) {
    io::Table t;
    std::vector<double> idx(p.size());
    for (int I = 0; I < p.size(); ++I) idx[I] = I + 1;
    t.add_column("I", idx);
    t.add_column("vacuum", vacuum_number(p, cfg.orientation));
    for (double T : cfg.temperatures) t.add_column(temp_label(T), thermal_number(p, T, energies, cfg.orientation));
    io::write_table_csv(cfg.out / dir / "spectra.csv", t);
    files.push_back((dir / "spectra.csv").string());
  }
  return files;
}

json identity_json(const IdentityResiduals& r) {
  return {{"full", r.full}, {"interior", r.interior}, {"interior_size", r.interior_size}};
}

struct CanonicalJob {
  int N = 0;
  std::string dir;
  BogoliubovPair pair;
};

json run_canonical_job(const RunConfig& cfg, const Trajectory& traj, int N, double mass_sq,
                       const fs::path& dir, std::map<int, BogoliubovPair>* keep) {
  CanonicalConfig cc;
  cc.spectrum = {N, mass_sq};
  cc.integrator = cfg.integrator;
  cc.kernel = cfg.kernel;
  cc.indicator_spacing = cfg.indicator_spacing;
  const CanonicalResult r = run_canonical(traj, cc);

  json entry;
  entry["method"] = "canonical";
  entry["N"] = N;
  entry["mass_sq"] = mass_sq;
  entry["dir"] = dir.string();
  entry["files"] = write_pair(cfg, dir, r.pair, mode_energies(cc.spectrum));
  if (cfg.emit.count("deltas")) {
    io::Table t;
    std::vector<double> tau, d1, d2, dc;
    for (const auto& s : r.indicators.samples) {
      tau.push_back(s.tau);
      d1.push_back(s.delta1);
      d2.push_back(s.delta2);
      dc.push_back(s.delta_conj);
    }
    t.add_column("tau", tau);
    t.add_column("delta1", d1);
    t.add_column("delta2", d2);
    t.add_column("delta_conj", dc);
    io::write_table_csv(cfg.out / dir / "deltas.csv", t);
    entry["files"].push_back((dir / "deltas.csv").string());
  }
  entry["max_delta1"] = r.indicators.max_delta1();
  entry["max_delta2"] = r.indicators.max_delta2();
  entry["max_delta_conj"] = r.indicators.max_delta_conj();
  entry["identities"] = identity_json(check_identities(r.pair));
  entry["L_final"] = r.L_final;
  entry["steps"] = {{"accepted", r.stats.accepted},
                    {"rejected", r.stats.rejected},
                    {"rhs_evals", r.stats.rhs_evals}};
  entry["wall_seconds"] = r.wall_seconds;
  entry["degraded"] = !(std::max(r.indicators.max_delta1(), r.indicators.max_delta2()) <= cfg.delta_budget);
  entry["orientation"] = to_string(cfg.orientation);
  if (keep) (*keep)[N] = r.pair;
  return entry;
}

json run_conformal_job(const RunConfig& cfg, const Trajectory& traj, int N, const fs::path& dir,
                       std::map<int, BogoliubovPair>* keep) {
  const auto t0 = std::chrono::steady_clock::now();
  const MooreFunctions moore(traj);
  const ConformalResult r = bogoliubov_conformal(moore, N, cfg.quadrature);
  const auto residuals =
      moore_residuals(moore, moore.motion_start(), std::max(moore.motion_stop(), moore.motion_start() + 1e-9), 2001);
  double worst = 0.0;
  for (const auto& m : residuals) worst = std::max({worst, std::abs(m.left), std::abs(m.right)});

  json entry;
  entry["method"] = "conformal";
  entry["N"] = N;
  entry["dir"] = dir.string();
  entry["files"] = write_pair(cfg, dir, r.pair, mode_energies({N, 0.0}));
  if (cfg.emit.count("moore")) {
    io::Table res;
    std::vector<double> t, l, rr;
    for (const auto& m : residuals) {
      t.push_back(m.t);
      l.push_back(m.left);
      rr.push_back(m.right);
    }
    res.add_column("t", t);
    res.add_column("left", l);
    res.add_column("right", rr);
    io::write_table_csv(cfg.out / dir / "moore_residuals.csv", res);
    entry["files"].push_back((dir / "moore_residuals.csv").string());

    io::Table g;
    const int points = 4001;
    const double z0 = moore.motion_start() - 0.5;
    const double z1 = moore.motion_stop() + moore.lambda_f() + 0.5;
    std::vector<double> z(points), G(points), dG(points), F(points), dF(points), n(points);
    for (int k = 0; k < points; ++k) {
      z[k] = z0 + (z1 - z0) * k / (points - 1);
      const MooreValue gv = moore.G(z[k]);
      const MooreValue fv = moore.F(z[k]);
      G[k] = gv.value.v;
      dG[k] = gv.value.d1;
      F[k] = fv.value.v;
      dF[k] = fv.value.d1;
      n[k] = gv.n;
    }
    g.add_column("z", z);
    g.add_column("G", G);
    g.add_column("dG", dG);
    g.add_column("F", F);
    g.add_column("dF", dF);
    g.add_column("n", n);
    io::write_table_csv(cfg.out / dir / "moore_functions.csv", g);
    entry["files"].push_back((dir / "moore_functions.csv").string());
  }
  if (cfg.emit.count("rset")) {
    io::Table t;
    const int points = 2001;
    std::vector<double> ts(points), xs(points), T00(points), T01(points);
    for (int k = 0; k < points; ++k) {
      ts[k] = moore.motion_start() + (moore.motion_stop() - moore.motion_start()) * k / (points - 1);
      xs[k] = traj.right(ts[k]).v;
      const RsetSample s = rset(ts[k], xs[k], moore);
      T00[k] = s.T00;
      T01[k] = s.T01;
    }
    t.add_column("t", ts);
    t.add_column("x", xs);
    t.add_column("T00", T00);
    t.add_column("T01", T01);
    io::write_table_csv(cfg.out / dir / "rset.csv", t);
    entry["files"].push_back((dir / "rset.csv").string());
  }
  entry["panels"] = r.panels;
  entry["unconverged"] = r.unconverged;
  entry["max_quadrature_error"] = std::max(r.alpha_error.maxCoeff(), r.beta_error.maxCoeff());
  entry["max_moore_residual"] = worst;
  entry["identities"] = identity_json(check_identities(r.pair));
  entry["wall_seconds"] = seconds_since(t0);
  entry["degraded"] = r.unconverged > 0 || !(worst <= cfg.moore_tolerance);
  if (keep) (*keep)[N] = r.pair;
  return entry;
}

json richardson_block(const RunConfig& cfg, const std::map<int, BogoliubovPair>& pairs) {
  json j;
  if (pairs.size() < 3) {
    j["skipped"] = "needs at least three canonical truncations";
    return j;
  }
  TruncationSeries number;
  TruncationSeries beta2;
  const int window = pairs.begin()->first / 2;
  if (window < 1) {
    j["skipped"] = "smallest N too small for an interior block";
    return j;
  }
  for (const auto& [N, p] : pairs) {
    number.Ns.push_back(N);
    beta2.Ns.push_back(N);
    const auto n = vacuum_number(p, cfg.orientation);
    number.values.emplace_back(n.begin(), n.begin() + window);
    const Eigen::MatrixXd b = p.beta.topLeftCorner(window, window).cwiseAbs2();
    beta2.values.emplace_back(b.data(), b.data() + b.size());
  }
  try {
    const RichardsonResult rn = richardson(number);
    const RichardsonResult rb = richardson(beta2);
    io::Table t;
    std::vector<double> idx(window);
    for (int I = 0; I < window; ++I) idx[I] = I + 1;
    t.add_column("I", idx);
    for (std::size_t k = 0; k < number.Ns.size(); ++k) {
      t.add_column("N=" + std::to_string(number.Ns[k]), number.values[k]);
    }
    t.add_column("limit", rn.limit);
    t.add_column("order", rn.order);
    t.add_column("uncertainty", rn.uncertainty);
    t.add_column("fallback", std::vector<double>(rn.fallback.begin(), rn.fallback.end()));
    io::write_table_csv(cfg.out / "richardson" / "vacuum_number.csv", t);
    const Eigen::MatrixXd limit = Eigen::Map<const Eigen::MatrixXd>(rb.limit.data(), window, window);
    const Eigen::MatrixXd unc = Eigen::Map<const Eigen::MatrixXd>(rb.uncertainty.data(), window, window);
    io::write_matrix_csv(cfg.out / "richardson" / "beta_abs2_limit.csv", limit);
    io::write_matrix_csv(cfg.out / "richardson" / "beta_abs2_uncertainty.csv", unc);
    j["window"] = window;
    j["Ns"] = number.Ns;
    j["files"] = {"richardson/vacuum_number.csv", "richardson/beta_abs2_limit.csv",
                  "richardson/beta_abs2_uncertainty.csv"};
    j["fallback_vacuum_number"] = rn.fallback_count();
    j["fallback_beta_abs2"] = rb.fallback_count();
  } catch (const NonGeometricNs& e) {
    j["skipped"] = e.what();
  }
  return j;
}

}  // namespace

RunOutcome run(const RunConfig& cfg) {
  cfg.validate();
  const auto t0 = std::chrono::steady_clock::now();
  const OscillatingTrajectory traj(cfg.trajectory);
  std::vector<int> Ns = cfg.Ns;
  std::sort(Ns.begin(), Ns.end());
  Ns.erase(std::unique(Ns.begin(), Ns.end()), Ns.end());

  json runs = json::array();
  json errors = json::array();
  std::map<int, BogoliubovPair> canonical, conformal;
  auto guarded = [&](const std::string& what, auto&& job) {
    try {
      runs.push_back(job());
    } catch (const Error& e) {
      errors.push_back({{"job", what}, {"module", e.module()}, {"message", e.what()}});
    } catch (const std::exception& e) {
      errors.push_back({{"job", what}, {"module", "unknown"}, {"message", e.what()}});
    }
  };

  const bool want_canonical = cfg.method != Method::conformal;
  const bool want_conformal = cfg.method != Method::canonical;
  for (int N : Ns) {
    const std::string tag = "N" + std::to_string(N);
    if (want_canonical && cfg.cavity3d) {
      for (const auto& [n2, n3] : cfg.cavity3d->sectors) {
        const double mu2 = effective_mass_sq(n2, n3, cfg.cavity3d->Ly, cfg.cavity3d->Lz, cfg.cavity3d->m);
        const fs::path dir = fs::path("canonical") / tag / ("sector_" + std::to_string(n2) + "_" + std::to_string(n3));
        guarded("canonical " + tag + " sector " + std::to_string(n2) + "," + std::to_string(n3), [&] {
          json e = run_canonical_job(cfg, traj, N, mu2, dir, nullptr);
          e["sector"] = {n2, n3};
          return e;
        });
      }
    } else if (want_canonical) {
      guarded("canonical " + tag, [&] {
        return run_canonical_job(cfg, traj, N, cfg.mass * cfg.mass, fs::path("canonical") / tag, &canonical);
      });
    }
    if (want_conformal) {
      guarded("conformal " + tag, [&] {
        return run_conformal_job(cfg, traj, N, fs::path("conformal") / tag, &conformal);
      });
    }
  }

  json manifest;
  manifest["config"] = to_json(cfg);
  manifest["runs"] = runs;

  if (want_canonical && !cfg.cavity3d) {
    try {
      manifest["richardson"] = richardson_block(cfg, canonical);
    } catch (const Error& e) {
      errors.push_back({{"job", "richardson"}, {"module", e.module()}, {"message", e.what()}});
    }
  }

  if (cfg.method == Method::both) {
    json comps = json::array();
    for (const auto& [N, a] : canonical) {
      auto it = conformal.find(N);
      if (it == conformal.end()) continue;
      try {
        const DifferenceReport d = compare(a, it->second, std::min(cfg.compare_window, N));
        const fs::path dir = fs::path("compare") / ("N" + std::to_string(N));
        io::write_matrix_csv(cfg.out / dir / "beta_abs2_diff.csv", d.diff_beta2);
        io::write_matrix_csv(cfg.out / dir / "alpha_abs2_diff.csv", d.diff_alpha2);
        json s = d.summary();
        s["N"] = N;
        s["files"] = {(dir / "beta_abs2_diff.csv").string(), (dir / "alpha_abs2_diff.csv").string()};
        comps.push_back(s);
      } catch (const Error& e) {
        errors.push_back({{"job", "compare N" + std::to_string(N)}, {"module", e.module()}, {"message", e.what()}});
      }
    }
    manifest["comparisons"] = comps;
  }

  double max_d1 = 0.0, max_d2 = 0.0;
  bool degraded = false;
  for (const auto& r : runs) {
    if (r.contains("max_delta1")) max_d1 = std::max(max_d1, r["max_delta1"].get<double>());
    if (r.contains("max_delta2")) max_d2 = std::max(max_d2, r["max_delta2"].get<double>());
    degraded = degraded || r["degraded"].get<bool>();
  }
  manifest["max_delta1"] = max_d1;
  manifest["max_delta2"] = max_d2;
  manifest["degraded"] = degraded;
  manifest["errors"] = errors;
  manifest["wall_seconds"] = seconds_since(t0);

  RunOutcome out;
  out.exit_status = !errors.empty() ? kExitError : degraded ? kExitDegraded : kExitOk;
  manifest["exit_status"] = out.exit_status;
  io::write_json(cfg.out / "manifest.json", manifest);
  out.manifest = std::move(manifest);
  return out;
}

}  // namespace dce
