#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "dce/cli.hpp"
#include "dce/errors.hpp"
#include "dce/io.hpp"

namespace {

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dynamical Casimir effect simulator for a 1D cavity with moving mirrors"};

  std::string config_path, preset, method, ns, temps, out, emit, orientation;
  double abs_tol = 0.0, rel_tol = 0.0, mass = -1.0;
  bool print_config = false, list_presets = false;
  app.add_option("-c,--config", config_path, "JSON configuration file");
  app.add_option("-p,--preset", preset, "named trajectory preset");
  app.add_option("-m,--method", method, "canonical, conformal or both");
  app.add_option("-N,--N", ns, "comma-separated truncations, e.g. 128,256,512");
  app.add_option("--abs-tol", abs_tol, "integrator absolute tolerance");
  app.add_option("--rel-tol", rel_tol, "integrator relative tolerance");
  app.add_option("--mass", mass, "field mass");
  app.add_option("--temps", temps, "comma-separated temperatures");
  app.add_option("-o,--out", out, "output directory");
  app.add_option("--emit", emit, "comma-separated artifacts: alpha,beta,spectra,deltas,rset,moore");
  app.add_option("--orientation", orientation, "index orientation of spectra: column or row");
  app.add_flag("--print-config", print_config, "print the resolved configuration and exit");
  app.add_flag("--list-presets", list_presets, "list trajectory presets and exit");
  CLI11_PARSE(app, argc, argv);

  if (list_presets) {
    for (const auto& p : dce::preset_names()) std::cout << p << "\n";
    return dce::kExitOk;
  }

  dce::RunConfig cfg;
  try {
    nlohmann::json j = nlohmann::json::object();
    if (!config_path.empty()) j = dce::io::read_json(config_path);
    if (!preset.empty()) {
      j["preset"] = preset;
    }
    if (!method.empty()) j["method"] = method;
    if (!ns.empty()) {
      std::vector<int> v;
      for (const auto& s : split(ns)) v.push_back(std::stoi(s));
      j["Ns"] = v;
    }
    if (abs_tol > 0.0) j["integrator"]["abs_tol"] = abs_tol;
    if (rel_tol > 0.0) j["integrator"]["rel_tol"] = rel_tol;
    if (mass >= 0.0) j["mass"] = mass;
    if (!temps.empty()) {
      std::vector<double> v;
      for (const auto& s : split(temps)) v.push_back(std::stod(s));
      j["temperatures"] = v;
    }
    if (!out.empty()) j["out"] = out;
    if (!emit.empty()) j["emit"] = split(emit);
    if (!orientation.empty()) j["orientation"] = orientation;

    cfg = dce::config_from_json(j);
    cfg.validate();
  } catch (const std::logic_error& e) {
    std::cerr << "config: malformed number: " << e.what() << "\n";
    return dce::kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return dce::kExitConfig;
  }
  if (print_config) {
    std::cout << dce::to_json(cfg).dump(2) << "\n";
    return dce::kExitOk;
  }

  try {
    const dce::RunOutcome r = dce::run(cfg);
    for (const auto& e : r.manifest["errors"]) {
      std::cerr << "error [" << e["module"].get<std::string>() << "] " << e["job"].get<std::string>() << ": "
                << e["message"].get<std::string>() << "\n";
    }
    std::cout << "max delta1 " << r.manifest["max_delta1"].get<double>() << ", max delta2 "
              << r.manifest["max_delta2"].get<double>() << (r.manifest["degraded"].get<bool>() ? " (degraded)" : "")
              << "\nmanifest: " << (cfg.out / "manifest.json").string() << "\n";
    return r.exit_status;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return dce::kExitError;
  }
}
