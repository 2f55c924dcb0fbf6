#pragma once

#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "dce/bogoliubov.hpp"
#include "dce/conformal.hpp"
#include "dce/field3d.hpp"
#include "dce/integrator.hpp"
#include "dce/observables.hpp"
#include "dce/trajectory.hpp"

namespace dce {

enum class Method { canonical, conformal, both };

std::string to_string(Method m);
Method method_from_string(const std::string& s);

/// Everything one invocation needs. JSON keys mirror the field names; see
/// config_from_json for the accepted layout.
struct RunConfig {
  std::string preset;  ///< empty: use `trajectory` as given
  TrajectoryParams trajectory;
  Method method = Method::canonical;
  std::vector<int> Ns{64};
  IntegratorConfig integrator;
  KernelKind kernel = KernelKind::parallel;
  double mass = 0.0;  ///< field mass of the 1+1 theory
  std::vector<double> temperatures{0.0};
  std::filesystem::path out = "dce_out";
  std::set<std::string> emit{"beta", "spectra", "deltas"};
  double delta_budget = 1e-9;
  double indicator_spacing = 0.01;
  IndexOrientation orientation = IndexOrientation::column;
  ConformalQuadrature quadrature;
  double moore_tolerance = 1e-8;
  int compare_window = 32;
  std::optional<Cavity3DParams> cavity3d;

  /// Throws ConfigError for anything the run could not honour.
  void validate() const;
};

/// Valid names for RunConfig::emit.
const std::set<std::string>& emit_names();

/// Starts from the defaults (or the named preset) and applies the keys present.
/// Unknown keys are rejected.
RunConfig config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const RunConfig& cfg);

/// Entrywise comparison of |alpha|^2 and |beta|^2 on the leading window.
struct DifferenceReport {
  int window = 0;
  Eigen::MatrixXd diff_alpha2;  ///< |alpha_a|^2 - |alpha_b|^2
  Eigen::MatrixXd diff_beta2;
  double max_diff_alpha2 = 0.0;
  double max_diff_beta2 = 0.0;
  double rms_diff_alpha2 = 0.0;
  double rms_diff_beta2 = 0.0;
  double max_beta2_a = 0.0;
  double max_beta2_b = 0.0;
  /// Row-wise argmax of |beta|^2 (1-based J) for each I in the window.
  std::vector<int> ridge_a;
  std::vector<int> ridge_b;
  bool ridges_match = false;

  nlohmann::json summary() const;
};

/// Throws InvalidArgument when the window exceeds either pair.
DifferenceReport compare(const BogoliubovPair& a, const BogoliubovPair& b, int window);

/// Outcome of run(): the manifest written to out/manifest.json and the
/// process exit status.
struct RunOutcome {
  nlohmann::json manifest;
  int exit_status = 0;
};

/// Exit statuses.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitDegraded = 3;

/// Executes every requested job, writes artifacts and the manifest. Errors
/// inside a job are recorded with their module and do not stop other jobs.
/// Throws ConfigError before any work if the configuration is invalid.
RunOutcome run(const RunConfig& cfg);

}  // namespace dce
