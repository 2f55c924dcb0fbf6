#include <cmath>

#include "dce/cli.hpp"
#include "dce/errors.hpp"

namespace dce {

namespace {

std::vector<int> ridge(const Eigen::MatrixXd& b2) {
  std::vector<int> r(b2.rows());
  for (Eigen::Index I = 0; I < b2.rows(); ++I) {
    Eigen::Index J = 0;
    b2.row(I).maxCoeff(&J);
    r[I] = static_cast<int>(J) + 1;
  }
  return r;
}

double rms(const Eigen::MatrixXd& m) {
  return m.size() == 0 ? 0.0 : std::sqrt(m.squaredNorm() / static_cast<double>(m.size()));
}

}  // namespace

DifferenceReport compare(const BogoliubovPair& a, const BogoliubovPair& b, int window) {
  if (window < 1 || window > a.size() || window > b.size()) {
    throw InvalidArgument("cli", "comparison window " + std::to_string(window) + " exceeds N = " +
                                     std::to_string(std::min(a.size(), b.size())));
  }
  const int w = window;
  const Eigen::MatrixXd a_alpha = a.alpha.topLeftCorner(w, w).cwiseAbs2();
  const Eigen::MatrixXd b_alpha = b.alpha.topLeftCorner(w, w).cwiseAbs2();
  const Eigen::MatrixXd a_beta = a.beta.topLeftCorner(w, w).cwiseAbs2();
  const Eigen::MatrixXd b_beta = b.beta.topLeftCorner(w, w).cwiseAbs2();

  DifferenceReport r;
  r.window = w;
  r.diff_alpha2 = a_alpha - b_alpha;
  r.diff_beta2 = a_beta - b_beta;
  r.max_diff_alpha2 = r.diff_alpha2.cwiseAbs().maxCoeff();
  r.max_diff_beta2 = r.diff_beta2.cwiseAbs().maxCoeff();
  r.rms_diff_alpha2 = rms(r.diff_alpha2);
  r.rms_diff_beta2 = rms(r.diff_beta2);
  r.max_beta2_a = a_beta.maxCoeff();
  r.max_beta2_b = b_beta.maxCoeff();
  r.ridge_a = ridge(a_beta);
  r.ridge_b = ridge(b_beta);
  r.ridges_match = r.ridge_a == r.ridge_b;
  return r;
}

nlohmann::json DifferenceReport::summary() const {
  const double scale = std::max(max_beta2_a, max_beta2_b);
  return {{"window", window},
          {"max_diff_alpha2", max_diff_alpha2},
          {"max_diff_beta2", max_diff_beta2},
          {"rms_diff_alpha2", rms_diff_alpha2},
          {"rms_diff_beta2", rms_diff_beta2},
          {"max_beta2_a", max_beta2_a},
          {"max_beta2_b", max_beta2_b},
          {"relative_diff_beta2", scale > 0.0 ? max_diff_beta2 / scale : 0.0},
          {"ridge_a", ridge_a},
          {"ridge_b", ridge_b},
          {"ridges_match", ridges_match}};
}

}  // namespace dce
