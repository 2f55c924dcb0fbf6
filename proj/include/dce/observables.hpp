#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dce/bogoliubov.hpp"

namespace dce {

/// Which index of beta labels the out mode in particle-number sums.
///   column: N_I = sum_K |beta_KI|^2  (out index second; matches O2 and the
///           thermal formula at T = 0)
///   row:    N_I = sum_K |beta_IK|^2
enum class IndexOrientation { column, row };

std::string to_string(IndexOrientation o);
IndexOrientation orientation_from_string(const std::string& s);

/// Vacuum expectation values
///   O1_IJ = sum_K alpha_KI conj(beta_KJ),  O2_IJ = sum_K beta_KI conj(beta_KJ).
struct PairCorrelations {
  Eigen::MatrixXcd O1;
  Eigen::MatrixXcd O2;
};

PairCorrelations vacuum_pair_correlations(const BogoliubovPair& pair);

std::vector<double> vacuum_number(const BogoliubovPair& pair,
                                  IndexOrientation o = IndexOrientation::column);

/// Bose-Einstein occupancy 1/(e^{E/T} - 1); exactly 0 at T = 0.
std::vector<double> gibbs_occupancy(const std::vector<double>& E, double T);

/// Final particle number per out mode for an initial Gibbs state:
///   N_I = sum_J |beta_JI|^2 + sum_J (|alpha_JI|^2 + |beta_JI|^2) n_J(T)
/// with n_J the Gibbs occupancy of in mode J (column orientation).
std::vector<double> thermal_number(const BogoliubovPair& pair, double T,
                                   const std::vector<double>& E,
                                   IndexOrientation o = IndexOrientation::column);

/// Default mode energies: E_J = K_J of the initial static cavity.
std::vector<double> mode_energies(const ModeSpectrum& spectrum);

struct SpectrumResult {
  std::vector<double> temperatures;
  std::vector<std::vector<double>> N;  ///< N[t][I]
  PairCorrelations vacuum;
  IndexOrientation orientation = IndexOrientation::column;
};

SpectrumResult spectrum(const BogoliubovPair& pair, const std::vector<double>& temperatures,
                        const std::vector<double>& E,
                        IndexOrientation o = IndexOrientation::column);

}  // namespace dce
