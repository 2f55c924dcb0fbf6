#include "dce/observables.hpp"

#include <cmath>

#include "dce/errors.hpp"

namespace dce {

namespace {

void check_energies(const std::vector<double>& E, int N) {
  if (static_cast<int>(E.size()) < N) {
    throw InvalidArgument("observables", "need one energy per mode");
  }
  for (double e : E) {
    if (!(e > 0.0)) throw InvalidArgument("observables", "mode energies must be positive");
  }
}

void check_temperature(double T) {
  if (!(T >= 0.0) || !std::isfinite(T)) {
    throw InvalidArgument("observables", "temperature must be finite and non-negative");
  }
}

// |x|^2 of beta (or alpha) with the out mode as second index.
Eigen::MatrixXd abs2_oriented(const Eigen::MatrixXcd& m, IndexOrientation o) {
  return o == IndexOrientation::column ? Eigen::MatrixXd(m.cwiseAbs2())
                                       : Eigen::MatrixXd(m.cwiseAbs2().transpose());
}

}  // namespace

std::string to_string(IndexOrientation o) {
  return o == IndexOrientation::column ? "column" : "row";
}

IndexOrientation orientation_from_string(const std::string& s) {
  if (s == "column") return IndexOrientation::column;
  if (s == "row") return IndexOrientation::row;
  throw InvalidArgument("observables", "unknown index orientation '" + s + "'");
}

PairCorrelations vacuum_pair_correlations(const BogoliubovPair& pair) {
  PairCorrelations c;
  c.O1 = pair.alpha.transpose() * pair.beta.conjugate();
  c.O2 = pair.beta.transpose() * pair.beta.conjugate();
  return c;
}

std::vector<double> vacuum_number(const BogoliubovPair& pair, IndexOrientation o) {
  const Eigen::MatrixXd b2 = abs2_oriented(pair.beta, o);
  std::vector<double> out(b2.cols());
  // Plain ordered loop: thermal_number at T = 0 must reproduce this bit for bit.
  for (int I = 0; I < b2.cols(); ++I) {
    double s = 0.0;
    for (int K = 0; K < b2.rows(); ++K) s += b2(K, I);
    out[I] = s;
  }
  return out;
}

std::vector<double> gibbs_occupancy(const std::vector<double>& E, double T) {
  check_temperature(T);
  check_energies(E, static_cast<int>(E.size()));
  std::vector<double> n(E.size(), 0.0);
  if (T == 0.0) return n;
  for (std::size_t J = 0; J < E.size(); ++J) n[J] = 1.0 / std::expm1(E[J] / T);
  return n;
}

std::vector<double> thermal_number(const BogoliubovPair& pair, double T,
                                   const std::vector<double>& E, IndexOrientation o) {
  const int N = pair.size();
  check_energies(E, N);
  const std::vector<double> occ = gibbs_occupancy(std::vector<double>(E.begin(), E.begin() + N), T);
  const Eigen::MatrixXd a2 = abs2_oriented(pair.alpha, o);
  const Eigen::MatrixXd b2 = abs2_oriented(pair.beta, o);
  std::vector<double> out(N);
  for (int I = 0; I < N; ++I) {
    double vac = 0.0;
    double th = 0.0;
    for (int J = 0; J < N; ++J) {
      vac += b2(J, I);
      th += (a2(J, I) + b2(J, I)) * occ[J];
    }
    // At T = 0 every occupancy is exactly 0, leaving the vacuum sum untouched.
    out[I] = T == 0.0 ? vac : vac + th;
  }
  return out;
}

std::vector<double> mode_energies(const ModeSpectrum& spectrum) {
  std::vector<double> E(spectrum.N);
  for (int J = 0; J < spectrum.N; ++J) E[J] = spectrum.omega(J + 1);
  return E;
}

SpectrumResult spectrum(const BogoliubovPair& pair, const std::vector<double>& temperatures,
                        const std::vector<double>& E, IndexOrientation o) {
  SpectrumResult r;
  r.temperatures = temperatures;
  r.orientation = o;
  for (double T : temperatures) r.N.push_back(thermal_number(pair, T, E, o));
  r.vacuum = vacuum_pair_correlations(pair);
  return r;
}

}  // namespace dce
