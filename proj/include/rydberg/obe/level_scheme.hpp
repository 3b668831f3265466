#pragma once

#include <Eigen/Eigenvalues>

#include <cmath>
#include <complex>

#include "rydberg/errors.hpp"
#include "rydberg/obe/ladder.hpp"
#include "rydberg/units.hpp"

namespace rydberg::obe {

/// Four-level ladder 5S1/2 -> 5P3/2 -> nD5/2 -> n'F driven by probe,
/// coupling and RF fields.  All quantities in rad/s.
struct LevelScheme {
  double omega_p = mhz(0.1);
  double omega_c = mhz(8.0);
  double omega_rf = 0.0;
  double delta_p = 0.0;
  double delta_c = 0.0;
  double delta_rf = 0.0;
  double gamma2 = mhz(6.07);
  double gamma3 = khz(10.0);
  double gamma4 = khz(10.0);
  double gamma_transit = khz(100.0);

  void validate() const {
    const double rates[] = {omega_p, omega_c, omega_rf, gamma2,
                            gamma3,  gamma4,  gamma_transit};
    for (double r : rates)
      if (!(r >= 0.0) || !std::isfinite(r))
        throw InvalidInput("Rabi frequencies and rates must be finite and >= 0");
    for (double d : {delta_p, delta_c, delta_rf})
      if (!std::isfinite(d)) throw InvalidInput("detunings must be finite");
    if (gamma2 == 0.0 && gamma_transit == 0.0)
      throw InvalidInput("need gamma2 > 0 or gamma_transit > 0 for a unique steady state");
  }
};

/// Optional field phases; used to check that observables are gauge invariant.
struct RabiPhases {
  double probe = 0.0;
  double coupling = 0.0;
  double rf = 0.0;
};

inline Ladder<4> to_ladder(const LevelScheme& s, const RabiPhases& phases = {}) {
  Ladder<4> l;
  l.rabi = {std::polar(s.omega_p, phases.probe), std::polar(s.omega_c, phases.coupling),
            std::polar(s.omega_rf, phases.rf)};
  l.detuning = {s.delta_p, s.delta_c, s.delta_rf};
  l.decay = {s.gamma2, s.gamma3, s.gamma4};
  l.dephasing = s.gamma_transit;
  return l;
}

/// Steady-state density matrix of the four-level system (levels 0..3 map to
/// |1>..|4>).
class DensityMatrix {
 public:
  using Matrix = DensityMatrixN<4>;

  DensityMatrix() : rho_(Matrix::Zero()) { rho_(0, 0) = 1.0; }
  explicit DensityMatrix(Matrix rho) : rho_(std::move(rho)) {}

  const Matrix& matrix() const { return rho_; }
  cplx operator()(int i, int j) const { return rho_(i, j); }
  double population(int level) const { return rho_(level, level).real(); }

  /// Probe coherence <1|rho|2>; its imaginary part is positive for an
  /// absorbing medium with a real, positive probe Rabi frequency.
  cplx probe_coherence() const { return rho_(0, 1); }

  double trace_error() const { return std::abs(rho_.trace() - cplx(1.0, 0.0)); }
  double hermiticity_error() const { return (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff(); }
  double min_eigenvalue() const {
    const Matrix herm = 0.5 * (rho_ + rho_.adjoint());
    return Eigen::SelfAdjointEigenSolver<Matrix>(herm, Eigen::EigenvaluesOnly)
        .eigenvalues()
        .minCoeff();
  }

 private:
  Matrix rho_;
};

inline DensityMatrix steady_state(const LevelScheme& scheme, const RabiPhases& phases = {}) {
  scheme.validate();
  return DensityMatrix(steady_state(to_ladder(scheme, phases)));
}

/// Normalisation constant: a weak resonant two-level probe gives A = 1.
inline double absorption_normalisation(const LevelScheme& s) {
  return s.gamma2 + 2.0 * s.gamma_transit;
}

/// Dimensionless probe absorption A = c_norm * Im(rho_12) / Omega_p, so that
/// T = exp(-OD * A) reproduces Beer-Lambert for a weak two-level probe.
inline double absorption_coefficient(const LevelScheme& scheme, const RabiPhases& phases = {}) {
  if (!(scheme.omega_p > 0.0))
    throw InvalidInput("absorption needs omega_p > 0");
  const DensityMatrix rho = steady_state(scheme, phases);
  // Undo the probe phase so the result is gauge invariant.
  const cplx aligned = rho.probe_coherence() * std::polar(1.0, phases.probe);
  return absorption_normalisation(scheme) * aligned.imag() / scheme.omega_p;
}

}  // namespace rydberg::obe
