#pragma once

// Thermal averaging of the four-level probe absorption and the resulting
// probe transmission spectra.

#include <cmath>
#include <numbers>
#include <string_view>
#include <vector>

#include "rydberg/errors.hpp"
#include "rydberg/obe/level_scheme.hpp"
#include "rydberg/obe/quadrature.hpp"
#include "rydberg/parallel.hpp"
#include "rydberg/units.hpp"

namespace rydberg::obe {

/// Counter-propagating probe and coupling beams crossing at a small angle.
struct BeamGeometry {
  double lambda_p = 780.241e-9;  // m
  double lambda_c = 480.0e-9;    // m
  double theta_deg = 2.0;        // angle between the beams
  double waist_p = 70e-6;        // m
  double waist_c = 60e-6;        // m

  double k_p() const { return two_pi / lambda_p; }
  double k_c() const { return two_pi / lambda_c; }
  double theta_rad() const { return theta_deg * std::numbers::pi / 180.0; }

  void validate() const {
    if (!(lambda_p > 0.0) || !(lambda_c > 0.0)) throw InvalidInput("wavelengths must be > 0");
    if (!(theta_deg >= 0.0 && theta_deg < 90.0)) throw InvalidInput("theta must lie in [0, 90) degrees");
    if (!(waist_p > 0.0) || !(waist_c > 0.0)) throw InvalidInput("beam waists must be > 0");
  }
};

struct CellSpec {
  double length = 0.075;         // m
  double temperature = 358.15;   // K
  double density = 1e18;         // m^-3
  double od_resonant = 5.0;      // Doppler-broadened weak-probe OD on resonance
  double atom_mass = phys::rb87_mass;

  /// One-dimensional thermal speed sqrt(kT/m).
  double thermal_speed() const { return std::sqrt(phys::boltzmann * temperature / atom_mass); }

  void validate() const {
    if (!(length > 0.0) || !(temperature > 0.0) || !(density > 0.0) || !(od_resonant > 0.0) ||
        !(atom_mass > 0.0))
      throw InvalidInput("cell length, temperature, density, OD and mass must be > 0");
  }
};

struct QuadratureSpec {
  int n_longitudinal = 64;
  int n_transverse = 32;
  double sigma_cut = 4.0;

  void validate() const {
    if (n_longitudinal < 1 || n_transverse < 1) throw InvalidInput("node counts must be >= 1");
    if (!(sigma_cut > 0.0)) throw InvalidInput("sigma_cut must be > 0");
  }
};

/// Velocities (thermal-speed units) at which the probe is resonant with a
/// dressed state of the upper three levels: roots of det(H_upper(v)) = 0.
/// Complex roots contribute their real parts (near misses).
inline std::vector<double> dressed_resonance_velocities(const LevelScheme& s, double delta_c_eff,
                                                        double k_p_sigma, double k_c_sigma) {
  using Poly = std::vector<double>;
  auto mul = [](const Poly& a, const Poly& b) {
    Poly r(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    return r;
  };
  auto axpy = [](Poly a, double s, const Poly& b) {
    if (a.size() < b.size()) a.resize(b.size(), 0.0);
    for (std::size_t i = 0; i < b.size(); ++i) a[i] += s * b[i];
    return a;
  };
  // Diagonal of H for levels 2..4 as linear functions of x = v / sigma.
  const Poly d2 = {-s.delta_p, k_p_sigma};
  const Poly d3 = {-(s.delta_p + delta_c_eff), k_p_sigma - k_c_sigma};
  const Poly d4 = {-(s.delta_p + delta_c_eff + s.delta_rf), k_p_sigma - k_c_sigma};
  const Poly f1 = d2;
  const Poly f2 = axpy(mul(d3, f1), -0.25 * s.omega_c * s.omega_c, Poly{1.0});
  const Poly f3 = axpy(mul(d4, f2), -0.25 * s.omega_rf * s.omega_rf, f1);
  return polynomial_root_real_parts(f3);
}

namespace detail {

inline double coherence_rate(const LevelScheme& s) { return 0.5 * s.gamma2 + s.gamma_transit; }

/// Node-clustering widths of the two velocity axes, in thermal-speed units.
inline double longitudinal_scale(const LevelScheme& s, double k_p_sigma) {
  return 0.1 * coherence_rate(s) / k_p_sigma;
}
inline double transverse_scale(const LevelScheme& s, double k_c_perp_sigma) {
  return 0.5 * coherence_rate(s) / k_c_perp_sigma;
}

}  // namespace detail

/// Thermal average of absorption_coefficient over longitudinal (v_z) and,
/// for theta > 0, transverse (v_t) velocities:
///   delta_p -> delta_p - k_p v_z,
///   delta_c -> delta_c + k_c (v_z cos(theta) - v_t sin(theta)).
/// The result is divided by the same average of the weak two-level
/// Lorentzian on resonance, so OD * A is the Doppler-broadened optical depth
/// and the zero-temperature limit reproduces the single-atom value.
inline double doppler_averaged_absorption(const LevelScheme& scheme, const BeamGeometry& geometry,
                                          const CellSpec& cell, const QuadratureSpec& quad) {
  scheme.validate();
  geometry.validate();
  cell.validate();
  quad.validate();
  if (!(scheme.omega_p > 0.0)) throw InvalidInput("absorption needs omega_p > 0");

  const double sigma = cell.thermal_speed();
  const double kp_s = geometry.k_p() * sigma;
  const double kc_par_s = geometry.k_c() * std::cos(geometry.theta_rad()) * sigma;
  const double kc_perp_s = geometry.k_c() * std::sin(geometry.theta_rad()) * sigma;
  const double cut = quad.sigma_cut;
  const double a_long = detail::longitudinal_scale(scheme, kp_s);

  VelocityRule transverse;
  if (geometry.theta_deg == 0.0 || quad.n_transverse == 1) {
    transverse.x = {0.0};
    transverse.w = {1.0};
  } else {
    // The dark-state resonance for a given probe detuning sits where the
    // transverse shift cancels the residual two-photon offset.
    const double a_t = detail::transverse_scale(scheme, kc_perp_s);
    const double centre = (scheme.delta_p / kp_s + scheme.delta_c / (geometry.k_c() * sigma)) *
                          (geometry.k_c() * sigma) / kc_perp_s;
    // The v_z-averaged window has steep shoulders about one coupling Rabi
    // frequency either side of the centre.
    const double shoulder = std::hypot(scheme.omega_c, scheme.omega_rf) / kc_perp_s;
    transverse = resonance_rule(quad.n_transverse, cut, a_t,
                                {0.0, centre, centre - shoulder, centre + shoulder});
  }

  double total = 0.0;
  for (std::size_t t = 0; t < transverse.size(); ++t) {
    const double delta_c_eff = scheme.delta_c - kc_perp_s * transverse.x[t];
    std::vector<double> features = dressed_resonance_velocities(scheme, delta_c_eff, kp_s, kc_par_s);
    features.push_back(scheme.delta_p / kp_s);
    const VelocityRule longitudinal = resonance_rule(quad.n_longitudinal, cut, a_long, features);
    double inner = 0.0;
    LevelScheme node = scheme;
    for (std::size_t i = 0; i < longitudinal.size(); ++i) {
      node.delta_p = scheme.delta_p - kp_s * longitudinal.x[i];
      node.delta_c = delta_c_eff + kc_par_s * longitudinal.x[i];
      inner += longitudinal.w[i] * absorption_coefficient(node);
    }
    total += transverse.w[t] * inner;
  }

  // Same rule applied to the weak two-level Lorentzian on resonance.
  const double g = detail::coherence_rate(scheme);
  const VelocityRule reference = resonance_rule(quad.n_longitudinal, cut, a_long, {0.0});
  double norm = 0.0;
  for (std::size_t i = 0; i < reference.size(); ++i) {
    const double shift = kp_s * reference.x[i];
    norm += reference.w[i] * g * g / (g * g + shift * shift);
  }
  double transverse_mass = 0.0;
  for (double w : transverse.w) transverse_mass += w;
  return total / (norm * transverse_mass);
}

enum class SweepAxis { probe, coupling };

inline SweepAxis parse_sweep_axis(std::string_view name) {
  if (name == "probe") return SweepAxis::probe;
  if (name == "coupling") return SweepAxis::coupling;
  throw InvalidInput("sweep axis must be 'probe' or 'coupling'");
}

struct SpectrumPoint {
  double detuning;      // rad/s
  double transmission;  // exp(-OD * A)
};

/// T(delta) = exp(-od_resonant * A) along the chosen detuning axis.
inline std::vector<SpectrumPoint> transmission_spectrum(const LevelScheme& base,
                                                        const std::vector<double>& sweep,
                                                        SweepAxis axis, const BeamGeometry& geometry,
                                                        const CellSpec& cell, const QuadratureSpec& quad) {
  if (sweep.empty()) throw InvalidInput("transmission sweep is empty");
  return parallel_map<SpectrumPoint>(sweep.size(), [&](std::size_t i) {
    LevelScheme s = base;
    (axis == SweepAxis::probe ? s.delta_p : s.delta_c) = sweep[i];
    try {
      const double a = doppler_averaged_absorption(s, geometry, cell, quad);
      return SpectrumPoint{sweep[i], std::exp(-cell.od_resonant * a)};
    } catch (const SingularSystem& e) {
      throw SweepPointError(sweep[i], e.what());
    }
  });
}

}  // namespace rydberg::obe
