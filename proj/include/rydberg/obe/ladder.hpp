#pragma once

// Steady state of an N-level ladder |1> -> |2> -> ... -> |N> under the
// rotating-wave Hamiltonian with spontaneous decay down the ladder and pure
// dephasing on every coherence.

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <string>

#include "rydberg/errors.hpp"

namespace rydberg::obe {

using cplx = std::complex<double>;

template <int N>
using DensityMatrixN = Eigen::Matrix<cplx, N, N>;

/// Couplings are indexed by the lower level of each step, 0-based.
template <int N>
struct Ladder {
  static_assert(N >= 2, "a ladder needs at least two levels");
  static constexpr int levels = N;

  std::array<cplx, N - 1> rabi{};        // rad/s, may carry a phase
  std::array<double, N - 1> detuning{};  // rad/s, laser minus transition
  std::array<double, N - 1> decay{};     // rad/s, |k+1> -> |k>
  double dephasing = 0.0;                // rad/s, on every coherence
};

/// H/hbar in the frame rotating with every field.  Level k sits at minus the
/// cumulative detuning of the steps below it; H(k+1,k) = rabi[k]/2.
template <int N>
DensityMatrixN<N> hamiltonian(const Ladder<N>& ladder) {
  DensityMatrixN<N> h = DensityMatrixN<N>::Zero();
  double cumulative = 0.0;
  for (int k = 0; k + 1 < N; ++k) {
    cumulative += ladder.detuning[k];
    h(k + 1, k + 1) = -cumulative;
    h(k + 1, k) = 0.5 * ladder.rabi[k];
    h(k, k + 1) = 0.5 * std::conj(ladder.rabi[k]);
  }
  return h;
}

/// Row-major vectorisation: rho(i, j) lives at index i * N + j.
template <int N>
using Superoperator = Eigen::Matrix<cplx, N * N, N * N>;

template <int N>
Superoperator<N> liouvillian(const Ladder<N>& ladder) {
  const DensityMatrixN<N> h = hamiltonian(ladder);
  const cplx i_unit(0.0, 1.0);
  Superoperator<N> l = Superoperator<N>::Zero();
  const auto at = [](int i, int j) { return i * N + j; };

  // -i [H, rho]
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      for (int k = 0; k < N; ++k) {
        l(at(i, j), at(k, j)) += -i_unit * h(i, k);
        l(at(i, j), at(i, k)) += i_unit * h(k, j);
      }

  // Spontaneous decay |k+1> -> |k|.
  for (int k = 0; k + 1 < N; ++k) {
    const double g = ladder.decay[k];
    if (g == 0.0) continue;
    const int up = k + 1;
    l(at(k, k), at(up, up)) += g;
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) {
        const double hits = (i == up ? 1.0 : 0.0) + (j == up ? 1.0 : 0.0);
        if (hits != 0.0) l(at(i, j), at(i, j)) -= 0.5 * g * hits;
      }
  }

  if (ladder.dephasing != 0.0)
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j)
        if (i != j) l(at(i, j), at(i, j)) -= ladder.dephasing;
  return l;
}

/// Reciprocal condition estimate below which the constrained system counts
/// as rank deficient.
inline constexpr double singular_tolerance = 1e-12;

/// The Liouvillian restricted to Hermitian matrices, in real coordinates:
/// populations rho(k,k), then Re and Im of rho(i,j) for i < j.
template <int N>
using RealSuperoperator = Eigen::Matrix<double, N * N, N * N>;

namespace detail {

template <int N>
struct HermitianCoordinates {
  std::array<int, N * N> row{}, col{};
  std::array<bool, N * N> imag{};

  constexpr HermitianCoordinates() {
    int m = 0;
    for (int k = 0; k < N; ++k, ++m) row[m] = col[m] = k;
    for (int i = 0; i < N; ++i)
      for (int j = i + 1; j < N; ++j) {
        row[m] = row[m + 1] = i;
        col[m] = col[m + 1] = j;
        imag[m + 1] = true;
        m += 2;
      }
  }
};

}  // namespace detail

template <int N>
RealSuperoperator<N> real_liouvillian(const Ladder<N>& ladder) {
  static constexpr detail::HermitianCoordinates<N> c;
  const Superoperator<N> l = liouvillian(ladder);
  const cplx i_unit(0.0, 1.0);
  RealSuperoperator<N> r;
  for (int m = 0; m < N * N; ++m) {
    // Image of the m-th Hermitian basis matrix.
    const int a = c.row[m] * N + c.col[m];
    const int b = c.col[m] * N + c.row[m];
    Eigen::Matrix<cplx, N * N, 1> image;
    if (a == b)
      image = l.col(a);
    else if (!c.imag[m])
      image = l.col(a) + l.col(b);
    else
      image = i_unit * (l.col(a) - l.col(b));
    for (int n = 0; n < N * N; ++n) {
      const cplx v = image(c.row[n] * N + c.col[n]);
      r(n, m) = c.imag[n] ? v.imag() : v.real();
    }
  }
  return r;
}

/// Solves L(rho) = 0 with the population equation of level 1 replaced by
/// Tr(rho) = 1.
template <int N>
DensityMatrixN<N> steady_state(const Ladder<N>& ladder) {
  static constexpr detail::HermitianCoordinates<N> c;
  RealSuperoperator<N> l = real_liouvillian(ladder);
  const double scale = l.cwiseAbs().maxCoeff();
  if (!(scale > 0.0) || !std::isfinite(scale))
    throw SingularSystem("Liouvillian is identically zero or non-finite");
  l /= scale;
  l.row(0).setZero();
  l.row(0).head(N).setOnes();

  Eigen::Matrix<double, N * N, 1> rhs = Eigen::Matrix<double, N * N, 1>::Zero();
  rhs(0) = 1.0;

  const Eigen::PartialPivLU<RealSuperoperator<N>> lu(l);
  // The rcond estimate misses exact zero pivots, so check those directly.
  const auto pivots = lu.matrixLU().diagonal().cwiseAbs();
  const double rcond = std::min(lu.rcond(), pivots.minCoeff() / pivots.maxCoeff());
  if (!(rcond > singular_tolerance))
    throw SingularSystem("steady-state system is rank deficient (rcond " +
                         std::to_string(rcond) + ")");
  const Eigen::Matrix<double, N * N, 1> x = lu.solve(rhs);

  DensityMatrixN<N> rho;
  for (int k = 0; k < N; ++k) rho(k, k) = x(k);
  for (int m = N; m < N * N; m += 2) {
    const cplx v(x(m), x(m + 1));
    rho(c.row[m], c.col[m]) = v;
    rho(c.col[m], c.row[m]) = std::conj(v);
  }
  return rho;
}

}  // namespace rydberg::obe
