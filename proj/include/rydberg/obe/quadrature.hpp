#pragma once

// Fixed-node velocity quadratures for Maxwell-Boltzmann averages.
//
// The integrand of a Doppler average is a product of a broad Gaussian and
// narrow resonances sitting at a handful of known velocities.  The rule
// splits [-cut, cut] (in units of the thermal speed) at the midpoints between
// those resonance velocities, maps each piece with x = c + a*sinh(u) so nodes
// cluster around its resonance c, and applies Gauss-Legendre in u.

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <vector>

#include "rydberg/errors.hpp"

namespace rydberg::obe {

struct VelocityRule {
  std::vector<double> x;  // node, in thermal-speed units
  std::vector<double> w;  // weight, including the unit Gaussian density

  std::size_t size() const { return x.size(); }
  double total_weight() const {
    double s = 0.0;
    for (double wi : w) s += wi;
    return s;
  }
};

/// Gauss-Legendre nodes and weights on [-1, 1].
inline void compute_gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (int k = 1; k <= n; ++k) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
      }
      dp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    // Recompute the derivative at the converged node.
    double p0 = 1.0, p1 = 0.0;
    for (int k = 1; k <= n; ++k) {
      const double p2 = p1;
      p1 = p0;
      p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
    }
    dp = n * (z * p0 - p1) / (z * z - 1.0);
    nodes[i] = -z;
    nodes[n - 1 - i] = z;
    weights[i] = weights[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
}

struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Cached rule; node sets are immutable once built.
inline const GaussLegendreRule& gauss_legendre(int n) {
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<GaussLegendreRule>> cache;
  const std::lock_guard lock(mutex);
  auto& slot = cache[n];
  if (!slot) {
    slot = std::make_unique<GaussLegendreRule>();
    compute_gauss_legendre(n, slot->nodes, slot->weights);
  }
  return *slot;
}

inline double unit_gaussian(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

/// Merges features closer than `min_gap` and clamps them into [-cut, cut].
inline std::vector<double> merge_features(std::vector<double> features, double cut, double min_gap) {
  for (double& f : features) f = std::clamp(f, -cut, cut);
  std::sort(features.begin(), features.end());
  std::vector<double> out;
  for (double f : features)
    if (out.empty() || f - out.back() > min_gap) out.push_back(f);
  return out;
}

/// Sinh-clustered Gauss-Legendre rule for E[f(x)], x ~ N(0, 1), truncated to
/// [-cut, cut].  n == 1 is the one-point rule at x = 0.
inline VelocityRule resonance_rule(int n, double cut, double scale, std::vector<double> features) {
  if (n < 1) throw InvalidInput("quadrature needs at least one node");
  if (!(cut > 0.0) || !(scale > 0.0)) throw InvalidInput("quadrature cut and scale must be > 0");
  VelocityRule rule;
  if (n == 1) {
    rule.x = {0.0};
    rule.w = {1.0};
    return rule;
  }
  if (features.empty()) features.push_back(0.0);
  features = merge_features(std::move(features), cut, scale);
  // Too few nodes to give every resonance its own panel: keep the one
  // closest to zero velocity.
  if (n < 2 * static_cast<int>(features.size())) {
    const auto closest = std::min_element(features.begin(), features.end(),
                                          [](double a, double b) { return std::abs(a) < std::abs(b); });
    features = {*closest};
  }

  const std::size_t panels = features.size();
  std::vector<double> u_lo(panels), u_hi(panels);
  double total = 0.0;
  for (std::size_t p = 0; p < panels; ++p) {
    const double lo = p == 0 ? -cut : 0.5 * (features[p - 1] + features[p]);
    const double hi = p + 1 == panels ? cut : 0.5 * (features[p] + features[p + 1]);
    u_lo[p] = std::asinh((lo - features[p]) / scale);
    u_hi[p] = std::asinh((hi - features[p]) / scale);
    total += u_hi[p] - u_lo[p];
  }

  // Largest-remainder allocation, at least one node per panel.
  std::vector<int> count(panels, 1);
  int left = n - static_cast<int>(panels);
  std::vector<double> share(panels);
  for (std::size_t p = 0; p < panels; ++p) share[p] = left * (u_hi[p] - u_lo[p]) / total;
  int assigned = 0;
  for (std::size_t p = 0; p < panels; ++p) {
    const int whole = static_cast<int>(std::floor(share[p]));
    count[p] += whole;
    assigned += whole;
    share[p] -= whole;
  }
  for (; assigned < left; ++assigned) {
    const auto it = std::max_element(share.begin(), share.end());
    ++count[static_cast<std::size_t>(it - share.begin())];
    *it = -1.0;
  }

  for (std::size_t p = 0; p < panels; ++p) {
    const auto& [gx, gw] = gauss_legendre(count[p]);
    const double mid = 0.5 * (u_hi[p] + u_lo[p]);
    const double half = 0.5 * (u_hi[p] - u_lo[p]);
    for (int i = 0; i < count[p]; ++i) {
      const double u = mid + half * gx[i];
      const double x = features[p] + scale * std::sinh(u);
      rule.x.push_back(x);
      rule.w.push_back(scale * std::cosh(u) * half * gw[i] * unit_gaussian(x));
    }
  }
  return rule;
}

/// Real parts of the roots of c[0] + c[1] x + ... ; leading coefficients
/// negligible against the rest are dropped.
inline std::vector<double> polynomial_root_real_parts(std::vector<double> c) {
  double biggest = 0.0;
  for (double ci : c) biggest = std::max(biggest, std::abs(ci));
  if (biggest == 0.0) return {};
  while (c.size() > 1 && std::abs(c.back()) <= 1e-13 * biggest) c.pop_back();
  const int degree = static_cast<int>(c.size()) - 1;
  if (degree < 1) return {};
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(degree, degree);
  for (int i = 1; i < degree; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < degree; ++i) companion(i, degree - 1) = -c[i] / c[degree];
  const Eigen::VectorXcd roots = Eigen::EigenSolver<Eigen::MatrixXd>(companion, false).eigenvalues();
  std::vector<double> out;
  for (int i = 0; i < degree; ++i) out.push_back(roots(i).real());
  return out;
}

}  // namespace rydberg::obe
