#pragma once

// Independent reference computations used by the unit and acceptance tests.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include "umorse/energy.hpp"
#include "umorse/space.hpp"

namespace oracle {

using umorse::Configuration;
using umorse::ConfigTangent;
using umorse::Face;
using umorse::Point;
using umorse::SpaceSpec;
using umorse::Vec;

/// min over integer translates |lambda_i| <= reach of |q + lambda * period - p|.
inline double torus_distance(const std::vector<double>& periods, const Vec& p, const Vec& q, int reach = 3) {
  const int n = static_cast<int>(periods.size());
  std::vector<int> lam(static_cast<std::size_t>(n), -reach);
  double best = std::numeric_limits<double>::infinity();
  while (true) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
      const double e = q(i) + lam[static_cast<std::size_t>(i)] * periods[static_cast<std::size_t>(i)] - p(i);
      s += e * e;
    }
    best = std::min(best, std::sqrt(s));
    int i = 0;
    while (i < n && ++lam[static_cast<std::size_t>(i)] > reach) lam[static_cast<std::size_t>(i++)] = -reach;
    if (i == n) break;
  }
  return best;
}

/// Reflection unfolding of the double of [0,a]x[0,b]: images of q under the
/// group generated by reflections in the lines x = ma, y = nb. An even number
/// of reflections keeps the face, an odd number swaps it.
inline double pillow_distance(double a, double b, const Vec& p, Face pf, const Vec& q, Face qf, int reach = 3) {
  double best = std::numeric_limits<double>::infinity();
  const bool same = pf == qf || pf == Face::none || qf == Face::none;
  for (int m = -reach; m <= reach; ++m) {
    for (int n = -reach; n <= reach; ++n) {
      for (int sx : {1, -1}) {
        for (int sy : {1, -1}) {
          // (sx * q.x + 2am, sy * q.y + 2bn) uses (sx < 0) + (sy < 0) reflections mod 2.
          const bool swaps = (sx < 0) != (sy < 0);
          const bool edge = q(0) == 0.0 || q(0) == a || q(1) == 0.0 || q(1) == b || pf == Face::none ||
                            qf == Face::none;
          if (!edge && swaps == same) continue;
          const double dx = sx * q(0) + 2 * a * m - p(0);
          const double dy = sy * q(1) + 2 * b * n - p(1);
          best = std::min(best, std::hypot(dx, dy));
        }
      }
    }
  }
  return best;
}

/// Laplacian spectrum of the k-cycle scaled by 2k, each eigenvalue repeated n
/// times: the Hessian of k * sum |x_{i+1} - x_i|^2 on (R^n)^k.
inline std::vector<double> ring_hessian_spectrum(int k, int n) {
  std::vector<double> out;
  for (int j = 0; j < k; ++j)
    for (int r = 0; r < n; ++r) out.push_back(2.0 * k * (2.0 - 2.0 * std::cos(2 * std::numbers::pi * j / k)));
  std::sort(out.begin(), out.end());
  return out;
}

/// Forward difference quotient of the uniform energy along exp_map.
inline double energy_quotient(const Configuration& x, const ConfigTangent& v, double h) {
  return (umorse::uniform_energy(umorse::exp_map(x, v, h)) - umorse::uniform_energy(x)) / h;
}

/// Some choice of minimizing segments forms a broken geodesic with equal
/// segment lengths and straight joints.
inline bool straight_equal_chain(const Configuration& x, double tol) {
  const int k = x.k();
  std::vector<std::vector<umorse::MinGeodesic>> sets;
  for (int i = 0; i < k; ++i) {
    const Point& p = x.points[static_cast<std::size_t>(i)];
    const Point& q = x.points[static_cast<std::size_t>((i + 1) % k)];
    if (umorse::distance(x.space, p, q) == 0.0) return false;
    sets.push_back(umorse::minimizing_geodesics(x.space, p, q, 1e-9));
  }
  std::vector<std::size_t> idx(sets.size(), 0);
  while (true) {
    bool ok = true;
    const double l0 = sets[0][idx[0]].length;
    for (int i = 0; i < k && ok; ++i) {
      const auto& in = sets[static_cast<std::size_t>((i + k - 1) % k)][idx[static_cast<std::size_t>((i + k - 1) % k)]];
      const auto& out = sets[static_cast<std::size_t>(i)][idx[static_cast<std::size_t>(i)]];
      ok = std::abs(out.length - l0) <= tol && (in.v1 - out.v0).norm() * out.length <= tol;
    }
    if (ok) return true;
    std::size_t i = 0;
    while (i < sets.size() && ++idx[i] == sets[i].size()) idx[i++] = 0;
    if (i == sets.size()) return false;
  }
}

inline Vec uniform_in_box(std::mt19937_64& rng, const std::vector<double>& sides) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Vec v(static_cast<Eigen::Index>(sides.size()));
  for (std::size_t i = 0; i < sides.size(); ++i) v(static_cast<Eigen::Index>(i)) = u(rng) * sides[i];
  return v;
}

inline Vec gaussian(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> g(0.0, 1.0);
  Vec v(n);
  for (int i = 0; i < n; ++i) v(i) = g(rng);
  return v;
}

inline ConfigTangent unit_direction(std::mt19937_64& rng, int k, int n) {
  ConfigTangent v;
  double s = 0.0;
  for (int i = 0; i < k; ++i) {
    v.push_back(gaussian(rng, n));
    s += v.back().squaredNorm();
  }
  for (auto& c : v) c /= std::sqrt(s);
  return v;
}

}  // namespace oracle
