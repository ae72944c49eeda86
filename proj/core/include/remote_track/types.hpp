#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace rtrack {

using Vec = std::vector<double>;

/// Axis-aligned box, lo[i] <= hi[i] per axis.
struct Box {
  Vec lo;
  Vec hi;

  int dim() const { return static_cast<int>(lo.size()); }

  bool contains(std::span<const double> x, double tol = 0.0) const {
    for (std::size_t i = 0; i < lo.size(); ++i) {
      if (x[i] < lo[i] - tol || x[i] > hi[i] + tol) return false;
    }
    return true;
  }

  /// Box grown by `margin` on every side of every axis.
  Box inflated(double margin) const {
    Box out = *this;
    for (std::size_t i = 0; i < lo.size(); ++i) {
      out.lo[i] -= margin;
      out.hi[i] += margin;
    }
    return out;
  }

  /// Box scaled by `factor` about its center, per axis.
  Box scaled(double factor) const {
    Box out = *this;
    for (std::size_t i = 0; i < lo.size(); ++i) {
      const double c = 0.5 * (lo[i] + hi[i]);
      const double half = 0.5 * (hi[i] - lo[i]) * factor;
      out.lo[i] = c - half;
      out.hi[i] = c + half;
    }
    return out;
  }
};

inline bool all_finite(std::span<const double> x) {
  for (double v : x) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

inline double inf_norm(std::span<const double> x) {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::abs(v));
  return m;
}

inline double euclid_norm(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

inline double euclid_dist(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

}  // namespace rtrack
