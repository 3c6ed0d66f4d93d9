//
// Copyright 2026 The ulclip Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

// l1 geometry on the nonnegative orthant: norms, and l1 projections onto the
// scaled simplex {y >= 0 : |y|_1 <= r} and the annulus
// {y >= 0 : inner <= |y|_1 <= outer}.
//
// l1 projections onto these sets are not unique. Every routine here returns
// the radially scaled representative, whose distance to the input is the
// (unique) minimum distance.

#ifndef ULCLIP_GEOMETRY_H_
#define ULCLIP_GEOMETRY_H_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <ostream>
#include <span>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_format.h"

namespace ulclip {

// A d-dimensional sample vector in data units.
class Point {
 public:
  Point() = default;
  explicit Point(std::vector<double> coords) : coords_(std::move(coords)) {}
  Point(std::initializer_list<double> coords) : coords_(coords) {}

  static Point Zero(int d) { return Point(std::vector<double>(d, 0.0)); }

  int dim() const { return static_cast<int>(coords_.size()); }
  double operator[](std::size_t i) const { return coords_[i]; }
  double& operator[](std::size_t i) { return coords_[i]; }

  std::span<const double> coords() const { return coords_; }
  std::vector<double>& mutable_coords() { return coords_; }

  friend bool operator==(const Point&, const Point&) = default;

  friend std::ostream& operator<<(std::ostream& os, const Point& p) {
    os << '(';
    for (int i = 0; i < p.dim(); ++i) {
      os << (i ? ", " : "") << absl::StrFormat("%.17g", p[i]);
    }
    return os << ')';
  }

 private:
  std::vector<double> coords_;
};

// Radius of the scaled simplex.
struct SimplexBound {
  double radius = 0.0;

  static absl::StatusOr<SimplexBound> Create(double radius) {
    if (!(radius >= 0.0) || !std::isfinite(radius)) {
      return absl::InvalidArgumentError(
          absl::StrFormat("simplex radius must be finite and >= 0, got %g",
                          radius));
    }
    return SimplexBound{radius};
  }
};

struct AnnulusBound {
  double inner = 0.0;
  double outer = 0.0;

  static absl::StatusOr<AnnulusBound> Create(double inner, double outer) {
    if (!(inner >= 0.0) || !std::isfinite(outer) || !(inner <= outer)) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "annulus requires 0 <= inner <= outer, got inner=%g outer=%g", inner,
          outer));
    }
    return AnnulusBound{inner, outer};
  }
};

inline double L1Norm(std::span<const double> v) {
  double sum = 0.0;
  for (double x : v) sum += std::abs(x);
  return sum;
}
inline double L1Norm(const Point& p) { return L1Norm(p.coords()); }

inline double L1Distance(std::span<const double> a, std::span<const double> b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += std::abs(a[i] - b[i]);
  return sum;
}
inline double L1Distance(const Point& a, const Point& b) {
  return L1Distance(a.coords(), b.coords());
}

// Checks d >= 1, finiteness and nonnegativity.
inline absl::Status ValidatePoint(const Point& p) {
  if (p.dim() < 1) return absl::InvalidArgumentError("point has dimension 0");
  for (int i = 0; i < p.dim(); ++i) {
    if (!std::isfinite(p[i])) {
      return absl::InvalidArgumentError(
          absl::StrFormat("coordinate %d is not finite", i));
    }
    if (p[i] < 0.0) {
      return absl::InvalidArgumentError(
          absl::StrFormat("coordinate %d is negative (%g)", i, p[i]));
    }
  }
  return absl::OkStatus();
}

namespace internal {

enum class Side { kAtMost, kAtLeast };

// Moves one coordinate of `y` so that L1Norm(y) == target, trying the
// largest coordinates first. If exact equality is unreachable in binary64 the
// norm is left on `side` of target by ulp steps of the largest coordinate.
// `limit` bounds every coordinate from above (kAtMost) or below (kAtLeast)
// so the dominance relation with the original point survives the nudge.
inline void AbsorbNormResidue(std::vector<double>& y,
                              std::span<const double> limit, double target,
                              Side side) {
  auto clamp_at = [&](std::size_t k) {
    if (side == Side::kAtMost) {
      y[k] = std::clamp(y[k], 0.0, limit[k]);
    } else {
      y[k] = std::max(y[k], limit[k]);
    }
  };
  std::vector<std::size_t> order(y.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return y[i] > y[j]; });
  const std::vector<double> start = y;
  for (std::size_t k : order) {
    if (y[k] <= 0.0) break;
    for (int iter = 0; iter < 8; ++iter) {
      const double norm = L1Norm(y);
      if (norm == target) return;
      y[k] += target - norm;
      clamp_at(k);
    }
    if (L1Norm(y) == target) return;
    y = start;
  }
  // Fall back to ulp steps of the largest coordinate toward the admissible
  // side.
  const std::size_t k = order.front();
  for (int iter = 0; iter < 8; ++iter) {
    const double norm = L1Norm(y);
    if (norm == target) return;
    y[k] += target - norm;
    clamp_at(k);
  }
  for (int iter = 0; iter < 64; ++iter) {
    const double norm = L1Norm(y);
    if (side == Side::kAtMost ? norm <= target : norm >= target) return;
    y[k] = std::nextafter(
        y[k], side == Side::kAtMost ? 0.0 : std::numeric_limits<double>::max());
    clamp_at(k);
  }
}

}  // namespace internal

// l1 projection onto {y >= 0 : |y|_1 <= bound.radius}. Points already inside
// are returned unchanged; points outside are scaled down to the boundary,
// which moves them by exactly |p|_1 - radius.
inline absl::StatusOr<Point> ProjectOntoSimplex(const Point& p,
                                                SimplexBound bound) {
  if (absl::Status s = ValidatePoint(p); !s.ok()) return s;
  const double norm = L1Norm(p);
  if (norm <= bound.radius) return p;
  std::vector<double> y(p.coords().begin(), p.coords().end());
  const double scale = bound.radius / norm;
  for (double& v : y) v *= scale;
  internal::AbsorbNormResidue(y, p.coords(), bound.radius,
                              internal::Side::kAtMost);
  return Point(std::move(y));
}

// l1 projection onto the annulus. Points with too large a norm go to the outer
// boundary as in ProjectOntoSimplex; points with too small a norm are scaled
// up to the inner boundary, at distance inner - |p|_1. The zero vector has no
// direction and maps to the uniform point (inner/d, ..., inner/d); every point
// of the inner boundary is equally close to it. For d = 1 this is the scalar
// clamp min(max(x, inner), outer).
inline absl::StatusOr<Point> ProjectOntoAnnulus(const Point& p,
                                                AnnulusBound bound) {
  if (!(bound.inner >= 0.0) || !(bound.inner <= bound.outer)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "annulus requires 0 <= inner <= outer, got inner=%g outer=%g",
        bound.inner, bound.outer));
  }
  if (absl::Status s = ValidatePoint(p); !s.ok()) return s;
  const double norm = L1Norm(p);
  if (norm > bound.outer) {
    return ProjectOntoSimplex(p, SimplexBound{bound.outer});
  }
  if (norm >= bound.inner) return p;

  std::vector<double> y(p.coords().begin(), p.coords().end());
  if (norm == 0.0) {
    std::fill(y.begin(), y.end(), bound.inner / p.dim());
  } else {
    const double scale = bound.inner / norm;
    for (double& v : y) v *= scale;
  }
  internal::AbsorbNormResidue(y, p.coords(), bound.inner,
                              internal::Side::kAtLeast);
  // In a (near) zero-width annulus the upward nudge can overshoot the outer
  // radius; staying inside the outer ball takes precedence.
  if (L1Norm(y) > bound.outer) {
    const std::vector<double> ceiling = y;
    internal::AbsorbNormResidue(y, ceiling, bound.outer,
                                internal::Side::kAtMost);
  }
  return Point(std::move(y));
}

// Clamps each coordinate independently to [lo, hi]. This is the bounding rule
// for data in the cube [0, U]^d, reusing a scalar interval per dimension.
inline Point ClampCoordinatewise(const Point& p, double lo, double hi) {
  std::vector<double> y(p.coords().begin(), p.coords().end());
  for (double& v : y) v = std::clamp(v, lo, hi);
  return Point(std::move(y));
}

}  // namespace ulclip

#endif  // ULCLIP_GEOMETRY_H_
